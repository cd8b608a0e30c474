#pragma once

// Domain paths: hierarchical names like "@ICD11@Respiratory@Anatomical".
// A path is a value; the specialization order is prefix order on segments
// (child specializes parent iff parent's segments prefix the child's).

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdc/errors.hpp"

namespace cdc {

inline bool is_name_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_';
}

inline bool is_valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!is_name_char(c)) return false;
    return true;
}

class DomainPath {
public:
    // Strict parse: leading '@' required (not repaired), segments non-empty,
    // segment alphabet [A-Za-z0-9_].
    static DomainPath parse(std::string_view s) {
        if (s.empty() || s[0] != '@')
            raise(ErrorCode::MalformedDomain,
                  "domain must start with '@': \"" + std::string(s) + "\"");
        std::vector<std::string> segs;
        size_t pos = 1;
        while (true) {
            size_t next = s.find('@', pos);
            std::string_view seg = s.substr(pos, next == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : next - pos);
            if (!is_valid_name(seg))
                raise(ErrorCode::MalformedDomain,
                      "bad segment in \"" + std::string(s) + "\"");
            segs.emplace_back(seg);
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        return DomainPath(std::move(segs));
    }

    static DomainPath from_segments(std::vector<std::string> segs) {
        for (const auto& seg : segs)
            if (!is_valid_name(seg))
                raise(ErrorCode::MalformedDomain, "bad segment \"" + seg + "\"");
        if (segs.empty())
            raise(ErrorCode::MalformedDomain, "empty domain path");
        return DomainPath(std::move(segs));
    }

    const std::string& raw() const { return raw_; }
    const std::vector<std::string>& segments() const { return segments_; }
    size_t depth() const { return segments_.size(); }

    // First k segments; pre: 1 <= k <= depth().
    DomainPath prefix(size_t k) const {
        return DomainPath(std::vector<std::string>(segments_.begin(),
                                                   segments_.begin() + k));
    }

    std::optional<DomainPath> parent() const {
        if (depth() <= 1) return std::nullopt;
        return prefix(depth() - 1);
    }

    // true iff ancestor's segments are a (proper or equal) prefix of ours
    bool specializes(const DomainPath& ancestor) const {
        if (ancestor.depth() > depth()) return false;
        for (size_t i = 0; i < ancestor.depth(); ++i)
            if (segments_[i] != ancestor.segments_[i]) return false;
        return true;
    }

    // Longest common prefix; nullopt when the roots differ.
    static std::optional<DomainPath> common_ancestor(const DomainPath& a,
                                                     const DomainPath& b) {
        size_t n = std::min(a.depth(), b.depth());
        size_t k = 0;
        while (k < n && a.segments_[k] == b.segments_[k]) ++k;
        if (k == 0) return std::nullopt;
        return a.prefix(k);
    }

    friend bool operator==(const DomainPath& a, const DomainPath& b) {
        return a.raw_ == b.raw_;
    }
    friend std::strong_ordering operator<=>(const DomainPath& a,
                                            const DomainPath& b) {
        return a.raw_ <=> b.raw_;
    }

private:
    explicit DomainPath(std::vector<std::string> segs)
        : segments_(std::move(segs)) {
        for (const auto& seg : segments_) {
            raw_ += '@';
            raw_ += seg;
        }
    }

    std::vector<std::string> segments_;
    std::string raw_;
};

inline DomainPath parse_domain(std::string_view s) { return DomainPath::parse(s); }

// Default name for the join domain created by domain fusion: a fresh root
// that specializes neither input.
inline DomainPath default_fused_domain(const DomainPath& a, const DomainPath& b) {
    auto flatten = [](const DomainPath& p) {
        std::string out;
        for (const auto& seg : p.segments()) {
            if (!out.empty()) out += '_';
            out += seg;
        }
        return out;
    };
    return DomainPath::parse("@Fused@" + flatten(a) + "@" + flatten(b));
}

enum class TemporalOrder { before, after, equal, incomparable };

inline const char* to_string(TemporalOrder o) {
    switch (o) {
        case TemporalOrder::before:       return "before";
        case TemporalOrder::after:        return "after";
        case TemporalOrder::equal:        return "equal";
        case TemporalOrder::incomparable: return "incomparable";
    }
    return "incomparable";
}

namespace detail {

struct OrdinalSuffix {
    std::string_view stem;
    std::string_view digits;
};

// Splits "Turn12" into {"Turn", "12"}; rejects all-digit and digit-free names.
inline std::optional<OrdinalSuffix> split_ordinal(std::string_view seg) {
    size_t i = seg.size();
    while (i > 0 && seg[i - 1] >= '0' && seg[i - 1] <= '9') --i;
    if (i == 0 || i == seg.size()) return std::nullopt;
    return OrdinalSuffix{seg.substr(0, i), seg.substr(i)};
}

// Numeric comparison of digit strings without overflow: strip leading
// zeros, then compare by length, then lexicographically.
inline int compare_digits(std::string_view a, std::string_view b) {
    a.remove_prefix(std::min(a.find_first_not_of('0'), a.size()));
    b.remove_prefix(std::min(b.find_first_not_of('0'), b.size()));
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

} // namespace detail

// Orders sibling domains whose last segments share an alphabetic stem and
// differ in an integer suffix (Turn3 vs Turn7, Session1 vs Session2).
// Anything else is incomparable; equal paths compare equal.
inline TemporalOrder temporal_compare(const DomainPath& a, const DomainPath& b) {
    if (a == b) return TemporalOrder::equal;
    if (a.depth() != b.depth()) return TemporalOrder::incomparable;
    for (size_t i = 0; i + 1 < a.depth(); ++i)
        if (a.segments()[i] != b.segments()[i]) return TemporalOrder::incomparable;
    auto sa = detail::split_ordinal(a.segments().back());
    auto sb = detail::split_ordinal(b.segments().back());
    if (!sa || !sb || sa->stem != sb->stem) return TemporalOrder::incomparable;
    int c = detail::compare_digits(sa->digits, sb->digits);
    if (c == 0) return TemporalOrder::incomparable; // e.g. Turn03 vs Turn3
    return c < 0 ? TemporalOrder::before : TemporalOrder::after;
}

} // namespace cdc
