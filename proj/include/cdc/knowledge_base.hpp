#pragma once

// KnowledgeBase: all fibers keyed by domain, the domain lattice, and the
// bridge store. JSONL persistence lives here too: one JSON object per line,
// four-tuples and bridge records distinguished by exact key set. There are
// no on-disk indexes; indexes are rebuilt on load.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "cdc/fiber.hpp"
#include "cdc/lattice.hpp"
#include "cdc/tuple.hpp"

namespace cdc {

inline constexpr std::string_view kUniversalDomain = "@Universal";
inline constexpr std::string_view kMetaDomain = "@Meta@Logic";

inline DomainPath universal_domain() { return DomainPath::parse(kUniversalDomain); }
inline DomainPath meta_domain() { return DomainPath::parse(kMetaDomain); }

// Bridge records live outside every fiber; their wire shape
// (domain_1/domain_2) breaks the four-tuple schema.
class BridgeStore {
public:
    bool add(const BridgeRecord& b) { return records_.insert(b).second; }
    bool contains(const BridgeRecord& b) const { return records_.count(b) > 0; }
    size_t size() const { return records_.size(); }
    const std::set<BridgeRecord>& all() const { return records_; }

    std::vector<const BridgeRecord*> between(const DomainPath& a,
                                             const DomainPath& b) const {
        std::vector<const BridgeRecord*> out;
        for (const auto& r : records_)
            if (r.links(a, b)) out.push_back(&r);
        return out;
    }

private:
    std::set<BridgeRecord> records_;
};

enum class AddResult { added, duplicate };
enum class RemoveResult { removed, absent };

class KnowledgeBase {
public:
    // Raw add: bypasses validation, not the meta freeze.
    AddResult add(const FourTuple& t) {
        check_meta_mutable(t.domain);
        lattice_.add(t.domain);
        auto it = fibers_.find(t.domain.raw());
        if (it == fibers_.end())
            it = fibers_.emplace(t.domain.raw(), Fiber(t.domain)).first;
        return it->second.add(t) ? AddResult::added : AddResult::duplicate;
    }

    RemoveResult remove(const FourTuple& t) {
        check_meta_mutable(t.domain);
        auto it = fibers_.find(t.domain.raw());
        if (it == fibers_.end()) return RemoveResult::absent;
        return it->second.remove(t) ? RemoveResult::removed : RemoveResult::absent;
    }

    const Fiber* fiber(const DomainPath& d) const {
        auto it = fibers_.find(d.raw());
        return it == fibers_.end() ? nullptr : &it->second;
    }

    FiberView view(const DomainPath& d, bool include_universal = false) const {
        const Fiber* shared =
            include_universal ? fiber(universal_domain()) : nullptr;
        return FiberView(fiber(d), shared);
    }

    const Fiber* universal_fiber() const { return fiber(universal_domain()); }
    const Fiber* meta_fiber() const { return fiber(meta_domain()); }

    void register_domain(const DomainPath& d) { lattice_.add(d); }

    DomainLattice& lattice() { return lattice_; }
    const DomainLattice& lattice() const { return lattice_; }

    BridgeStore& bridges() { return bridges_; }
    const BridgeStore& bridges() const { return bridges_; }

    const std::map<std::string, Fiber>& fibers() const { return fibers_; }

    void freeze_meta() { meta_frozen_ = true; }
    bool meta_frozen() const { return meta_frozen_; }

    // N: total stored records across all fibers
    size_t total_records() const {
        size_t n = 0;
        for (const auto& [_, f] : fibers_) n += f.size();
        return n;
    }

    // K: non-meta, non-universal fibers
    size_t knowledge_fiber_count() const {
        size_t k = 0;
        for (const auto& [raw, f] : fibers_) {
            if (raw == kMetaDomain || raw == kUniversalDomain) continue;
            if (!f.empty()) ++k;
        }
        return k;
    }

    bool same_records(const KnowledgeBase& other) const {
        auto collect = [](const KnowledgeBase& kb) {
            std::set<FourTuple> all;
            for (const auto& [_, f] : kb.fibers_)
                all.insert(f.records().begin(), f.records().end());
            return all;
        };
        return collect(*this) == collect(other) &&
               bridges_.all() == other.bridges_.all();
    }

private:
    void check_meta_mutable(const DomainPath& d) const {
        if (meta_frozen_ && d.raw() == kMetaDomain)
            raise(ErrorCode::MetaFrozen,
                  "F(@Meta@Logic) is read-only while the session is active");
    }

    std::map<std::string, Fiber> fibers_;
    DomainLattice lattice_;
    BridgeStore bridges_;
    bool meta_frozen_ = false;
};

// ---- JSONL wire format -----------------------------------------------

using ParsedLine = std::variant<FourTuple, BridgeRecord>;

// One JSON object; the exact key set picks the record kind.
inline ParsedLine parse_record(const nlohmann::json& j) {
    if (!j.is_object())
        raise(ErrorCode::MalformedTuple, "line is not a JSON object");
    if (j.contains("domain_1") || j.contains("domain_2"))
        return BridgeRecord::from_json(j);
    return FourTuple::from_json(j);
}

inline ParsedLine parse_record_line(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
        raise(ErrorCode::ParseError, "invalid JSON");
    return parse_record(j);
}

struct LoadStats {
    size_t records = 0;     // four-tuples newly added
    size_t bridges = 0;     // bridge records newly added
    size_t duplicates = 0;
    size_t rejected_meta = 0; // meta lines skipped because the meta fiber is frozen
    size_t lines = 0;
};

// Streams a JSONL source into kb. Bridge lines are stored verbatim (runtime
// bridge validation is a separate operation); meta lines hitting a frozen
// meta fiber are counted and skipped rather than aborting the load.
inline LoadStats load_jsonl_stream(KnowledgeBase& kb, std::istream& in,
                                   const std::string& source) {
    LoadStats stats;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++stats.lines;
        try {
            ParsedLine rec = parse_record_line(line);
            if (std::holds_alternative<FourTuple>(rec)) {
                const auto& t = std::get<FourTuple>(rec);
                if (kb.meta_frozen() && t.domain.raw() == kMetaDomain) {
                    ++stats.rejected_meta;
                    continue;
                }
                if (kb.add(t) == AddResult::added)
                    ++stats.records;
                else
                    ++stats.duplicates;
            } else {
                const auto& b = std::get<BridgeRecord>(rec);
                kb.register_domain(b.domain_1);
                kb.register_domain(b.domain_2);
                // fused join domains are part of the lattice, so they are
                // re-derived from their bridge record on load
                if (b.rel == BridgeRel::fuses_with)
                    kb.lattice().add_fused(
                        b.to ? DomainPath::parse(*b.to)
                             : default_fused_domain(b.domain_1, b.domain_2));
                if (kb.bridges().add(b))
                    ++stats.bridges;
                else
                    ++stats.duplicates;
            }
        } catch (const Error& e) {
            raise(e.code() == ErrorCode::ParseError ? ErrorCode::ParseError
                                                    : ErrorCode::MalformedTuple,
                  source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return stats;
}

inline LoadStats load_jsonl_into(KnowledgeBase& kb,
                                 const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::IoError, "cannot open " + path.string());
    return load_jsonl_stream(kb, in, path.filename().string());
}

inline KnowledgeBase load_jsonl(const std::filesystem::path& path) {
    KnowledgeBase kb;
    load_jsonl_into(kb, path);
    return kb;
}

// Deterministic save: fiber records sorted by (domain, rel, from, to), then
// bridge records sorted by (domain_1, domain_2, rel, from, to). Returns the
// number of lines written; load(save(kb)) reproduces an equal kb.
inline size_t save_jsonl_stream(const KnowledgeBase& kb, std::ostream& out) {
    size_t n = 0;
    for (const auto& [_, f] : kb.fibers())
        for (const auto& t : f.records()) {
            out << t.to_json().dump() << '\n';
            ++n;
        }
    for (const auto& b : kb.bridges().all()) {
        out << b.to_json().dump() << '\n';
        ++n;
    }
    return n;
}

inline size_t save_jsonl(const KnowledgeBase& kb,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        raise(ErrorCode::IoError, "cannot write " + path.string());
    size_t n = save_jsonl_stream(kb, out);
    out.flush();
    if (!out)
        raise(ErrorCode::IoError, "short write to " + path.string());
    return n;
}

} // namespace cdc
