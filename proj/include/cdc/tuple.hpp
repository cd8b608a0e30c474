#pragma once

// Wire records. A FourTuple {from, rel, domain, to} is the atomic unit of
// both storage and inference; a BridgeRecord {from, rel, domain_1, domain_2,
// to?} is a cross-domain link stored outside every fiber. The exact JSON key
// set distinguishes the two kinds; unknown keys are rejected.

#include <compare>
#include <optional>
#include <string>
#include <tuple>

#include <json.hpp>

#include "cdc/domain.hpp"
#include "cdc/errors.hpp"

namespace cdc {

struct FourTuple {
    std::string from;
    std::string rel;
    DomainPath domain;
    std::string to;

    FourTuple(std::string from_, std::string rel_, DomainPath domain_,
              std::string to_)
        : from(std::move(from_)),
          rel(std::move(rel_)),
          domain(std::move(domain_)),
          to(std::move(to_)) {
        if (!is_valid_name(from) || !is_valid_name(rel) || !is_valid_name(to))
            raise(ErrorCode::MalformedTuple,
                  "names must match [A-Za-z0-9_]+ in {" + from + ", " + rel +
                      ", " + domain.raw() + ", " + to + "}");
    }

    friend bool operator==(const FourTuple& a, const FourTuple& b) {
        return a.domain == b.domain && a.rel == b.rel && a.from == b.from &&
               a.to == b.to;
    }

    // Canonical order (domain, rel, from, to); also the save order.
    friend std::strong_ordering operator<=>(const FourTuple& a,
                                            const FourTuple& b) {
        return std::tie(a.domain.raw(), a.rel, a.from, a.to) <=>
               std::tie(b.domain.raw(), b.rel, b.from, b.to);
    }

    nlohmann::json to_json() const {
        return {{"from", from}, {"rel", rel}, {"domain", domain.raw()}, {"to", to}};
    }

    static FourTuple from_json(const nlohmann::json& j) {
        if (!j.is_object() || j.size() != 4 || !j.contains("from") ||
            !j.contains("rel") || !j.contains("domain") || !j.contains("to"))
            raise(ErrorCode::MalformedTuple,
                  "four-tuple needs exactly the keys from/rel/domain/to");
        for (const auto& [k, v] : j.items())
            if (!v.is_string())
                raise(ErrorCode::MalformedTuple, "key \"" + k + "\" must be a string");
        return FourTuple(j.at("from").get<std::string>(),
                         j.at("rel").get<std::string>(),
                         DomainPath::parse(j.at("domain").get<std::string>()),
                         j.at("to").get<std::string>());
    }
};

enum class BridgeRel { same_entity_across, analogous_to, fuses_with };

inline const char* to_string(BridgeRel r) {
    switch (r) {
        case BridgeRel::same_entity_across: return "same_entity_across";
        case BridgeRel::analogous_to:       return "analogous_to";
        case BridgeRel::fuses_with:         return "fuses_with";
    }
    return "";
}

inline std::optional<BridgeRel> bridge_rel_from_string(std::string_view s) {
    if (s == "same_entity_across") return BridgeRel::same_entity_across;
    if (s == "analogous_to") return BridgeRel::analogous_to;
    if (s == "fuses_with") return BridgeRel::fuses_with;
    return std::nullopt;
}

struct BridgeRecord {
    std::string from;
    BridgeRel rel;
    DomainPath domain_1;
    DomainPath domain_2;
    // Required for analogous_to (the analog concept); names the fused domain
    // for fuses_with; preserved opaquely if present on same_entity_across.
    std::optional<std::string> to;

    BridgeRecord(std::string from_, BridgeRel rel_, DomainPath d1, DomainPath d2,
                 std::optional<std::string> to_ = std::nullopt)
        : from(std::move(from_)),
          rel(rel_),
          domain_1(std::move(d1)),
          domain_2(std::move(d2)),
          to(std::move(to_)) {
        if (!is_valid_name(from))
            raise(ErrorCode::MalformedTuple, "bad bridge concept \"" + from + "\"");
        if (domain_1 == domain_2)
            raise(ErrorCode::MalformedTuple,
                  "bridge domains must differ: " + domain_1.raw());
        if (rel == BridgeRel::analogous_to && !to)
            raise(ErrorCode::MalformedTuple, "analogous_to requires a to field");
    }

    friend bool operator==(const BridgeRecord& a, const BridgeRecord& b) {
        return a.rel == b.rel && a.from == b.from && a.domain_1 == b.domain_1 &&
               a.domain_2 == b.domain_2 && a.to == b.to;
    }

    friend std::strong_ordering operator<=>(const BridgeRecord& a,
                                            const BridgeRecord& b) {
        auto key = [](const BridgeRecord& r) {
            return std::make_tuple(r.domain_1.raw(), r.domain_2.raw(),
                                   std::string(to_string(r.rel)), r.from,
                                   r.to.value_or(""));
        };
        return key(a) <=> key(b);
    }

    // True when the record links the unordered pair {a, b}.
    bool links(const DomainPath& a, const DomainPath& b) const {
        return (domain_1 == a && domain_2 == b) ||
               (domain_1 == b && domain_2 == a);
    }

    nlohmann::json to_json() const {
        nlohmann::json j = {{"from", from},
                            {"rel", to_string(rel)},
                            {"domain_1", domain_1.raw()},
                            {"domain_2", domain_2.raw()}};
        if (to) j["to"] = *to;
        return j;
    }

    static BridgeRecord from_json(const nlohmann::json& j) {
        size_t expected = j.contains("to") ? 5 : 4;
        if (!j.is_object() || j.size() != expected || !j.contains("from") ||
            !j.contains("rel") || !j.contains("domain_1") || !j.contains("domain_2"))
            raise(ErrorCode::MalformedTuple,
                  "bridge record needs the keys from/rel/domain_1/domain_2[/to]");
        for (const auto& [k, v] : j.items())
            if (!v.is_string())
                raise(ErrorCode::MalformedTuple, "key \"" + k + "\" must be a string");
        auto rel = bridge_rel_from_string(j.at("rel").get<std::string>());
        if (!rel)
            raise(ErrorCode::MalformedTuple,
                  "unknown bridge relation \"" + j.at("rel").get<std::string>() + "\"");
        std::optional<std::string> to;
        if (j.contains("to")) to = j.at("to").get<std::string>();
        return BridgeRecord(j.at("from").get<std::string>(), *rel,
                            DomainPath::parse(j.at("domain_1").get<std::string>()),
                            DomainPath::parse(j.at("domain_2").get<std::string>()),
                            std::move(to));
    }
};

} // namespace cdc
