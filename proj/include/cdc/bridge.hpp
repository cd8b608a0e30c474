#pragma once

// Cross-domain operations. Bridge records never enter a fiber: they live in
// the bridge store, keyed by unordered domain pair. fuses_with grows the
// lattice with a fresh join domain that specializes neither input.

#include <array>
#include <set>
#include <string>
#include <vector>

#include "cdc/knowledge_base.hpp"

namespace cdc {

struct BridgeOutcome {
    bool accepted = true;
    std::string reason; // "unknown_concept" | "analogy_failed" | ""
};

struct AnalogyResult {
    bool holds = true;
    // matched (rel, x, y): for each out-edge rel->x of a, the lexicographically
    // first matching target y of b
    std::vector<std::array<std::string, 3>> witness;
};

// Existential out-neighborhood matching over a declared relation
// sub-signature: for every rel in rels and every edge a->x in F(d1) there
// must be some edge b->y in F(d2) with the same rel. Vacuously true when
// rels cover no edges of a.
inline AnalogyResult check_analogy(const KnowledgeBase& kb,
                                   const std::string& a, const DomainPath& d1,
                                   const std::string& b, const DomainPath& d2,
                                   const std::set<std::string>& rels) {
    AnalogyResult result;
    const Fiber* f1 = kb.fiber(d1);
    const Fiber* f2 = kb.fiber(d2);
    for (const auto& rel : rels) {
        const std::set<std::string>* a_targets =
            f1 ? f1->forward(a, rel) : nullptr;
        if (!a_targets) continue;
        const std::set<std::string>* b_targets =
            f2 ? f2->forward(b, rel) : nullptr;
        if (!b_targets || b_targets->empty()) {
            result.holds = false;
            continue;
        }
        for (const auto& x : *a_targets)
            result.witness.push_back({rel, x, *b_targets->begin()});
    }
    return result;
}

// Out-relation signature of a concept within one fiber.
inline std::set<std::string> out_signature(const KnowledgeBase& kb,
                                           const std::string& concept_name,
                                           const DomainPath& d) {
    std::set<std::string> rels;
    if (const Fiber* f = kb.fiber(d))
        for (const auto& [key, targets] : f->forward_index())
            if (key.first == concept_name && !targets.empty())
                rels.insert(key.second);
    return rels;
}

// same_entity_across: accepted iff the concept occurs in both fibers.
// analogous_to: accepted iff the partial-structure check passes over the
// subject's full out-signature in F(domain_1).
// fuses_with: always accepted; the named (or default) fused domain joins the
// lattice as a fresh node ordered under neither input.
inline BridgeOutcome add_bridge(KnowledgeBase& kb, const BridgeRecord& b) {
    kb.register_domain(b.domain_1);
    kb.register_domain(b.domain_2);
    switch (b.rel) {
        case BridgeRel::same_entity_across: {
            const Fiber* f1 = kb.fiber(b.domain_1);
            const Fiber* f2 = kb.fiber(b.domain_2);
            if (!f1 || !f2 || !f1->has_concept(b.from) || !f2->has_concept(b.from))
                return {false, "unknown_concept"};
            break;
        }
        case BridgeRel::analogous_to: {
            auto rels = out_signature(kb, b.from, b.domain_1);
            if (!rels.empty() &&
                !check_analogy(kb, b.from, b.domain_1, *b.to, b.domain_2, rels).holds)
                return {false, "analogy_failed"};
            break;
        }
        case BridgeRel::fuses_with: {
            DomainPath fused = b.to ? DomainPath::parse(*b.to)
                                    : default_fused_domain(b.domain_1, b.domain_2);
            kb.lattice().add_fused(fused);
            break;
        }
    }
    kb.bridges().add(b);
    return {true, ""};
}

// Concepts bridged between d1 and d2, unioned with concepts appearing as a
// subject in both fibers.
inline std::set<std::string> cross_fiber_intersection(const KnowledgeBase& kb,
                                                      const DomainPath& d1,
                                                      const DomainPath& d2) {
    std::set<std::string> out;
    for (const BridgeRecord* b : kb.bridges().between(d1, d2))
        if (b->rel == BridgeRel::same_entity_across) out.insert(b->from);
    const Fiber* f1 = kb.fiber(d1);
    const Fiber* f2 = kb.fiber(d2);
    if (f1 && f2) {
        std::set<std::string> s2 = f2->subjects();
        for (const auto& subject : f1->subjects())
            if (s2.count(subject)) out.insert(subject);
    }
    return out;
}

// Records in F(d2) and its descendants whose rel is in rels and whose from
// or to concept also occurs in F(d1) or its descendants.
inline std::vector<FourTuple> cross_session_diff(const KnowledgeBase& kb,
                                                 const DomainPath& d1,
                                                 const DomainPath& d2,
                                                 const std::set<std::string>& rels) {
    std::set<std::string> seen_in_d1;
    for (const auto& [raw, fiber] : kb.fibers()) {
        if (!fiber.domain().specializes(d1)) continue;
        for (const auto& t : fiber.records()) {
            seen_in_d1.insert(t.from);
            seen_in_d1.insert(t.to);
        }
    }
    std::vector<FourTuple> out;
    for (const auto& [raw, fiber] : kb.fibers()) {
        if (!fiber.domain().specializes(d2)) continue;
        for (const auto& t : fiber.records())
            if (rels.count(t.rel) &&
                (seen_in_d1.count(t.from) || seen_in_d1.count(t.to)))
                out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cdc
