#pragma once

// Write-time falsification: every validated insert is checked against its
// target fiber before acceptance. Checks run in a fixed order -- meta
// freeze, causal reversal, acyclicity, contradiction rules -- and a
// rejected tuple is never stored. Rejections carry a witness path whose
// edges all lie in the target fiber.

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdc/knowledge_base.hpp"
#include "cdc/meta_typing.hpp"

namespace cdc {

enum class Verdict { accepted, rejected };

inline const char* to_string(Verdict v) {
    return v == Verdict::accepted ? "accepted" : "rejected";
}

enum class RejectReason {
    none,
    causal_reversal,
    cycle,
    constraint_violation,
    contradiction,
    meta_frozen,
};

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none:                 return "none";
        case RejectReason::causal_reversal:      return "causal_reversal";
        case RejectReason::cycle:                return "cycle";
        case RejectReason::constraint_violation: return "constraint_violation";
        case RejectReason::contradiction:        return "contradiction";
        case RejectReason::meta_frozen:          return "meta_frozen";
    }
    return "none";
}

struct ValidationOutcome {
    Verdict verdict = Verdict::accepted;
    RejectReason reason = RejectReason::none;
    std::vector<FourTuple> witness;
    bool newly_added = false; // accepted and not a duplicate

    bool accepted() const { return verdict == Verdict::accepted; }

    nlohmann::json to_json() const {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& t : witness) w.push_back(t.to_json());
        return {{"verdict", to_string(verdict)},
                {"reason", to_string(reason)},
                {"witness", std::move(w)}};
    }
};

// Two relations that may not both be asserted for the same subject in the
// same domain.
struct ContradictionRule {
    std::string rel_a;
    std::string rel_b;

    ContradictionRule(std::string a, std::string b)
        : rel_a(std::move(a)), rel_b(std::move(b)) {
        if (!is_valid_name(rel_a) || !is_valid_name(rel_b) || rel_a == rel_b)
            raise(ErrorCode::MalformedTuple,
                  "contradiction rule needs two distinct relation names");
    }

    bool same_pair(const ContradictionRule& o) const {
        return (rel_a == o.rel_a && rel_b == o.rel_b) ||
               (rel_a == o.rel_b && rel_b == o.rel_a);
    }
};

struct AuditEntry {
    FourTuple tuple;
    ValidationOutcome outcome;

    nlohmann::json to_json() const {
        nlohmann::json j = outcome.to_json();
        j["tuple"] = tuple.to_json();
        return j;
    }
};

// Append-only record of every insert attempt, accepted or rejected.
class AuditLog {
public:
    void append(AuditEntry e) { entries_.push_back(std::move(e)); }
    const std::vector<AuditEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    void clear() { entries_.clear(); }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : entries_) arr.push_back(e.to_json());
        return arr;
    }

private:
    std::vector<AuditEntry> entries_;
};

// Shortest rel-path from src to dst inside one fiber; empty path when
// src == dst (zero steps). nullopt when unreachable.
inline std::optional<std::vector<FourTuple>> find_path(const Fiber* fiber,
                                                       const std::string& src,
                                                       const std::string& dst,
                                                       const std::string& rel) {
    if (src == dst) return std::vector<FourTuple>{};
    if (!fiber) return std::nullopt;
    std::map<std::string, std::string> parent; // node -> predecessor
    std::deque<std::string> frontier{src};
    parent[src] = src;
    while (!frontier.empty()) {
        std::string node = frontier.front();
        frontier.pop_front();
        const auto* targets = fiber->forward(node, rel);
        if (!targets) continue;
        for (const auto& next : *targets) {
            if (parent.count(next)) continue;
            parent[next] = node;
            if (next == dst) {
                std::vector<FourTuple> path;
                for (std::string at = dst; at != src; at = parent[at])
                    path.emplace_back(parent[at], rel, fiber->domain(), at);
                std::reverse(path.begin(), path.end());
                return path;
            }
            frontier.push_back(next);
        }
    }
    return std::nullopt;
}

class Validator {
public:
    // Rules are session configuration, loaded before the session freezes.
    void register_contradiction(const ContradictionRule& rule) {
        if (sealed_)
            raise(ErrorCode::MetaFrozen,
                  "contradiction rules are fixed once the session starts");
        for (const auto& r : rules_)
            if (r.same_pair(rule))
                raise(ErrorCode::DuplicateRule,
                      "rule (" + rule.rel_a + ", " + rule.rel_b + ") already registered");
        rules_.push_back(rule);
    }

    void seal() { sealed_ = true; }
    const std::vector<ContradictionRule>& rules() const { return rules_; }

    // Dry run: the verdict insert() would return, no mutation, no audit.
    ValidationOutcome validate(const KnowledgeBase& kb, const FourTuple& t,
                               const MetaTyping& typing) const {
        ValidationOutcome out;
        const bool frozen = typing.frozen() || kb.meta_frozen();

        // 1. meta freeze
        if (frozen && t.domain.raw() == kMetaDomain)
            return reject(RejectReason::meta_frozen, {});

        const Fiber* fiber = kb.fiber(t.domain);

        // 2. causal reversal: from must not already be downstream of to
        if (t.rel == "causes") {
            if (auto path = find_path(fiber, t.to, t.from, "causes"))
                return reject(RejectReason::causal_reversal, std::move(*path));
        }

        // 3. acyclicity: inserting from->to closes a cycle iff to reaches from
        if (typing.is_acyclic(t.rel)) {
            if (auto path = find_path(fiber, t.to, t.from, t.rel))
                return reject(RejectReason::cycle, std::move(*path));
        }

        // 4. contradiction rules: same subject, same domain, partner relation
        for (const auto& rule : rules_) {
            std::optional<std::string> partner;
            if (t.rel == rule.rel_a) partner = rule.rel_b;
            else if (t.rel == rule.rel_b) partner = rule.rel_a;
            if (!partner || !fiber) continue;
            if (const auto* existing = fiber->forward(t.from, *partner)) {
                std::vector<FourTuple> witness;
                for (const auto& to : *existing)
                    witness.emplace_back(t.from, *partner, t.domain, to);
                return reject(RejectReason::contradiction, std::move(witness));
            }
        }

        return out; // accepted
    }

    // Validate-then-add. The outcome is appended to `audit` either way; a
    // rejected insert leaves the store untouched.
    ValidationOutcome insert(KnowledgeBase& kb, const FourTuple& t,
                             const MetaTyping& typing,
                             AuditLog* audit = nullptr) const {
        ValidationOutcome out = validate(kb, t, typing);
        if (out.accepted())
            out.newly_added = kb.add(t) == AddResult::added;
        if (audit) audit->append(AuditEntry{t, out});
        return out;
    }

private:
    static ValidationOutcome reject(RejectReason reason,
                                    std::vector<FourTuple> witness) {
        ValidationOutcome out;
        out.verdict = Verdict::rejected;
        out.reason = reason;
        out.witness = std::move(witness);
        return out;
    }

    std::vector<ContradictionRule> rules_;
    bool sealed_ = false;
};

} // namespace cdc
