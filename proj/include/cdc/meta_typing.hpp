#pragma once

// The relation-typing function tau, materialized from has_property records
// in F(@Meta@Logic) and frozen for the duration of a session. Unmentioned
// relations fall back to built-in defaults: is_a and requires are monotone
// and acyclic, causes is acyclic, everything else is non-monotone and free
// to form cycles.

#include <map>
#include <set>
#include <string>

#include "cdc/fiber.hpp"
#include "cdc/knowledge_base.hpp"

namespace cdc {

enum class Monotonicity { monotone, non_monotone };

inline const char* to_string(Monotonicity m) {
    return m == Monotonicity::monotone ? "monotone" : "non_monotone";
}

class MetaTyping {
public:
    static MetaTyping build(const Fiber& meta) {
        if (meta.domain().raw() != kMetaDomain)
            raise(ErrorCode::MalformedDomain,
                  "typing is built from F(@Meta@Logic), got " + meta.domain().raw());
        MetaTyping t;
        for (const auto& rec : meta.records()) {
            if (rec.rel != "has_property") continue;
            if (rec.to == "monotone" || rec.to == "non_monotone") {
                auto value = rec.to == "monotone" ? Monotonicity::monotone
                                                  : Monotonicity::non_monotone;
                auto [it, inserted] = t.declared_.emplace(rec.from, value);
                if (!inserted && it->second != value)
                    raise(ErrorCode::ConflictingTyping,
                          "relation \"" + rec.from +
                              "\" declared both monotone and non_monotone");
            } else if (rec.to == "acyclic") {
                t.declared_acyclic_.insert(rec.from);
            }
            // other has_property values are plain meta data, not typing
        }
        return t;
    }

    static MetaTyping build(const KnowledgeBase& kb) {
        if (const Fiber* meta = kb.meta_fiber()) return build(*meta);
        return MetaTyping{}; // defaults only
    }

    // Total: every relation name has a typing.
    Monotonicity typing_of(const std::string& rel) const {
        auto it = declared_.find(rel);
        if (it != declared_.end()) return it->second;
        if (rel == "is_a" || rel == "requires") return Monotonicity::monotone;
        return Monotonicity::non_monotone;
    }

    // Declared acyclic relations plus the built-in set. The default stays in
    // force even when a relation's monotonicity is declared; there is no
    // negative acyclicity record.
    bool is_acyclic(const std::string& rel) const {
        if (declared_acyclic_.count(rel)) return true;
        return rel == "is_a" || rel == "requires" || rel == "causes";
    }

    void freeze() { frozen_ = true; } // idempotent
    bool frozen() const { return frozen_; }

private:
    std::map<std::string, Monotonicity> declared_;
    std::set<std::string> declared_acyclic_;
    bool frozen_ = false;
};

} // namespace cdc
