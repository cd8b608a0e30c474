#pragma once

// Typed inheritance: monotone-relation records flow from a parent fiber
// into its child as ordinary materialized copies; non-monotone records
// produce no action at all. Every copy passes through validated insert, so
// an inherited edge that would break the child fiber is rejected and logged
// rather than silently added.

#include <map>
#include <string>

#include "cdc/meta_typing.hpp"
#include "cdc/validation.hpp"

namespace cdc {

// Pull monotone records from parent(child) into child. Returns the number
// of records newly added. Errors with NoParent on a root domain.
inline size_t reindex_domain(KnowledgeBase& kb, const DomainPath& child,
                             const MetaTyping& typing, const Validator& validator,
                             AuditLog* audit = nullptr) {
    auto parent = child.parent();
    if (!parent)
        raise(ErrorCode::NoParent, child.raw() + " is a root domain");
    kb.register_domain(child);
    const Fiber* parent_fiber = kb.fiber(*parent);
    if (!parent_fiber) return 0;

    // snapshot first: inserting into the child must not disturb iteration
    std::vector<FourTuple> inheritable;
    for (const auto& r : parent_fiber->records())
        if (typing.typing_of(r.rel) == Monotonicity::monotone)
            inheritable.emplace_back(r.from, r.rel, child, r.to);

    size_t added = 0;
    for (const auto& copy : inheritable) {
        ValidationOutcome out = validator.insert(kb, copy, typing, audit);
        if (out.newly_added) ++added;
    }
    return added;
}

struct ReindexReport {
    size_t total_added = 0;
    size_t passes = 0; // depth levels processed; bounded by ht(D)
    std::map<std::string, size_t> per_domain;
};

// One root-to-leaf cascade over the lattice in increasing depth order, so
// inheritance reaches every descendant in a single call: at most ht(D)
// depth passes, and an immediate second call adds nothing. The @Meta
// subtree is skipped (the meta tier defines the typing; it is not subject
// to it) and so is @Universal, a root.
inline ReindexReport reindex_all(KnowledgeBase& kb, const MetaTyping& typing,
                                 const Validator& validator,
                                 AuditLog* audit = nullptr) {
    ReindexReport report;
    size_t current_depth = 0;
    for (const auto& d : kb.lattice().by_depth()) {
        if (d.depth() < 2) continue;
        if (d.segments().front() == "Meta") continue;
        if (d.depth() != current_depth) {
            current_depth = d.depth();
            ++report.passes;
        }
        size_t added = reindex_domain(kb, d, typing, validator, audit);
        report.per_domain[d.raw()] = added;
        report.total_added += added;
    }
    return report;
}

} // namespace cdc
