#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "cdc/domain.hpp"
#include "cdc/errors.hpp"

namespace cdc {

// The set of known domains under prefix specialization. Adding a path also
// adds every ancestor prefix, so the stored set is always prefix-closed.
// Join domains created by fuses_with are tracked separately; they are fresh
// nodes, never computed from existing ones.
class DomainLattice {
public:
    void add(const DomainPath& p) {
        for (size_t k = 1; k <= p.depth(); ++k) domains_.insert(p.prefix(k));
    }

    void add_fused(const DomainPath& p) {
        add(p);
        fused_.insert(p);
    }

    bool contains(const DomainPath& p) const { return domains_.count(p) > 0; }

    bool empty() const { return domains_.empty(); }
    size_t size() const { return domains_.size(); }

    // max depth over stored domains; ht(D)
    size_t height() const {
        if (domains_.empty())
            raise(ErrorCode::EmptyLattice, "height of empty lattice");
        size_t h = 0;
        for (const auto& d : domains_) h = std::max(h, d.depth());
        return h;
    }

    const std::set<DomainPath>& all() const { return domains_; }
    const std::set<DomainPath>& fused() const { return fused_; }

    // Domains ordered shallowest-first (ties by raw string); the order
    // reindexing walks so parents are processed before children.
    std::vector<DomainPath> by_depth() const {
        std::vector<DomainPath> out(domains_.begin(), domains_.end());
        std::stable_sort(out.begin(), out.end(),
                         [](const DomainPath& a, const DomainPath& b) {
                             if (a.depth() != b.depth()) return a.depth() < b.depth();
                             return a.raw() < b.raw();
                         });
        return out;
    }

private:
    std::set<DomainPath> domains_;
    std::set<DomainPath> fused_;
};

} // namespace cdc
