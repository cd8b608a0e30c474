#pragma once

// Fiber-scoped query evaluation. Every operation here is read-only and
// structurally confined to view(domain [, @Universal]): traversal walks the
// fiber's own indexes, so no record from another fiber can ever appear in a
// result. Nothing is cached across mutations.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdc/knowledge_base.hpp"

namespace cdc {

enum class Direction { forward, backward };

struct Query {
    std::optional<std::string> from; // nullopt = wildcard
    std::optional<std::string> rel;  // nullopt = wildcard (match only)
    std::optional<std::string> to;   // nullopt = wildcard
    DomainPath domain;
    bool closure = false;
    bool include_universal = false;
};

// Single-step match: records in view(domain, include_universal) unifying
// with the bound fields. Sorted (domain, rel, from, to).
inline std::vector<FourTuple> match(const KnowledgeBase& kb, const Query& q) {
    FiberView view = kb.view(q.domain, q.include_universal);
    std::vector<FourTuple> out;
    auto unifies = [&](const FourTuple& t) {
        return (!q.from || t.from == *q.from) && (!q.rel || t.rel == *q.rel) &&
               (!q.to || t.to == *q.to);
    };
    if (q.from && q.rel) {
        view.each_out_edge(*q.from, *q.rel, [&](const FourTuple& t) {
            if (!q.to || t.to == *q.to) out.push_back(t);
        });
    } else if (q.rel && q.to) {
        view.each_in_edge(*q.rel, *q.to, [&](const FourTuple& t) {
            if (!q.from || t.from == *q.from) out.push_back(t);
        });
    } else {
        view.each_record([&](const FourTuple& t) {
            if (unifies(t)) out.push_back(t);
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct ClosureTrace {
    std::set<std::string> reached;   // excludes start unless a cycle returns to it
    std::vector<FourTuple> visited;  // every edge examined, in traversal order
};

// Transitive closure of `rel` from `start` inside the view, by visited-set
// BFS (cycles in non-acyclic relations terminate). The visited edge list is
// the audit trail: replayed as a standalone mini-fiber it reproduces the
// same reached set.
inline ClosureTrace closure_trace(const KnowledgeBase& kb,
                                  const std::string& start,
                                  const std::string& rel, const DomainPath& d,
                                  Direction direction = Direction::forward,
                                  bool include_universal = false) {
    FiberView view = kb.view(d, include_universal);
    ClosureTrace trace;
    std::deque<std::string> frontier{start};
    std::set<std::string> queued{start}; // each node expanded at most once
    while (!frontier.empty()) {
        std::string node = frontier.front();
        frontier.pop_front();
        if (direction == Direction::forward) {
            view.each_out_edge(node, rel, [&](const FourTuple& t) {
                trace.visited.push_back(t);
                trace.reached.insert(t.to);
                if (queued.insert(t.to).second) frontier.push_back(t.to);
            });
        } else {
            view.each_in_edge(rel, node, [&](const FourTuple& t) {
                trace.visited.push_back(t);
                trace.reached.insert(t.from);
                if (queued.insert(t.from).second) frontier.push_back(t.from);
            });
        }
    }
    return trace;
}

inline std::set<std::string> closure(const KnowledgeBase& kb,
                                     const std::string& start,
                                     const std::string& rel, const DomainPath& d,
                                     Direction direction = Direction::forward,
                                     bool include_universal = false) {
    return closure_trace(kb, start, rel, d, direction, include_universal).reached;
}

struct Constraint {
    std::string rel;
    std::string feature;
    Direction direction = Direction::forward;
};

struct MultiConstraintResult {
    std::vector<std::string> candidates; // sorted survivors
    std::vector<size_t> counts;          // counts[0] = initial universe, one entry per step
    size_t touched_records = 0;          // records enumerated; bounded by |F(d)| + |F(@Universal)|
};

namespace detail {

// Interned projection of the view: one integer id per concept, adjacency
// per constrained relation. Built in a single pass so the touched-record
// counter is exactly the view size.
struct GraphProjection {
    std::map<std::string, int> ids;
    std::vector<const std::string*> names;
    std::map<std::string, std::vector<std::vector<int>>> adj_fwd;
    std::map<std::string, std::vector<std::vector<int>>> adj_bwd;
    std::vector<int> universe; // ids occurring in the from position
    size_t touched = 0;

    int intern(const std::string& name) {
        auto [it, inserted] = ids.emplace(name, static_cast<int>(ids.size()));
        if (inserted) names.push_back(&it->first);
        return it->second;
    }
};

inline GraphProjection project(const FiberView& view,
                               const std::vector<Constraint>& constraints) {
    GraphProjection g;
    std::set<std::string> rels_fwd, rels_bwd;
    for (const auto& c : constraints)
        (c.direction == Direction::forward ? rels_fwd : rels_bwd).insert(c.rel);
    std::set<int> universe;
    view.each_record([&](const FourTuple& t) {
        ++g.touched;
        int u = g.intern(t.from);
        int v = g.intern(t.to);
        universe.insert(u);
        if (rels_fwd.count(t.rel)) {
            auto& adj = g.adj_fwd[t.rel];
            if (adj.size() < g.ids.size()) adj.resize(g.ids.size());
            adj[u].push_back(v);
        }
        if (rels_bwd.count(t.rel)) {
            auto& adj = g.adj_bwd[t.rel];
            if (adj.size() < g.ids.size()) adj.resize(g.ids.size());
            adj[v].push_back(u);
        }
    });
    for (auto* m : {&g.adj_fwd, &g.adj_bwd})
        for (auto& [_, adj] : *m) adj.resize(g.ids.size());
    g.universe.assign(universe.begin(), universe.end());
    return g;
}

} // namespace detail

// Iterative candidate reduction (arc-consistency style): the universe is
// every entity in the from position of view(d, +@Universal); each constraint
// keeps entities whose full rel-closure (one or more steps) contains the
// feature. The closure is materialized per candidate rather than searched
// with early exit, so measured cost tracks candidate-count x fiber-size.
inline MultiConstraintResult multi_constraint(
    const KnowledgeBase& kb, const DomainPath& d,
    const std::vector<Constraint>& constraints) {
    FiberView view = kb.view(d, /*include_universal=*/true);
    detail::GraphProjection g = detail::project(view, constraints);

    MultiConstraintResult result;
    result.touched_records = g.touched;
    std::vector<int> candidates = g.universe;
    result.counts.push_back(candidates.size());

    const size_t n = g.ids.size();
    std::vector<unsigned> stamp(n, 0);
    unsigned epoch = 0;

    for (const auto& c : constraints) {
        const auto& adj_map =
            c.direction == Direction::forward ? g.adj_fwd : g.adj_bwd;
        auto adj_it = adj_map.find(c.rel);
        auto feat_it = g.ids.find(c.feature);
        std::vector<int> kept;
        if (adj_it != adj_map.end() && feat_it != g.ids.end()) {
            const auto& adj = adj_it->second;
            const int feature = feat_it->second;
            std::vector<int> stack;
            for (int e : candidates) {
                ++epoch;
                bool found = false;
                stack.assign(adj[e].begin(), adj[e].end());
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    if (stamp[v] == epoch) continue;
                    stamp[v] = epoch;
                    if (v == feature) found = true;
                    stack.insert(stack.end(), adj[v].begin(), adj[v].end());
                }
                if (found) kept.push_back(e);
            }
        }
        candidates = std::move(kept);
        result.counts.push_back(candidates.size());
    }

    result.candidates.reserve(candidates.size());
    for (int id : candidates) result.candidates.push_back(*g.names[id]);
    std::sort(result.candidates.begin(), result.candidates.end());
    return result;
}

namespace detail {

// Strictly-before test evaluated segment-by-segment below the shared scope:
// descend while segments agree; at the first disagreement compare the two
// sibling prefixes temporally. Containment (either path exhausting) is not
// precedence.
inline bool strictly_before(const DomainPath& a, const DomainPath& b,
                            const DomainPath& scope) {
    for (size_t i = scope.depth(); i < std::min(a.depth(), b.depth()); ++i) {
        if (a.segments()[i] == b.segments()[i]) continue;
        return temporal_compare(a.prefix(i + 1), b.prefix(i + 1)) ==
               TemporalOrder::before;
    }
    return false;
}

} // namespace detail

// Records under `scope` whose domain is strictly earlier than `before` in
// the turn ordering. Pre: scope is an ancestor of before.
inline std::vector<FourTuple> temporal_query(const KnowledgeBase& kb,
                                             const std::string& rel,
                                             const DomainPath& before,
                                             const DomainPath& scope) {
    if (!before.specializes(scope))
        raise(ErrorCode::NotAnAncestor,
              scope.raw() + " is not an ancestor of " + before.raw());
    std::vector<FourTuple> out;
    for (const auto& [raw, fiber] : kb.fibers()) {
        const DomainPath& d = fiber.domain();
        if (!d.specializes(scope)) continue;
        if (!detail::strictly_before(d, before, scope)) continue;
        for (const auto& t : fiber.records())
            if (t.rel == rel) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cdc
