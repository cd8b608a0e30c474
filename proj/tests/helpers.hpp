#pragma once

// Shared fixtures and brute-force oracles. The oracles work on raw record
// lists with their own adjacency scans; they never touch the engine's
// indexes or traversal code.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <cdc/cdc.hpp>

namespace testutil {

using namespace cdc;

inline DomainPath dom(const std::string& s) { return DomainPath::parse(s); }

inline FourTuple tup(const std::string& from, const std::string& rel,
                     const std::string& domain, const std::string& to) {
    return FourTuple(from, rel, dom(domain), to);
}

// ---- fixtures ----------------------------------------------------------

// Apple the fruit vs Apple the company, with a three-step ancestry chain
// in the biology world.
inline KnowledgeBase biology_business_kb() {
    KnowledgeBase kb;
    kb.add(tup("Apple", "is_a", "@Biology", "Fruit"));
    kb.add(tup("Fruit", "is_a", "@Biology", "Plant_Product"));
    kb.add(tup("Plant_Product", "is_a", "@Biology", "Organic_Matter"));
    kb.add(tup("Apple", "is_a", "@Business", "Company"));
    kb.add(tup("Company", "is_a", "@Business", "Corporation"));
    return kb;
}

// Two physics records plus the four meta typing lines.
inline KnowledgeBase physics_kb() {
    KnowledgeBase kb;
    kb.add(tup("Atom", "is_a", "@Physics", "Particle"));
    kb.add(tup("Wave", "contrasts_with", "@Physics", "Particle"));
    kb.add(tup("is_a", "has_property", "@Meta@Logic", "monotone"));
    kb.add(tup("requires", "has_property", "@Meta@Logic", "monotone"));
    kb.add(tup("contrasts_with", "has_property", "@Meta@Logic", "non_monotone"));
    kb.add(tup("analogous_to", "has_property", "@Meta@Logic", "non_monotone"));
    return kb;
}

// Four-edge causal chain from dark clouds to thunder.
inline KnowledgeBase meteorology_kb() {
    KnowledgeBase kb;
    kb.add(tup("Dark_Clouds", "causes", "@Meteorology", "Cloud_Formation"));
    kb.add(tup("Cloud_Formation", "causes", "@Meteorology", "Charge_Separation"));
    kb.add(tup("Charge_Separation", "causes", "@Meteorology", "Lightning"));
    kb.add(tup("Lightning", "causes", "@Meteorology", "Thunder"));
    return kb;
}

// One entity in three classification worlds.
inline KnowledgeBase icd_kb() {
    KnowledgeBase kb;
    kb.add(tup("Viral_Pneumonia", "is_a", "@ICD11@Respiratory@Anatomical",
               "Respiratory_Disease"));
    kb.add(tup("Viral_Pneumonia", "is_a", "@ICD11@Infectious@Etiological",
               "Infectious_Disease"));
    kb.add(tup("Viral_Pneumonia", "is_a", "@ICD11@Acute@Manifestation",
               "Acute_Condition"));
    return kb;
}

// Turn-stamped therapy records across two sessions.
inline KnowledgeBase cbt_kb() {
    KnowledgeBase kb;
    kb.add(tup("catastrophizing", "causes", "@CBT@Session1@Turn3", "avoidance"));
    kb.add(tup("avoidance", "causes", "@CBT@Session1@Turn3", "isolation"));
    kb.add(tup("reality_testing", "weakens", "@CBT@Session2@Turn1", "catastrophizing"));
    return kb;
}

// ---- oracles -----------------------------------------------------------

inline std::vector<FourTuple> raw_records(const KnowledgeBase& kb,
                                          const DomainPath& d, bool universal) {
    std::vector<FourTuple> out;
    kb.view(d, universal).each_record([&](const FourTuple& t) { out.push_back(t); });
    return out;
}

// Reachability via one-or-more `rel` edges over a raw record list.
inline std::set<std::string> oracle_reachable(const std::vector<FourTuple>& records,
                                              const std::string& start,
                                              const std::string& rel,
                                              bool forward = true) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& t : records) {
        if (t.rel != rel) continue;
        if (forward)
            adj[t.from].push_back(t.to);
        else
            adj[t.to].push_back(t.from);
    }
    std::set<std::string> reached;
    std::vector<std::string> stack;
    for (const auto& next : adj[start]) stack.push_back(next);
    while (!stack.empty()) {
        std::string node = stack.back();
        stack.pop_back();
        if (!reached.insert(node).second) continue;
        for (const auto& next : adj[node]) stack.push_back(next);
    }
    return reached;
}

// Does any relation declared acyclic actually contain a cycle? Exhaustive
// per-node DFS over the raw records of one fiber.
inline bool oracle_has_cycle(const std::vector<FourTuple>& records,
                             const std::string& rel) {
    std::set<std::string> nodes;
    for (const auto& t : records)
        if (t.rel == rel) {
            nodes.insert(t.from);
            nodes.insert(t.to);
        }
    for (const auto& n : nodes)
        if (oracle_reachable(records, n, rel).count(n)) return true;
    return false;
}

// ---- random generators for property tests ------------------------------

struct RandomDag {
    std::vector<FourTuple> records;
    std::vector<std::string> nodes;
};

// DAG on up to max_nodes nodes; edges run only from lower to higher index.
inline RandomDag random_dag(std::mt19937& rng, const std::string& domain,
                            size_t max_nodes, const std::string& rel = "is_a") {
    RandomDag dag;
    size_t n = 2 + rng() % (max_nodes - 1);
    for (size_t i = 0; i < n; ++i) dag.nodes.push_back("N" + std::to_string(i));
    DomainPath d = dom(domain);
    for (size_t i = 0; i + 1 < n; ++i) {
        size_t edges = rng() % 3;
        for (size_t e = 0; e <= edges; ++e) {
            size_t j = i + 1 + rng() % (n - i - 1);
            dag.records.emplace_back(dag.nodes[i], rel, d, dag.nodes[j]);
        }
    }
    return dag;
}

// Several fibers over one shared concept pool, so isolation failures would
// surface as cross-fiber leaks.
inline KnowledgeBase random_multi_fiber_kb(std::mt19937& rng, size_t n_fibers,
                                           bool with_universal) {
    KnowledgeBase kb;
    std::vector<std::string> pool;
    for (size_t i = 0; i < 16; ++i) pool.push_back("C" + std::to_string(i));
    std::vector<std::string> rels{"is_a", "causes", "likes"};
    for (size_t f = 0; f < n_fibers; ++f) {
        DomainPath d = dom("@W" + std::to_string(f));
        size_t records = 4 + rng() % 12;
        for (size_t i = 0; i < records; ++i) {
            const auto& from = pool[rng() % pool.size()];
            const auto& to = pool[rng() % pool.size()];
            kb.add(FourTuple(from, rels[rng() % rels.size()], d, to));
        }
    }
    if (with_universal) {
        DomainPath u = dom("@Universal");
        for (size_t i = 0; i < 3; ++i)
            kb.add(FourTuple(pool[rng() % pool.size()], "is_a", u,
                             pool[rng() % pool.size()]));
    }
    return kb;
}

} // namespace testutil
