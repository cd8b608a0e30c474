#pragma once

// Synthetic corpus generator and scaling harness.
//
// Each fiber gets an is_a DAG over ranked entities (edges only run from
// lower to higher rank, so acyclicity holds by construction), per-entity
// has_symptom noise drawn from the feature pool, and a designated
// constraint list planted as a funnel: constraint j is satisfied by exactly
// the s_j lowest-ranked entities, where the s_j interpolate geometrically
// from the fiber size down to planted_answers. Satisfaction is wired via
// is_a class edges -- direct for half the members, through a one-level Mid
// node for the rest -- so constraint checks exercise multi-step closure.
// The last constraint uses direct edges only, which pins the full-list
// satisfier set to exactly the planted entities.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdc/inference.hpp"
#include "cdc/knowledge_base.hpp"

namespace cdc {

struct GenSpec {
    size_t n_entities = 0;      // N, across all fibers
    size_t n_fibers = 1;        // K
    double edges_per_entity = 2.0;
    size_t feature_pool = 16;
    size_t planted_answers = 0; // per fiber; 0 disables the designated list
    uint64_t seed = 0;
    size_t n_constraints = 4;   // designated list length

    void validate() const {
        if (n_fibers < 1 || n_entities < n_fibers)
            raise(ErrorCode::InvalidSpec, "need n_entities >= n_fibers >= 1");
        if (edges_per_entity < 0.0)
            raise(ErrorCode::InvalidSpec, "edges_per_entity must be >= 0");
        if (feature_pool < 1)
            raise(ErrorCode::InvalidSpec, "feature_pool must be >= 1");
        if (planted_answers > n_entities / n_fibers)
            raise(ErrorCode::InvalidSpec,
                  "planted_answers exceeds the per-fiber entity count");
        if (planted_answers > 0 && n_constraints < 1)
            raise(ErrorCode::InvalidSpec, "n_constraints must be >= 1");
    }

    static GenSpec from_json(const nlohmann::json& j) {
        GenSpec s;
        s.n_entities = j.at("n_entities").get<size_t>();
        s.n_fibers = j.value("n_fibers", size_t{1});
        s.edges_per_entity = j.value("edges_per_entity", 2.0);
        s.feature_pool = j.value("feature_pool", size_t{16});
        s.planted_answers = j.value("planted_answers", size_t{0});
        s.seed = j.value("seed", uint64_t{0});
        s.n_constraints = j.value("n_constraints", size_t{4});
        s.validate();
        return s;
    }

    nlohmann::json to_json() const {
        return {{"n_entities", n_entities},
                {"n_fibers", n_fibers},
                {"edges_per_entity", edges_per_entity},
                {"feature_pool", feature_pool},
                {"planted_answers", planted_answers},
                {"seed", seed},
                {"n_constraints", n_constraints}};
    }
};

struct GeneratedCorpus {
    std::vector<FourTuple> records;
    std::vector<Constraint> constraints; // designated list, ordered
    std::map<std::string, std::vector<std::string>> planted; // domain -> entities
    std::vector<DomainPath> fiber_domains;

    KnowledgeBase to_kb() const {
        KnowledgeBase kb;
        for (const auto& t : records) kb.add(t);
        return kb;
    }

    std::vector<Constraint> constraint_prefix(size_t m) const {
        m = std::min(m, constraints.size());
        return {constraints.begin(), constraints.begin() + m};
    }

    nlohmann::json manifest() const {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : constraints)
            cs.push_back({{"rel", c.rel},
                          {"feature", c.feature},
                          {"direction", c.direction == Direction::forward
                                            ? "forward"
                                            : "backward"}});
        nlohmann::json pl(planted);
        nlohmann::json fd = nlohmann::json::array();
        for (const auto& d : fiber_domains) fd.push_back(d.raw());
        return {{"records", records.size()},
                {"constraints", std::move(cs)},
                {"planted", std::move(pl)},
                {"fibers", std::move(fd)}};
    }
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// d distinct values in (lo, hi); pre: d <= hi - lo - 1
inline std::vector<size_t> distinct_above(std::mt19937_64& rng, size_t lo,
                                          size_t hi, size_t d) {
    size_t avail = hi - lo - 1;
    std::set<size_t> picked;
    if (d >= avail) {
        for (size_t v = lo + 1; v < hi; ++v) picked.insert(v);
    } else {
        while (picked.size() < d) picked.insert(lo + 1 + rng() % avail);
    }
    return {picked.begin(), picked.end()};
}

inline std::string entity_name(size_t fiber, size_t rank) {
    std::string r = std::to_string(rank);
    if (r.size() < 6) r.insert(0, 6 - r.size(), '0');
    return "F" + std::to_string(fiber) + "_E" + r;
}

} // namespace detail

// Pure function of the spec: same spec, same corpus, byte for byte.
inline GeneratedCorpus generate(const GenSpec& spec) {
    spec.validate();
    GeneratedCorpus corpus;
    const size_t K = spec.n_fibers;
    const size_t M = spec.planted_answers > 0 ? spec.n_constraints : 0;

    for (size_t j = 1; j <= M; ++j)
        corpus.constraints.push_back(
            {"is_a", "Class" + std::to_string(j), Direction::forward});

    for (size_t k = 0; k < K; ++k) {
        const size_t n = spec.n_entities / K + (k < spec.n_entities % K ? 1 : 0);
        DomainPath domain =
            DomainPath::parse("@Bench@F" + std::to_string(k));
        corpus.fiber_domains.push_back(domain);
        std::mt19937_64 rng(spec.seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)));

        // is_a DAG: rank i points at nearby higher ranks. The bounded window
        // keeps the hierarchy chain-like, so the reachable set above a node
        // stays proportional to the fiber size.
        constexpr size_t kWindow = 16;
        for (size_t i = 0; i + 1 < n; ++i) {
            size_t base = static_cast<size_t>(spec.edges_per_entity);
            double frac = spec.edges_per_entity - static_cast<double>(base);
            size_t d = base + (detail::uniform01(rng) < frac ? 1 : 0);
            if (d == 0 && spec.edges_per_entity >= 1.0) d = 1;
            size_t hi = std::min(n, i + 1 + kWindow);
            d = std::min(d, hi - 1 - i);
            for (size_t target : detail::distinct_above(rng, i, hi, d))
                corpus.records.emplace_back(detail::entity_name(k, i), "is_a",
                                            domain,
                                            detail::entity_name(k, target));
        }

        // per-entity feature noise
        for (size_t i = 0; i < n; ++i)
            corpus.records.emplace_back(
                detail::entity_name(k, i), "has_symptom", domain,
                "Feat" + std::to_string(rng() % spec.feature_pool));

        // designated funnel
        if (M > 0) {
            const size_t p = spec.planted_answers;
            size_t prev = n;
            for (size_t j = 1; j <= M; ++j) {
                double frac_pow =
                    std::pow(static_cast<double>(p) / static_cast<double>(n),
                             static_cast<double>(j) / static_cast<double>(M));
                size_t s = static_cast<size_t>(
                    std::llround(static_cast<double>(n) * frac_pow));
                s = std::clamp(s, p, prev);
                if (j == M) s = p;
                prev = s;
                const std::string cls = "Class" + std::to_string(j);
                const std::string mid = "Mid" + std::to_string(j);
                bool mid_used = false;
                for (size_t rank = 0; rank < s; ++rank) {
                    bool indirect = j < M && rank % 2 == 1;
                    corpus.records.emplace_back(detail::entity_name(k, rank),
                                                "is_a", domain,
                                                indirect ? mid : cls);
                    mid_used |= indirect;
                }
                if (mid_used)
                    corpus.records.emplace_back(mid, "is_a", domain, cls);
            }
            std::vector<std::string> planted;
            for (size_t rank = 0; rank < p; ++rank)
                planted.push_back(detail::entity_name(k, rank));
            corpus.planted[domain.raw()] = std::move(planted);
        }
    }
    return corpus;
}

// ---- scaling harness ---------------------------------------------------

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline FitResult linear_fit(const std::vector<double>& x,
                            const std::vector<double>& y) {
    FitResult fit;
    const size_t n = x.size();
    if (n < 2 || y.size() != n) return fit;
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r2 = 1.0;
        return fit;
    }
    double ss_res = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
    return fit;
}

// R-squared of the fixed-shape model y = c * base^x with only c fitted
// (least squares in log space). Strongly negative when the data do not
// grow exponentially.
inline double fixed_exponential_r2(const std::vector<double>& x,
                                   const std::vector<double>& y, double base) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) return 0.0;
    const double lb = std::log(base);
    double mlogc = 0, my = 0;
    std::vector<double> ly(n);
    for (size_t i = 0; i < n; ++i) {
        ly[i] = std::log(std::max(y[i], 1e-9));
        mlogc += ly[i] - x[i] * lb;
        my += ly[i];
    }
    mlogc /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ly[i] - (mlogc + x[i] * lb);
        ss_res += r * r;
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : -1e9;
    return 1.0 - ss_res / ss_tot;
}

struct ScalingGrid {
    size_t n = 10000;
    std::vector<size_t> k_values{1, 10, 100};
    std::vector<size_t> m_values{1, 2, 4, 8};
    size_t k_for_m_sweep = 10;
    double edges_per_entity = 2.0;
    size_t feature_pool = 16;
    uint64_t seed = 7;

    static ScalingGrid from_json(const nlohmann::json& j) {
        ScalingGrid g;
        g.n = j.value("n", size_t{10000});
        if (j.contains("k_values"))
            g.k_values = j.at("k_values").get<std::vector<size_t>>();
        if (j.contains("m_values"))
            g.m_values = j.at("m_values").get<std::vector<size_t>>();
        g.k_for_m_sweep = j.value("k_for_m_sweep", size_t{10});
        g.edges_per_entity = j.value("edges_per_entity", 2.0);
        g.feature_pool = j.value("feature_pool", size_t{16});
        g.seed = j.value("seed", uint64_t{7});
        return g;
    }

    nlohmann::json to_json() const {
        return {{"n", n},
                {"k_values", k_values},
                {"m_values", m_values},
                {"k_for_m_sweep", k_for_m_sweep},
                {"edges_per_entity", edges_per_entity},
                {"feature_pool", feature_pool},
                {"seed", seed}};
    }
};

struct ScalingPoint {
    size_t k = 0;
    size_t m = 0;
    size_t fiber_size = 0;    // N/K
    size_t fiber_records = 0; // |F(d)| actually stored
    double median_ms = 0.0;
    std::vector<double> all_ms;
    std::vector<size_t> counts;
    size_t touched = 0;

    nlohmann::json to_json() const {
        return {{"k", k},
                {"m", m},
                {"fiber_size", fiber_size},
                {"fiber_records", fiber_records},
                {"median_ms", median_ms},
                {"all_ms", all_ms},
                {"counts", counts},
                {"touched_records", touched}};
    }
};

struct ScalingReport {
    ScalingGrid grid;
    size_t m_fixed = 4;
    size_t repeats = 3;
    std::vector<ScalingPoint> k_sweep;
    std::vector<ScalingPoint> m_sweep;
    FitResult nk_loglog;      // log time vs log fiber_size at fixed m
    FitResult m_linear;       // time vs m at fixed fiber_size
    FitResult mnk2_model;     // time vs m*(N/K)^2 over all points
    double exp_model_r2 = 0;  // time vs (N/K)^m, scale-only fit

    nlohmann::json to_json() const {
        auto pts = [](const std::vector<ScalingPoint>& v) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& p : v) arr.push_back(p.to_json());
            return arr;
        };
        auto fit_json = [](const FitResult& f) {
            return nlohmann::json{
                {"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
        };
        return {{"grid", grid.to_json()},
                {"m_fixed", m_fixed},
                {"repeats", repeats},
                {"k_sweep", pts(k_sweep)},
                {"m_sweep", pts(m_sweep)},
                {"fits",
                 {{"nk_exponent", fit_json(nk_loglog)},
                  {"m_linear", fit_json(m_linear)},
                  {"m_nk2_model", fit_json(mnk2_model)},
                  {"nk_pow_m_model_r2", exp_model_r2}}}};
    }

    std::string to_csv() const {
        std::string csv = "sweep,k,m,fiber_size,repeat,ms\n";
        auto rows = [&csv](const char* name, const std::vector<ScalingPoint>& v) {
            for (const auto& p : v)
                for (size_t i = 0; i < p.all_ms.size(); ++i)
                    csv += std::string(name) + "," + std::to_string(p.k) + "," +
                           std::to_string(p.m) + "," +
                           std::to_string(p.fiber_size) + "," +
                           std::to_string(i) + "," + std::to_string(p.all_ms[i]) +
                           "\n";
        };
        rows("k", k_sweep);
        rows("m", m_sweep);
        return csv;
    }
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline ScalingPoint time_point(const KnowledgeBase& kb, const DomainPath& d,
                               const GeneratedCorpus& corpus, size_t k, size_t m,
                               size_t fiber_size, size_t repeats) {
    ScalingPoint pt;
    pt.k = k;
    pt.m = m;
    pt.fiber_size = fiber_size;
    pt.fiber_records = kb.fiber(d) ? kb.fiber(d)->size() : 0;
    auto constraints = corpus.constraint_prefix(m);
    for (size_t r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        auto result = multi_constraint(kb, d, constraints);
        auto t1 = std::chrono::steady_clock::now();
        pt.all_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
        pt.counts = result.counts;
        pt.touched = result.touched_records;
    }
    pt.median_ms = median_of(pt.all_ms);
    return pt;
}

} // namespace detail

// Timed multi-constraint queries over a grid: K varies at fixed N with
// m = m_fixed, then m varies at fixed N/K. The designated list is always
// generated 8 long with ~5% attrition per step, so any prefix keeps the
// per-step workload comparable.
inline ScalingReport measure_scaling(const ScalingGrid& grid, size_t m_fixed,
                                     size_t repeats) {
    constexpr size_t kListLength = 8;
    ScalingReport report;
    report.grid = grid;
    report.m_fixed = m_fixed;
    report.repeats = std::max<size_t>(1, repeats);

    auto corpus_for = [&](size_t k) {
        GenSpec spec;
        spec.n_entities = grid.n;
        spec.n_fibers = k;
        spec.edges_per_entity = grid.edges_per_entity;
        spec.feature_pool = grid.feature_pool;
        spec.seed = grid.seed;
        spec.n_constraints = kListLength;
        size_t fiber = grid.n / k;
        spec.planted_answers = std::max<size_t>(
            1, static_cast<size_t>(std::llround(
                   static_cast<double>(fiber) * std::pow(0.95, kListLength))));
        return generate(spec);
    };

    for (size_t k : grid.k_values) {
        GeneratedCorpus corpus = corpus_for(k);
        KnowledgeBase kb = corpus.to_kb();
        report.k_sweep.push_back(detail::time_point(
            kb, corpus.fiber_domains.front(), corpus, k, m_fixed, grid.n / k,
            report.repeats));
    }

    {
        size_t k = grid.k_for_m_sweep;
        GeneratedCorpus corpus = corpus_for(k);
        KnowledgeBase kb = corpus.to_kb();
        for (size_t m : grid.m_values)
            report.m_sweep.push_back(detail::time_point(
                kb, corpus.fiber_domains.front(), corpus, k, m, grid.n / k,
                report.repeats));
    }

    std::vector<double> lx, ly;
    for (const auto& p : report.k_sweep) {
        lx.push_back(std::log(static_cast<double>(p.fiber_size)));
        ly.push_back(std::log(std::max(p.median_ms, 1e-6)));
    }
    report.nk_loglog = linear_fit(lx, ly);

    std::vector<double> mx, my;
    for (const auto& p : report.m_sweep) {
        mx.push_back(static_cast<double>(p.m));
        my.push_back(p.median_ms);
    }
    report.m_linear = linear_fit(mx, my);
    report.exp_model_r2 = fixed_exponential_r2(
        mx, my, static_cast<double>(grid.n / grid.k_for_m_sweep));

    std::vector<double> qx, qy;
    for (const auto* sweep : {&report.k_sweep, &report.m_sweep})
        for (const auto& p : *sweep) {
            qx.push_back(static_cast<double>(p.m) *
                         static_cast<double>(p.fiber_size) *
                         static_cast<double>(p.fiber_size));
            qy.push_back(p.median_ms);
        }
    report.mnk2_model = linear_fit(qx, qy);

    return report;
}

} // namespace cdc
