#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"

using namespace cdc;
using testutil::dom;

namespace {

std::string corpus_bytes(const GenSpec& spec) {
    std::ostringstream os;
    save_jsonl_stream(generate(spec).to_kb(), os);
    return os.str();
}

} // namespace

TEST_CASE("generation is a pure function of the spec", "[bench]") {
    GenSpec spec;
    spec.n_entities = 300;
    spec.n_fibers = 3;
    spec.planted_answers = 4;
    spec.seed = 7;
    CHECK(corpus_bytes(spec) == corpus_bytes(spec));

    GenSpec other = spec;
    other.seed = 8;
    CHECK(corpus_bytes(spec) != corpus_bytes(other));
}

TEST_CASE("generated fibers are acyclic by construction", "[bench]") {
    GenSpec spec;
    spec.n_entities = 1000;
    spec.n_fibers = 10;
    spec.planted_answers = 4;
    spec.seed = 7;
    GeneratedCorpus corpus = generate(spec);
    KnowledgeBase kb = corpus.to_kb();
    CHECK(corpus.fiber_domains.size() == 10);
    for (const auto& d : corpus.fiber_domains) {
        auto raw = testutil::raw_records(kb, d, false);
        CHECK_FALSE(testutil::oracle_has_cycle(raw, "is_a"));
        // roughly N/K entities each
        CHECK(kb.view(d, false).subjects().size() >= 100);
    }
}

TEST_CASE("single entity corpus has no entity-to-entity edges", "[bench]") {
    GenSpec spec;
    spec.n_entities = 1;
    spec.n_fibers = 1;
    spec.planted_answers = 0;
    spec.seed = 1;
    GeneratedCorpus corpus = generate(spec);
    for (const auto& t : corpus.records) CHECK(t.rel != "is_a");
    CHECK(corpus.constraints.empty());
}

TEST_CASE("planted recovery on every fiber", "[bench]") {
    GenSpec spec;
    spec.n_entities = 300;
    spec.n_fibers = 3;
    spec.planted_answers = 4;
    spec.seed = 21;
    GeneratedCorpus corpus = generate(spec);
    KnowledgeBase kb = corpus.to_kb();
    for (const auto& d : corpus.fiber_domains) {
        auto result = multi_constraint(kb, d, corpus.constraints);
        auto expected = corpus.planted.at(d.raw());
        std::sort(expected.begin(), expected.end());
        CHECK(result.candidates == expected);
        for (size_t i = 1; i < result.counts.size(); ++i)
            CHECK(result.counts[i] <= result.counts[i - 1]);
    }
}

TEST_CASE("a one-constraint designated list still pins the planted set", "[bench]") {
    GenSpec spec;
    spec.n_entities = 120;
    spec.n_fibers = 1;
    spec.planted_answers = 3;
    spec.seed = 5;
    spec.n_constraints = 1;
    GeneratedCorpus corpus = generate(spec);
    KnowledgeBase kb = corpus.to_kb();
    auto result = multi_constraint(kb, corpus.fiber_domains[0], corpus.constraints);
    auto expected = corpus.planted.at(corpus.fiber_domains[0].raw());
    std::sort(expected.begin(), expected.end());
    CHECK(result.candidates == expected);
}

TEST_CASE("queries touch only the target fiber", "[bench]") {
    GenSpec spec;
    spec.n_entities = 400;
    spec.n_fibers = 4;
    spec.planted_answers = 4;
    spec.seed = 9;
    GeneratedCorpus corpus = generate(spec);
    KnowledgeBase kb = corpus.to_kb();
    const DomainPath& d = corpus.fiber_domains[1];
    auto result = multi_constraint(kb, d, corpus.constraints);
    size_t bound = kb.fiber(d)->size() +
                   (kb.universal_fiber() ? kb.universal_fiber()->size() : 0);
    CHECK(result.touched_records <= bound);
    CHECK(result.touched_records < kb.total_records());
}

TEST_CASE("singleton fibers answer in near-constant work", "[bench]") {
    GenSpec spec;
    spec.n_entities = 50;
    spec.n_fibers = 50;
    spec.planted_answers = 1;
    spec.seed = 3;
    GeneratedCorpus corpus = generate(spec);
    KnowledgeBase kb = corpus.to_kb();
    auto result = multi_constraint(kb, corpus.fiber_domains[0], corpus.constraints);
    CHECK(result.touched_records <= kb.fiber(corpus.fiber_domains[0])->size());
    CHECK(result.candidates == corpus.planted.at(corpus.fiber_domains[0].raw()));
}

TEST_CASE("invalid specs are rejected", "[bench]") {
    GenSpec spec;
    spec.n_entities = 5;
    spec.n_fibers = 10; // K > N
    CHECK_THROWS_AS(generate(spec), Error);

    GenSpec spec2;
    spec2.n_entities = 10;
    spec2.n_fibers = 1;
    spec2.planted_answers = 11; // more answers than entities
    CHECK_THROWS_AS(generate(spec2), Error);
}

TEST_CASE("gen spec round-trips through JSON", "[bench]") {
    GenSpec spec;
    spec.n_entities = 1200;
    spec.n_fibers = 1;
    spec.planted_answers = 4;
    spec.seed = 77;
    spec.n_constraints = 4;
    GenSpec back = GenSpec::from_json(spec.to_json());
    CHECK(back.n_entities == spec.n_entities);
    CHECK(back.planted_answers == spec.planted_answers);
    CHECK(back.seed == spec.seed);
}

TEST_CASE("least-squares helpers recover known fits", "[bench]") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * v + 1.0);
    FitResult fit = linear_fit(x, y);
    CHECK(fit.slope == Catch::Approx(2.0));
    CHECK(fit.intercept == Catch::Approx(1.0));
    CHECK(fit.r2 == Catch::Approx(1.0));

    // a genuinely exponential series fits the fixed-shape model
    std::vector<double> ex;
    for (double v : x) ex.push_back(3.0 * std::pow(10.0, v));
    CHECK(fixed_exponential_r2(x, ex, 10.0) == Catch::Approx(1.0));
    // linear data under the exponential model is decisively worse
    CHECK(fixed_exponential_r2(x, y, 10.0) < 0.0);
}

TEST_CASE("scaling harness produces a complete report on a small grid", "[bench]") {
    ScalingGrid grid;
    grid.n = 600;
    grid.k_values = {2, 6};
    grid.m_values = {1, 2, 4};
    grid.k_for_m_sweep = 6;
    grid.seed = 13;
    ScalingReport report = measure_scaling(grid, 2, 2);
    CHECK(report.k_sweep.size() == 2);
    CHECK(report.m_sweep.size() == 3);
    for (const auto& p : report.k_sweep) {
        CHECK(p.median_ms >= 0.0);
        CHECK(p.all_ms.size() == 2);
        CHECK_FALSE(p.counts.empty());
    }
    auto j = report.to_json();
    CHECK(j.contains("fits"));
    CHECK(j["fits"].contains("nk_exponent"));
    std::string csv = report.to_csv();
    CHECK(csv.rfind("sweep,k,m,fiber_size,repeat,ms", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + (2 + 3) * 2);
}
