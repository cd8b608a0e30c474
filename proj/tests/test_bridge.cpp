#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace cdc;
using testutil::dom;
using testutil::tup;

namespace {

KnowledgeBase icd_two_axis_kb() {
    KnowledgeBase kb;
    kb.add(tup("Viral_Pneumonia", "is_a", "@ICD11@Respiratory", "Respiratory_Disease"));
    kb.add(tup("Viral_Pneumonia", "is_a", "@ICD11@Infectious", "Infectious_Disease"));
    kb.add(tup("Asthma", "is_a", "@ICD11@Respiratory", "Respiratory_Disease"));
    kb.add(tup("Measles", "is_a", "@ICD11@Infectious", "Infectious_Disease"));
    return kb;
}

} // namespace

TEST_CASE("same_entity_across needs the concept in both fibers", "[bridge]") {
    KnowledgeBase kb = icd_two_axis_kb();
    BridgeRecord b("Viral_Pneumonia", BridgeRel::same_entity_across,
                   dom("@ICD11@Respiratory"), dom("@ICD11@Infectious"));
    auto out = add_bridge(kb, b);
    CHECK(out.accepted);
    CHECK(kb.bridges().size() == 1);

    BridgeRecord missing("Asthma", BridgeRel::same_entity_across,
                         dom("@ICD11@Respiratory"), dom("@ICD11@Infectious"));
    auto rejected = add_bridge(kb, missing);
    CHECK_FALSE(rejected.accepted);
    CHECK(rejected.reason == "unknown_concept");
    CHECK(kb.bridges().size() == 1);
}

TEST_CASE("same_entity_across acceptance is symmetric", "[bridge]") {
    KnowledgeBase a = icd_two_axis_kb();
    KnowledgeBase b = icd_two_axis_kb();
    for (const auto& concept_name : {"Viral_Pneumonia", "Asthma", "Measles"}) {
        auto fwd = add_bridge(a, BridgeRecord(concept_name, BridgeRel::same_entity_across,
                                              dom("@ICD11@Respiratory"),
                                              dom("@ICD11@Infectious")));
        auto rev = add_bridge(b, BridgeRecord(concept_name, BridgeRel::same_entity_across,
                                              dom("@ICD11@Infectious"),
                                              dom("@ICD11@Respiratory")));
        CHECK(fwd.accepted == rev.accepted);
    }
}

TEST_CASE("bridges never contaminate fibers", "[bridge]") {
    KnowledgeBase kb = icd_two_axis_kb();
    auto before_resp = kb.fiber(dom("@ICD11@Respiratory"))->records();
    auto before_inf = kb.fiber(dom("@ICD11@Infectious"))->records();

    add_bridge(kb, BridgeRecord("Viral_Pneumonia", BridgeRel::same_entity_across,
                                dom("@ICD11@Respiratory"), dom("@ICD11@Infectious")));
    add_bridge(kb, BridgeRecord("Anything", BridgeRel::fuses_with,
                                dom("@ICD11@Respiratory"), dom("@ICD11@Infectious")));

    CHECK(kb.fiber(dom("@ICD11@Respiratory"))->records() == before_resp);
    CHECK(kb.fiber(dom("@ICD11@Infectious"))->records() == before_inf);
}

TEST_CASE("fuses_with grows the lattice with a fresh node", "[bridge]") {
    KnowledgeBase kb;
    kb.add(tup("a", "is_a", "@Biology", "b"));
    kb.add(tup("c", "is_a", "@Business", "d"));
    size_t before = kb.lattice().size();

    auto out = add_bridge(kb, BridgeRecord("merge", BridgeRel::fuses_with,
                                           dom("@Biology"), dom("@Business")));
    CHECK(out.accepted);
    DomainPath fused = dom("@Fused@Biology@Business");
    CHECK(kb.lattice().contains(fused));
    CHECK(kb.lattice().fused().count(fused) == 1);
    CHECK(kb.lattice().size() > before);
    CHECK(kb.lattice().height() == 3);
    // ordered under neither input
    CHECK_FALSE(fused.specializes(dom("@Biology")));
    CHECK_FALSE(fused.specializes(dom("@Business")));

    // an explicit to-field names the fused domain
    add_bridge(kb, BridgeRecord("merge2", BridgeRel::fuses_with, dom("@Biology"),
                                dom("@Business"), "@Joint"));
    CHECK(kb.lattice().contains(dom("@Joint")));
}

TEST_CASE("fuses_with only ever grows the lattice", "[bridge]") {
    KnowledgeBase kb = icd_two_axis_kb();
    auto before = kb.lattice().all();
    add_bridge(kb, BridgeRecord("j", BridgeRel::fuses_with, dom("@ICD11@Respiratory"),
                                dom("@ICD11@Infectious")));
    for (const auto& d : before) CHECK(kb.lattice().contains(d));
}

TEST_CASE("fused domains survive a save/load cycle", "[bridge]") {
    namespace fs = std::filesystem;
    KnowledgeBase kb = icd_two_axis_kb();
    add_bridge(kb, BridgeRecord("j", BridgeRel::fuses_with, dom("@ICD11@Respiratory"),
                                dom("@ICD11@Infectious")));
    DomainPath fused = dom("@Fused@ICD11_Respiratory@ICD11_Infectious");
    REQUIRE(kb.lattice().contains(fused));

    fs::path p = fs::temp_directory_path() / "cdc_bridge_fused.jsonl";
    save_jsonl(kb, p);
    KnowledgeBase back = load_jsonl(p);
    CHECK(back.lattice().contains(fused));
    CHECK(back.lattice().fused().count(fused) == 1);
}

TEST_CASE("analogy holds on matched out-neighborhoods", "[bridge]") {
    KnowledgeBase kb;
    kb.add(tup("a", "is_a", "@D1", "P"));
    kb.add(tup("b", "is_a", "@D2", "Q"));

    auto one = check_analogy(kb, "a", dom("@D1"), "b", dom("@D2"), {"is_a"});
    CHECK(one.holds);
    REQUIRE(one.witness.size() == 1);
    CHECK(one.witness[0] == std::array<std::string, 3>{"is_a", "P", "Q"});

    // a has a causes edge that b cannot match
    kb.add(tup("a", "causes", "@D1", "E"));
    auto two = check_analogy(kb, "a", dom("@D1"), "b", dom("@D2"), {"is_a", "causes"});
    CHECK_FALSE(two.holds);

    // rels covering no edges of a hold vacuously
    auto vac = check_analogy(kb, "a", dom("@D1"), "b", dom("@D2"), {"requires"});
    CHECK(vac.holds);
    CHECK(vac.witness.empty());
}

TEST_CASE("analogy is monotone when the sub-signature shrinks", "[bridge]") {
    KnowledgeBase kb;
    kb.add(tup("a", "is_a", "@D1", "P"));
    kb.add(tup("a", "causes", "@D1", "E"));
    kb.add(tup("a", "requires", "@D1", "R"));
    kb.add(tup("b", "is_a", "@D2", "Q"));
    kb.add(tup("b", "causes", "@D2", "F"));
    kb.add(tup("b", "requires", "@D2", "S"));

    std::set<std::string> full{"is_a", "causes", "requires"};
    REQUIRE(check_analogy(kb, "a", dom("@D1"), "b", dom("@D2"), full).holds);
    for (const auto& drop : full) {
        std::set<std::string> smaller = full;
        smaller.erase(drop);
        CHECK(check_analogy(kb, "a", dom("@D1"), "b", dom("@D2"), smaller).holds);
    }
}

TEST_CASE("stored analogous_to bridges are checked over the full signature", "[bridge]") {
    KnowledgeBase kb;
    kb.add(tup("a", "is_a", "@D1", "P"));
    kb.add(tup("a", "causes", "@D1", "E"));
    kb.add(tup("b", "is_a", "@D2", "Q"));

    auto out = add_bridge(kb, BridgeRecord("a", BridgeRel::analogous_to, dom("@D1"),
                                           dom("@D2"), "b"));
    CHECK_FALSE(out.accepted); // no causes edge on b
    CHECK(out.reason == "analogy_failed");

    kb.add(tup("b", "causes", "@D2", "F"));
    CHECK(add_bridge(kb, BridgeRecord("a", BridgeRel::analogous_to, dom("@D1"),
                                      dom("@D2"), "b"))
              .accepted);
}

TEST_CASE("cross_fiber_intersection unions bridges and shared subjects", "[bridge]") {
    KnowledgeBase kb = icd_two_axis_kb();

    // shared subject, no bridge yet
    auto shared_only = cross_fiber_intersection(kb, dom("@ICD11@Respiratory"),
                                                dom("@ICD11@Infectious"));
    CHECK(shared_only == std::set<std::string>{"Viral_Pneumonia"});

    // a bridge for a concept that is not a subject in both fibers
    kb.add(tup("Checkup", "requires", "@ICD11@Respiratory", "Fever_Scale"));
    kb.add(tup("Lab_Test", "requires", "@ICD11@Infectious", "Fever_Scale"));
    add_bridge(kb, BridgeRecord("Fever_Scale", BridgeRel::same_entity_across,
                                dom("@ICD11@Respiratory"), dom("@ICD11@Infectious")));
    auto both = cross_fiber_intersection(kb, dom("@ICD11@Respiratory"),
                                         dom("@ICD11@Infectious"));
    CHECK(both == std::set<std::string>{"Fever_Scale", "Viral_Pneumonia"});

    // disjoint fibers, no bridges
    KnowledgeBase empty;
    empty.add(tup("x", "is_a", "@A", "y"));
    empty.add(tup("p", "is_a", "@B", "q"));
    CHECK(cross_fiber_intersection(empty, dom("@A"), dom("@B")).empty());
}

TEST_CASE("cross_session_diff finds change records touching shared concepts", "[bridge]") {
    KnowledgeBase kb = testutil::cbt_kb();

    auto weakened = cross_session_diff(kb, dom("@CBT@Session1"), dom("@CBT@Session2"),
                                       {"weakens"});
    REQUIRE(weakened.size() == 1);
    CHECK(weakened[0].from == "reality_testing");
    CHECK(weakened[0].to == "catastrophizing");

    CHECK(cross_session_diff(kb, dom("@CBT@Session1"), dom("@CBT@Session2"),
                             {"replaces"})
              .empty());

    // weakened then replaced across turns of a later session
    kb.add(tup("self_compassion", "replaces", "@CBT@Session2@Turn4", "catastrophizing"));
    auto both = cross_session_diff(kb, dom("@CBT@Session1"), dom("@CBT@Session2"),
                                   {"weakens", "replaces"});
    CHECK(both.size() == 2);
}

TEST_CASE("bridge records with the wrong shape are rejected at parse", "[bridge]") {
    CHECK_THROWS_AS(BridgeRecord("a", BridgeRel::analogous_to, dom("@D1"), dom("@D2")),
                    Error); // analogous_to needs to
    CHECK_THROWS_AS(BridgeRecord("a", BridgeRel::fuses_with, dom("@D1"), dom("@D1")),
                    Error); // domains must differ
}
