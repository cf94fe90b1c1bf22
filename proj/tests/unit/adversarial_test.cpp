#include "../support.hpp"

#include "runsec/adversarial.hpp"
#include "runsec/generators.hpp"

#include <doctest.h>

using namespace runsec;
using testing::q;

namespace {

// Point mass on run r out of n.
RunMeasure on_run(std::size_t n, std::size_t r) {
    std::vector<Rational> w(n, 0);
    w[r] = 1;
    return RunMeasure(w);
}

// One run per pair of initial choices (y1, y2) in {0,1}^2. At time 1 agent 1
// sees obs(y1, y2).
AdversarialSystem init_system(const std::function<std::string(int, int)>& obs) {
    std::vector<Run> runs;
    InitStructure init{{{"0", "1"}, {"0", "1"}}, {}};
    std::map<std::string, RunMeasure> measures;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            std::string y1 = std::to_string(a), y2 = std::to_string(b);
            runs.push_back({"d" + y1 + y2,
                            {{"", {"u" + y1 + "@0", "v" + y2 + "@0"}}, {"", {obs(a, b) + "@1", "v" + y2 + "@1"}}}});
            init.choice.push_back({y1, y2});
            measures[AdversarialSystem::cell_key({y1, y2})] = on_run(4, std::size_t(2 * a + b));
        }
    System sys({"1", "2"}, std::move(runs), 1, TimeMode::synchronous);
    return AdversarialSystem::from_init(std::move(sys), std::move(init), measures);
}

} // namespace

TEST_CASE("INIT cells") {
    AdversarialSystem adv = init_system([](int a, int) { return "o" + std::to_string(a); });
    CHECK(adv.cell_count() == 4);
    CHECK(adv.cell_id(adv.cell_of(2)) == "1|0");
    CHECK(adv.cell_index("0|1") == adv.cell_of(1));
    CHECK_THROWS_AS(adv.cell_index("2|2"), Error);
}

TEST_CASE("no evidence depends on what agent 1 observes") {
    AdversarialSystem blind = init_system([](int a, int) { return "o" + std::to_string(a); });
    CHECK(check_no_evidence(blind, 0).holds);
    AdversarialSystem leaky = init_system([](int a, int b) { return "o" + std::to_string(a) + std::to_string(b); });
    SecrecyVerdict v = check_no_evidence(leaky, 0);
    REQUIRE_FALSE(v.holds);
    CHECK(v.failure == Failure::unequal);
    CHECK(v.counterexample->values == std::vector<Rational>{q("1"), q("0")});
    // the meeting-cells reading only compares cells the information set meets
    CHECK(check_no_evidence(leaky, 0, NoEvidenceReading::meeting_cells).holds);

    EvidentialResult e1 = check_evidential_equivalence(blind, 0);
    CHECK(e1.hypothesis_met);
    CHECK(e1.no_evidence);
    CHECK(e1.agree());
    EvidentialResult e2 = check_evidential_equivalence(leaky, 0);
    CHECK(e2.hypothesis_met);
    CHECK_FALSE(e2.no_evidence);
    CHECK(e2.agree());
}

TEST_CASE("INIT structure validation") {
    std::vector<Run> runs{{"a", {{"", {"u0", "v0"}}}}, {"b", {{"", {"u0", "v1"}}}}};
    System sys({"1", "2"}, runs, 0, TimeMode::synchronous);
    // agent 1 cannot tell its own choice apart
    InitStructure bad{{{"0", "1"}, {"0", "1"}}, {{"0", "0"}, {"1", "1"}}};
    CHECK_THROWS_AS(AdversarialSystem::from_init(sys, bad, {{"0|0", on_run(2, 0)}, {"1|1", on_run(2, 1)}}),
                    Error);
    InitStructure ok{{{"0"}, {"0", "1"}}, {{"0", "0"}, {"0", "1"}}};
    CHECK_THROWS_AS(AdversarialSystem::from_init(sys, ok, {{"0|0", on_run(2, 0)}}), Error); // missing measure
    CHECK_NOTHROW(AdversarialSystem::from_init(sys, ok, {{"0|0", on_run(2, 0)}, {"0|1", on_run(2, 1)}}));
    InitStructure outside{{{"0"}, {"0"}}, {{"0", "0"}, {"0", "1"}}};
    CHECK_THROWS_AS(AdversarialSystem::from_init(sys, outside, {}), Error);
}

TEST_CASE("explicit cells") {
    System sys = testing::two_agent({{{"a", "x"}}, {{"b", "y"}}, {{"c", "x"}}}, 0);
    RunMeasure half({q("1/2"), q("1/2"), 0});
    RunMeasure third = on_run(3, 2);
    CHECK_THROWS_AS(AdversarialSystem(sys, {"A"}, {{0, 1}}, {half}), Error); // run c in no cell
    CHECK_THROWS_AS(AdversarialSystem(sys, {"A", "B"}, {{0, 1}, {1, 2}}, {half, third}), Error);
    CHECK_THROWS_AS(AdversarialSystem(sys, {"A", "B"}, {{0, 1}, {2}}, {third, half}), Error);
    CHECK_THROWS_AS(AdversarialSystem(sys, {"A", "B"}, {{0, 1}, {2}}, {half}), Error);
    AdversarialSystem adv(sys, {"A", "B"}, {{0, 1}, {2}}, {half, third});
    CHECK(adv.cell_count() == 2);
    RunMeasure mu = sample_family_measure(adv, {q("1/2"), q("1/2")});
    CHECK(mu.weights() == std::vector<Rational>{q("1/4"), q("1/4"), q("1/2")});
    CHECK_THROWS_AS(sample_family_measure(adv, {q("1")}), Error);
    CHECK_THROWS_AS(sample_family_measure(adv, {q("1"), q("0")}), Error); // run c gets no mass
    // x has likelihood 1/2 in A and 1 in B
    CHECK_FALSE(check_no_evidence(adv, 1).holds);
    CHECK(check_no_evidence(adv, 0).holds);
}

TEST_CASE("measure families") {
    AdversarialSystem adv = init_system([](int a, int) { return "o" + std::to_string(a); });
    MeasureFamily prod{MeasureFamily::Kind::init_product, 0, {}};
    auto w = canonical_weights(adv, prod);
    CHECK(w == std::vector<Rational>(4, q("1/4")));
    CHECK(satisfies_init_product(adv, 0, w));
    CHECK_FALSE(satisfies_init_product(adv, 0, {q("1/2"), 0, 0, q("1/2")}));
    std::mt19937_64 rng(1);
    for (int k = 0; k < 20; ++k) {
        auto s = sample_weights(adv, prod, rng);
        CHECK(satisfies_init_product(adv, 0, s));
        Rational total = 0;
        for (const auto& x : s)
            total += x;
        CHECK(total == 1);
    }
    MeasureFamily single{MeasureFamily::Kind::singleton, 0, {q("1/2"), 0, 0, q("1/2")}};
    CHECK(sample_weights(adv, single, rng) == single.member);
}

TEST_CASE("the others' choice agent") {
    AdversarialSystem adv = init_system([](int a, int) { return "o" + std::to_string(a); });
    AdversarialSystem ext = with_others_choice_agent(adv, 0, "f", true);
    AgentId f = ext.base().agent("f");
    CHECK(ext.base().local(f, {1, 1}) == "1@1");
    CHECK(ext.base().mode() == TimeMode::synchronous);
    MeasureFamily prod{MeasureFamily::Kind::init_product, 0, {}};
    CHECK(check_generalized_secrecy(ext, 0, f, prod).holds);
    CHECK(check_generalized_secrecy(ext, 0, f, prod, {4, 9, true}).holds);
}

TEST_CASE("COSMIC: evidence about the word") {
    Loaded l = testing::fixture("COSMIC", {"4", "1/10"});
    AgentId alice = l.system->agent("Alice");
    CHECK_FALSE(check_no_evidence(*l.adversarial, alice).holds);
}

TEST_CASE("random INIT systems built without evidence") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 40; ++k) {
        Loaded l = load_json(random_init_spec(rng, true));
        CHECK(check_no_evidence(*l.adversarial, 0).holds);
        EvidentialResult e = check_evidential_equivalence(*l.adversarial, 0, {2, 1, false});
        if (e.hypothesis_met)
            CHECK(e.agree());
    }
}
