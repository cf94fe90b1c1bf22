#include "../oracles.hpp"
#include "../support.hpp"

#include "runsec/prob.hpp"

#include <doctest.h>

using namespace runsec;
using testing::q;

namespace {

RunSet runs_of(std::size_t n, std::initializer_list<std::size_t> members) {
    RunSet s(n);
    for (auto r : members)
        s.set(r);
    return s;
}

} // namespace

TEST_CASE("run measures") {
    CHECK_THROWS_AS(RunMeasure({q("1/2"), q("1/3")}), Error);
    CHECK_THROWS_AS(RunMeasure({q("3/2"), q("-1/2")}), Error);
    RunMeasure u = RunMeasure::uniform(4);
    CHECK(u.weight(3) == q("1/4"));
    CHECK(u.measure(runs_of(4, {0, 2})) == q("1/2"));
    CHECK(u.conditional(runs_of(4, {0}), runs_of(4, {0, 1, 2})) == q("1/3"));
    RunMeasure z({q("1"), q("0")});
    CHECK_THROWS_AS(z.conditional(runs_of(2, {0}), runs_of(2, {1})), Error);
}

TEST_CASE("run measures must give information sets positive mass") {
    System sys = testing::two_agent({{{"a", "x"}}, {{"b", "x"}}}, 0);
    CHECK_NOTHROW(validate_run_measure(RunMeasure::uniform(2), sys));
    CHECK_THROWS_AS(validate_run_measure(RunMeasure({q("1"), q("0")}), sys), Error);
    CHECK_THROWS_AS(validate_run_measure(RunMeasure::uniform(3), sys), Error);
}

TEST_CASE("EX2: run-based probabilistic secrecy is asymmetric") {
    Loaded l = testing::fixture("EX2");
    const System& sys = *l.system;
    const RunMeasure& mu = *l.measure;
    CHECK(check_run_based_prob_secrecy(sys, mu, 0, 1).holds);
    SecrecyVerdict v = check_run_based_prob_secrecy(sys, mu, 1, 0);
    REQUIRE_FALSE(v.holds);
    CHECK(v.failure == Failure::unequal);
    CHECK(v.counterexample->values == std::vector<Rational>{q("3/5"), q("1")});
    CHECK_FALSE(check_independence(sys, mu, 0, 1));
}

TEST_CASE("HT point measures") {
    Loaded l = testing::fixture("EX2");
    const System& sys = *l.system;
    // K_1(r2,0) = {(r1,0),(r1,1),(r2,0)}: runs r1 and r2
    PointMeasure pm = ht_point_measure(sys, *l.measure, 0, {1, 0});
    CHECK(pm.run_generated());
    PointSet r1 = sys.empty_points();
    r1.set(sys.index({0, 0}));
    r1.set(sys.index({0, 1}));
    CHECK(pm.measure_or_throw(r1) == q("2/3"));
    PointSet half = sys.empty_points();
    half.set(sys.index({0, 0}));
    CHECK_FALSE(pm.is_measurable(half));
    CHECK_FALSE(pm.measure(half));
    CHECK_THROWS_AS(pm.measure_or_throw(half), Error);
    CHECK_FALSE(pm.point_weights());
}

TEST_CASE("explicit point measures") {
    System sys = testing::two_agent({{{"a", "x"}}, {{"a", "y"}}}, 0);
    PointMeasure pm = PointMeasure::from_points(sys, 0, {0, 0}, {q("1/4"), q("3/4")});
    PointSet one = sys.empty_points();
    one.set(1);
    CHECK(pm.measure_or_throw(one) == q("3/4"));
    CHECK(pm.point_weights()->size() == 2);
    CHECK_THROWS_AS(PointMeasure::from_points(sys, 1, {0, 0}, {q("1/4"), q("3/4")}), Error);
    CHECK_THROWS_AS(PointMeasure::from_points(sys, 0, {0, 0}, {q("1/4"), q("1/4")}), Error);
}

TEST_CASE("NONMEASURABLE: total secrecy fails on measurability") {
    Loaded l = testing::fixture("NONMEASURABLE");
    SecrecyVerdict v = check_prob_total_secrecy(*l.system, ht_assignment(*l.system, *l.measure), 0, 1);
    REQUIRE_FALSE(v.holds);
    CHECK(v.failure == Failure::non_measurable);
}

TEST_CASE("probabilistic secrecy matches brute-force conditioning") {
    std::mt19937_64 rng(99);
    int held = 0;
    for (int k = 0; k < 300; ++k) {
        oracle::Table t = oracle::random_table(rng, true);
        Loaded l = load_json(oracle::to_spec(t));
        const System& sys = *l.system;
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}}) {
            bool rb = oracle::run_based_prob_secrecy(t, i, j);
            bool sync = oracle::prob_sync_secrecy(t, i, j);
            CHECK(check_run_based_prob_secrecy(sys, *l.measure, i, j).holds == rb);
            CHECK(check_prob_sync_secrecy(sys, *l.measure, i, j).holds == sync);
            CHECK(oracle_prob_syntactic(sys, *l.measure, i, j, ProbVariant::sync).holds == sync);
            held += rb;
        }
        CHECK(check_independence(sys, *l.measure, 0, 1) == check_independence(sys, *l.measure, 1, 0));
    }
    CHECK(held > 0);
    CHECK(held < 600);
}

TEST_CASE("the standard common prior") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        oracle::Table t = oracle::random_table(rng, true);
        Loaded l = load_json(oracle::to_spec(t));
        const System& sys = *l.system;
        CommonPrior cp = common_prior_for_sync_standard(sys, *l.measure);
        for (std::size_t m = 0; m <= sys.horizon(); ++m)
            CHECK(cp.time_marginal(sys, m) == Rational(1) / pow2(unsigned(m + 1)));
        CHECK(cp_conditional_independence(sys, cp, 0, 1, true) ==
              check_prob_sync_secrecy(sys, *l.measure, 0, 1).holds);
        // conditioning the prior on K_i(p) gives the HT point measure
        auto assign = common_prior_assignment(sys, cp);
        for (Point p : points(sys)) {
            PointSet kj = sys.info_points(1, sys.local_id(1, p));
            CHECK(assign(0, p).measure_or_throw(kj) == ht_point_measure(sys, *l.measure, 0, p).measure_or_throw(kj));
        }
    }
}

TEST_CASE("undominated information sets") {
    Loaded l = testing::fixture("EX3");
    const System& sys = *l.system;
    LocalId x = sys.find_local(0, "X"), y1 = sys.find_local(0, "Y1"), q0 = sys.find_local(0, "Q");
    CHECK(partition_info_sets(sys, 0, {x, y1}) == std::vector<LocalId>{x});
    CHECK(partition_info_sets(sys, 0, {x, q0}) == std::vector<LocalId>{x, q0});
    CHECK_THROWS_AS(partition_info_sets(sys, 1, {0}), Error);
}

TEST_CASE("independence lemma") {
    RunMeasure u = RunMeasure::uniform(4);
    RunSet all = runs_of(4, {0, 1, 2, 3});
    IndependenceLemma ind = independence_lemma(u, all, {runs_of(4, {0, 1})}, {runs_of(4, {0, 2}), runs_of(4, {1, 3})});
    CHECK(ind.a);
    CHECK(ind.b);
    CHECK(ind.c);
    IndependenceLemma dep = independence_lemma(u, all, {runs_of(4, {0})}, {runs_of(4, {0, 1}), runs_of(4, {2, 3})});
    CHECK_FALSE(dep.a);
    CHECK_FALSE(dep.c);
    CHECK_THROWS_AS(independence_lemma(RunMeasure({1, 0, 0, 0}), runs_of(4, {2}), {}, {}), Error);
}
