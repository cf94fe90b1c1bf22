#include "runsec/generators.hpp"
#include "runsec/suites.hpp"

#include <doctest.h>

using namespace runsec;

TEST_CASE("every suite passes a short seeded run") {
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        SuiteResult r = run_suite(name, 3, 40);
        CHECK(r.checked == 40);
        CHECK(r.ok());
        CHECK(r.held + r.failed == r.checked);
    }
}

TEST_CASE("suites are deterministic in the seed") {
    SuiteResult a = run_suite("runbased-oracle", 11, 30), b = run_suite("runbased-oracle", 11, 30);
    CHECK(a.held == b.held);
    CHECK(a.skipped == b.skipped);
    CHECK(suite_json(a)["held"] == suite_json(b)["held"]);
}

TEST_CASE("mutations") {
    CHECK(parse_mutation("none") == Mutation::none);
    CHECK(parse_mutation("skip-recall-filter") == Mutation::skip_recall_filter);
    CHECK(to_string(Mutation::float_tolerance) == "float-tolerance");
    CHECK_THROWS_AS(parse_mutation("other"), Error);
    CHECK_THROWS_AS(run_suite("no-such-suite", 1, 1), Error);
}

TEST_CASE("dropping the recall filter is caught") {
    SuiteResult r = run_suite("sync-vs-runbased", 7, 200, Mutation::skip_recall_filter);
    CHECK_FALSE(r.ok());
    REQUIRE_FALSE(r.failures.empty());
    // the minimized reproduction is a loadable spec
    Loaded l = load_json(r.failures[0].spec);
    CHECK(l.system->run_count() >= 2);
}

TEST_CASE("float tolerance is caught on near-miss measures") {
    SuiteResult r = run_suite("prob-symmetry", 7, 200, Mutation::float_tolerance);
    CHECK_FALSE(r.ok());
}

TEST_CASE("generated systems respect their shape") {
    std::mt19937_64 rng(instance_seed(5, 1));
    SystemShape shape;
    shape.max_runs = 3;
    shape.max_horizon = 2;
    for (int k = 0; k < 50; ++k) {
        RandomSystem rs = random_system(rng, shape);
        CHECK(rs.sys.run_count() >= 1);
        CHECK(rs.sys.horizon() <= 2);
        CHECK(is_synchronous(rs.sys));
        CHECK(has_perfect_recall(rs.sys, 0));
        CHECK(has_perfect_recall(rs.sys, 1));
        RunMeasure mu = random_measure(rng, rs.sys.run_count());
        Rational total = 0;
        for (const auto& w : mu.weights())
            total += w;
        CHECK(total == 1);
    }
    CHECK(instance_seed(1, 2) == 1000005u);
}
