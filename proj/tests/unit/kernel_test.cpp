#include "../oracles.hpp"
#include "../support.hpp"

#include "runsec/kernel.hpp"

#include <doctest.h>

using namespace runsec;
using testing::two_agent;

TEST_CASE("system construction rejects malformed input") {
    CHECK_THROWS_AS(System({}, {{"r", {{"", {}}}}}, 0, TimeMode::synchronous), Error);
    CHECK_THROWS_AS(System({"1"}, {}, 0, TimeMode::synchronous), Error);
    CHECK_THROWS_AS(System({"1", "1"}, {{"r", {{"", {"a", "b"}}}}}, 0, TimeMode::synchronous), Error);
    CHECK_THROWS_AS(two_agent({{{"a", "b"}}, {{"a", "c"}}}, 1), Error); // short synchronous runs
    CHECK_THROWS_AS(two_agent({{{"a", "b"}, {"a", "c"}}}, 1), Error);   // a repeats over time
    CHECK_THROWS_AS(System({"1", "2"}, {{"r", {{"", {"a"}}}}}, 0, TimeMode::synchronous), Error);
    CHECK_THROWS_AS(System({"1"}, {{"r", {{"", {"a"}}}}, {"r", {{"", {"b"}}}}}, 0, TimeMode::synchronous), Error);
}

TEST_CASE("asynchronous runs are stutter-padded") {
    System sys = two_agent({{{"x", "a"}}, {{"x", "b"}, {"y", "a"}}}, 1, TimeMode::asynchronous_stutter);
    CHECK(sys.point_count() == 4);
    CHECK(sys.local(0, {0, 1}) == "x");
    CHECK(sys.local(1, {0, 1}) == "a");
    CHECK_FALSE(is_synchronous(sys));
}

TEST_CASE("information sets and run projections") {
    System sys = two_agent({{{"X", "A"}, {"Y1", "B1"}}, {{"Z", "A"}, {"Y1", "C1"}}}, 1);
    InformationSet k = info_set(sys, 0, {0, 1});
    CHECK(k.token == "Y1");
    CHECK(k.points.count() == 2);
    CHECK(k.points.test(sys.index({1, 1})));
    RunSet rs = runs_through(sys, info_set(sys, 1, {0, 0}).points);
    CHECK(rs.count() == 2);
    CHECK(points_on(sys, sys.info_runs(0, sys.find_local(0, "X"))).count() == 2);
    CHECK(sys.members(1, sys.find_local(1, "A")).size() == 2);
    CHECK_THROWS_AS(sys.find_local(0, "nope"), Error);
    CHECK_THROWS_AS(sys.check_point({2, 0}), Error);
    CHECK(local_state_sequence(sys, 1, {1, 1}) == std::vector<std::string>{"A", "C1"});
}

TEST_CASE("perfect recall agrees with the history oracle") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        oracle::Table t = oracle::random_table(rng, false);
        Loaded l = load_json(oracle::to_spec(t));
        CHECK(is_synchronous(*l.system));
        for (AgentId a = 0; a < 2; ++a)
            CHECK(has_perfect_recall(*l.system, a) == oracle::perfect_recall(t, a));
    }
}

TEST_CASE("forgetting breaks recall") {
    System sys = two_agent({{{"X@0", "A@0"}, {"Y@1", "B@1"}}, {{"Z@0", "A@0"}, {"Y@1", "C@1"}}}, 1);
    CHECK_FALSE(has_perfect_recall(sys, 0));
    CHECK(has_perfect_recall(sys, 1));
}

TEST_CASE("allowability functions") {
    System sys = two_agent({{{"a0", "b0"}, {"a1", "b1"}, {"a2", "b2"}}, {{"c0", "b0"}, {"c1", "d1"}, {"c2", "d2"}}}, 2);
    CHECK(allowability_points(Allowability::make_total(), sys, {0, 0}).count() == 6);
    CHECK(allowability_points(Allowability::make_synchronous(), sys, {0, 1}).count() == 2);
    CHECK(allowability_points(Allowability::make_semisynchronous(1), sys, {0, 0}).count() == 4);
    CHECK(allowability_points(Allowability::make_semisynchronous(1), sys, {0, 1}).count() == 6);
    CHECK(to_string(Allowability::make_semisynchronous(3)) == "semisynchronous(3)");

    CHECK(depends_only_on_timing(Allowability::make_total(), sys));
    CHECK(depends_only_on_timing(Allowability::make_synchronous(), sys));

    // a table that pins one run, which no timing-only function does
    std::map<Point, std::vector<Point>> table;
    for (Point p : points(sys))
        table[p] = {p};
    Allowability pinned = Allowability::make_explicit(table);
    CHECK_NOTHROW(validate_allowability(pinned, sys, 0));
    CHECK_FALSE(depends_only_on_timing(pinned, sys));

    table.erase({1, 2});
    CHECK_THROWS_AS(allowability_points(Allowability::make_explicit(table), sys, {1, 2}), Error);

    // the b0 information set spans both runs at time 0; a singleton table omits it
    CHECK_THROWS_AS(validate_allowability(pinned, sys, 1), Error);
}

TEST_CASE("derived agents") {
    System sys = two_agent({{{"X", "A"}, {"Y", "B"}}, {{"Z", "C"}, {"W", "D"}}}, 1);
    InfoFunction f{1, {{"A", "0"}, {"B", "1"}, {"C", "0"}, {"D", "0"}}};
    CHECK_NOTHROW(validate_info_function(f, sys));
    System d = derive_agent(sys, f, "2f");
    CHECK(d.agent_count() == 3);
    CHECK(d.local(2, {0, 1}) == "1");
    CHECK(d.mode() == TimeMode::asynchronous_stutter); // "0" at two times
    System ts = derive_agent(sys, f, "2f", true);
    CHECK(ts.mode() == TimeMode::synchronous);
    CHECK(ts.local(2, {1, 1}) == "0@1");
    CHECK_THROWS_AS(derive_agent(sys, f, "1"), Error);

    InfoFunction partial{1, {{"A", "0"}}};
    CHECK_THROWS_AS(validate_info_function(partial, sys), Error);
}
