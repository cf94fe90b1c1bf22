#include "../oracles.hpp"
#include "../support.hpp"

#include "runsec/epistemic.hpp"
#include "runsec/formula.hpp"

#include <doctest.h>

using namespace runsec;
using testing::q;

TEST_CASE("formula syntax round-trips") {
    for (const char* text : {"p", "(not p)", "(and p q)", "(K 1 (P 2 p))", "(once (not p))", "(pr 1 (once p) >= 1/2)",
                             "(pr 2 p = 0)", "(pr 1 q < 1)"}) {
        auto f = parse_formula(text);
        CHECK(to_string(*f) == text);
        CHECK(to_string(*parse_formula(to_string(*f))) == text);
    }
    CHECK(to_string(*parse_formula("(and p q r)")) == "(and (and p q) r)");
    CHECK(to_string(*parse_formula("(or p q)")) == to_string(*disj(prim("p"), prim("q"))));
    CHECK_THROWS_AS(parse_formula("(and p"), Error);
    CHECK_THROWS_AS(parse_formula("(pr 1 p = 3/2)"), Error);
    CHECK_THROWS_AS(parse_formula("(K 1)"), Error);
    CHECK_THROWS_AS(parse_formula("p q"), Error);
}

TEST_CASE("rational comparisons") {
    CHECK(compare(q("1/2"), Cmp::eq, q("2/4")));
    CHECK(compare(q("1/3"), Cmp::lt, q("1/2")));
    CHECK(compare(q("1/2"), Cmp::le, q("1/2")));
    CHECK_FALSE(compare(q("1/2"), Cmp::gt, q("1/2")));
    CHECK(compare(q("1"), Cmp::ge, q("0")));
}

TEST_CASE("knowledge on EX1") {
    Loaded l = testing::fixture("EX1");
    const System& sys = *l.system;
    Interpretation pi;
    pi["x"] = {StatePredicate{"1", {"X"}}};
    pi["b"] = {StatePredicate{"2", {"B1", "B2"}}};
    InterpretedSystem is{sys, pi, nullptr};
    // agent 1 knows x at (r1,0) and forgets it afterwards
    CHECK(eval(is, {0, 0}, *parse_formula("(K 1 x)")));
    CHECK_FALSE(eval(is, {0, 1}, *parse_formula("(K 1 x)")));
    CHECK(eval(is, {0, 1}, *parse_formula("(P 1 (once x))")));
    CHECK_FALSE(eval(is, {0, 1}, *parse_formula("(K 1 (once x))")));
    CHECK(eval(is, {1, 1}, *parse_formula("(P 1 b)")));
    // once is read over the whole run
    CHECK(eval(is, {0, 2}, *parse_formula("(once x)")));
    CHECK_FALSE(eval(is, {1, 2}, *parse_formula("(once x)")));
    CHECK(is_j_local(is, 1, *parse_formula("b")));
    CHECK_FALSE(is_j_local(is, 1, *parse_formula("x")));
    CHECK_THROWS_AS(eval(is, {0, 0}, *parse_formula("zz")), Error);
    CHECK_THROWS_AS(eval(is, {0, 0}, *parse_formula("(pr 1 x = 1)")), Error); // no measure
}

TEST_CASE("EX3: probability of once p") {
    Loaded l = testing::fixture("EX3");
    const System& sys = *l.system;
    InterpretedSystem is{sys, l.interpretation, &*l.measure};
    Evaluator ev(is);
    auto f = parse_formula("(once p)");
    CHECK(ev.probability(0, *f, parse_point(sys, "r1,0")) == 1);
    CHECK(ev.probability(0, *f, parse_point(sys, "r3,0")) == q("1/2"));
    // the syntactic oracle catches the same pair
    ProbOracleResult r = oracle_prob_syntactic(sys, *l.measure, 0, 1, ProbVariant::run_based);
    CHECK_FALSE(r.holds);
    CHECK(r.first_value != r.second_value);
}

TEST_CASE("j-local families") {
    Loaded l = testing::fixture("EX1");
    const System& sys = *l.system;
    auto fam = j_local_family(sys, 1);
    CHECK(fam.size() == (std::size_t(1) << sys.local_count(1)));
    for (const auto& s : fam)
        CHECK(is_union_of_info_sets(sys, 1, s.points));
    CHECK_THROWS_AS(j_local_family(sys, 1, 2), Error);
    PointSet one = sys.empty_points();
    one.set(0);
    CHECK_FALSE(is_union_of_info_sets(sys, 1, one));
}

TEST_CASE("pr formulas agree with brute-force conditioning") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        oracle::Table t = oracle::random_table(rng, true);
        Loaded l = load_json(oracle::to_spec(t));
        const System& sys = *l.system;
        // p: agent 2 is in its first token of run 1 at that time
        std::string tok = t.runs[0][t.horizon][1];
        InterpretedSystem is{sys, {{"p", {StatePredicate{"2", {tok}}}}}, &*l.measure};
        Evaluator ev(is);
        auto f = parse_formula("p");
        for (std::size_t r = 0; r < t.runs.size(); ++r) {
            std::size_t m = t.horizon;
            oracle::Q num = 0, den = 0;
            for (std::size_t s = 0; s < t.runs.size(); ++s)
                if (t.runs[s][m][0] == t.runs[r][m][0]) {
                    den += t.mu[s];
                    if (t.runs[s][m][1] == tok)
                        num += t.mu[s];
                }
            CHECK(ev.probability(0, *f, {r, m}) == num / den);
        }
    }
}

TEST_CASE("EX1 agent 2 has 32 local sets") {
    Loaded l = testing::fixture("EX1");
    CHECK(j_local_family(*l.system, 1).size() == 32);
}

TEST_CASE("EX3: once p by run") {
    Loaded l = testing::fixture("EX3");
    InterpretedSystem is{*l.system, l.interpretation, nullptr};
    CHECK_FALSE(eval(is, parse_point(*l.system, "r4,0"), *parse_formula("(once p)")));
    CHECK(eval(is, parse_point(*l.system, "r1,0"), *parse_formula("(once p)")));
}

TEST_CASE("duality and monotone once on random systems") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
        oracle::Table t = oracle::random_table(rng, false);
        Loaded l = load_json(oracle::to_spec(t));
        const System& sys = *l.system;
        Interpretation pi;
        pi["p"] = {StatePredicate{"2", {t.runs[0][0][1]}}};
        pi["q"] = {StatePredicate{"1", {t.runs.back().back()[0]}}};
        InterpretedSystem is{sys, pi, nullptr};
        Evaluator ev(is);
        for (const char* text : {"p", "q", "(and p (not q))", "(once q)", "(K 2 p)"}) {
            auto f = parse_formula(text);
            for (const char* agent : {"1", "2"}) {
                PointSet pos = ev.extension(*possible(agent, f));
                PointSet dual = ev.extension(*neg(knows(agent, neg(f))));
                CHECK(pos == dual);
            }
            PointSet o = ev.extension(*once(f));
            for (Point p : points(sys))
                for (std::size_t m = 0; m <= sys.horizon(); ++m)
                    CHECK(o.test(sys.index(p)) == o.test(sys.index({p.run, m})));
        }
    }
}
