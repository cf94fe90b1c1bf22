#include "../oracles.hpp"
#include "../support.hpp"

#include "runsec/plaus.hpp"
#include "runsec/secrecy.hpp"

#include <doctest.h>

#include <algorithm>

using namespace runsec;
using testing::q;

namespace {

IndexSet set_of(std::size_t n, std::initializer_list<std::size_t> members) {
    IndexSet s(n);
    for (auto k : members)
        s.set(k);
    return s;
}

} // namespace

TEST_CASE("domain operations") {
    TrivialDomain t;
    CHECK(t.plus(0, 1) == 1);
    CHECK(t.times(1, 0) == 0);

    ProbabilityDomain p;
    CHECK(p.plus(q("1/2"), q("3/4")) == 1); // capped
    CHECK(p.plus(q("1/4"), q("1/4")) == q("1/2"));
    CHECK(p.times(q("1/2"), q("1/3")) == q("1/6"));

    MeasureVectorDomain mv{2};
    MeasureVectorDomain::Value a{q("1/2"), std::nullopt}, b{q("1/4"), q("0")};
    CHECK(mv.show(mv.plus(a, b)) == "(3/4,*)");
    CHECK(mv.show(mv.times(a, b)) == "(1/8,0)");
    CHECK(mv.leq(b, a) == false); // * is only comparable to *
    CHECK(mv.leq(MeasureVectorDomain::Value{q("1/4"), std::nullopt}, a));
    CHECK(mv.is_bottom(MeasureVectorDomain::Value{q("0"), std::nullopt}));
    CHECK_FALSE(mv.is_bottom(a));
    CHECK_THROWS_AS(measure_vector_space({}), Error);
}

TEST_CASE("the standard spaces satisfy the axioms") {
    std::mt19937_64 rng(17);
    auto family = axiom_family(4, {});
    CHECK(family.size() == 16);
    AxiomReport tr = verify_axioms(trivial_space(4), family);
    CHECK_MESSAGE(tr.ok(), tr.first_failure);
    for (int k = 0; k < 10; ++k) {
        std::vector<Rational> w;
        std::vector<Rational> w2;
        Rational total = 0, total2 = 0;
        for (int x = 0; x < 4; ++x) {
            w.push_back(Rational(long(rng() % 4)));
            w2.push_back(Rational(long(rng() % 3 + 1)));
            total += w.back();
            total2 += w2.back();
        }
        if (total == 0 || total2 == 0)
            continue;
        for (auto& x : w)
            x /= total;
        for (auto& x : w2)
            x /= total2;
        AxiomReport pr = verify_axioms(probability_space(w), family);
        CHECK_MESSAGE(pr.ok(), pr.first_failure);
        std::vector<Rational> w3 = w2;
        std::reverse(w3.begin(), w3.end());
        AxiomReport mv = verify_axioms(measure_vector_space({w2, w3}), family);
        CHECK_MESSAGE(mv.ok(), mv.first_failure);
    }
}

TEST_CASE("measure vectors where only some measures condition") {
    auto space = measure_vector_space({{q("1"), q("0")}, {q("1/2"), q("1/2")}});
    IndexSet second = set_of(2, {1});
    CHECK(space.conditionable(second));
    CHECK(space.domain().show(space.pl(second, second)) == "(*,1)");
    CHECK_FALSE(verify_axioms(space, axiom_family(2, {})).top_on_self);
}

TEST_CASE("axiom checks reject broken tables") {
    auto family = axiom_family(3, {});
    PlausibilitySpace<ProbabilityDomain> half(
        ProbabilityDomain{}, 3, [](const IndexSet& u) { return u.any(); },
        [](const IndexSet&, const IndexSet&) { return Rational(1, 2); });
    AxiomReport r = verify_axioms(half, family);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.top_on_self);
    CHECK(r.first_failure == "Pl(U|U) != top");

    // a third per point, but 1 on the conditioning set itself
    PlausibilitySpace<ProbabilityDomain> count(
        ProbabilityDomain{}, 3, [](const IndexSet& u) { return u.any(); },
        [](const IndexSet& v, const IndexSet& u) {
            return (v & u) == u ? Rational(1) : Rational(long((v & u).count()), 3);
        });
    CHECK_FALSE(verify_axioms(count, family).additivity);
}

TEST_CASE("generated axiom families") {
    auto fam = axiom_family(8, {set_of(8, {0, 1, 2}), set_of(8, {2, 3})});
    CHECK(fam.size() == 5); // empty, all, the two generators, {2}
}

TEST_CASE("plausibilistic secrecy reduces to the classical notions") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 150; ++k) {
        oracle::Table t = oracle::random_table(rng, true);
        Loaded l = load_json(oracle::to_spec(t));
        const System& sys = *l.system;
        // a second positive measure on the same runs
        std::vector<Rational> w2;
        Rational total = 0;
        for (std::size_t r = 0; r < sys.run_count(); ++r) {
            w2.push_back(Rational(long(r % 3 + 1)));
            total += w2.back();
        }
        for (auto& x : w2)
            x /= total;
        RunMeasure mu2(w2);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}}) {
            CHECK(check_plaus_secrecy(trivial_run_space(sys), sys, i, j, PlausVariant::run_based).holds ==
                  check_run_based_secrecy(sys, i, j).holds);
            CHECK(check_plaus_secrecy(trivial_point_space(sys), sys, i, j, PlausVariant::total).holds ==
                  check_total_secrecy(sys, i, j).holds);
            CHECK(check_plaus_secrecy(trivial_point_space(sys), sys, i, j, PlausVariant::sync).holds ==
                  check_synchronous_secrecy(sys, i, j).holds);
            bool p1 = check_run_based_prob_secrecy(sys, *l.measure, i, j).holds;
            bool p2 = check_run_based_prob_secrecy(sys, mu2, i, j).holds;
            CHECK(check_plaus_secrecy(probability_run_space(*l.measure), sys, i, j, PlausVariant::run_based).holds ==
                  p1);
            CHECK(check_plaus_secrecy(measure_vector_run_space({*l.measure, mu2}), sys, i, j, PlausVariant::run_based)
                      .holds == (p1 && p2));
            CommonPrior cp = common_prior_for_sync_standard(sys, *l.measure);
            CHECK(check_plaus_secrecy(probability_point_space(cp), sys, i, j, PlausVariant::sync).holds ==
                  check_prob_sync_secrecy(sys, *l.measure, i, j).holds);
        }
    }
}

TEST_CASE("plausibilistic secrecy checks the carrier") {
    Loaded l = testing::fixture("EX2");
    const System& sys = *l.system;
    CHECK_THROWS_AS(check_plaus_secrecy(trivial_point_space(sys), sys, 0, 1, PlausVariant::run_based), Error);
    CHECK_THROWS_AS(check_plaus_secrecy(trivial_point_space(sys), sys, 0, 1, PlausVariant::sync), Error);
}

TEST_CASE("symmetry lemmas") {
    auto space = probability_space(std::vector<Rational>(4, q("1/4")));
    std::vector<IndexSet> part{set_of(4, {0, 1}), set_of(4, {2, 3})};
    LemmaReport ind = check_plaus_symmetry_lemmas(space, part, set_of(4, {0, 2}));
    CHECK(ind.constancy);
    CHECK(ind.equals_whole);
    CHECK(ind.symmetry == SymmetryStatus::verified);
    CHECK(ind.ok());
    LemmaReport dep = check_plaus_symmetry_lemmas(space, part, set_of(4, {0, 1, 2}));
    CHECK_FALSE(dep.constancy);
    CHECK_FALSE(dep.equals_whole);
    CHECK(dep.independence_ok);
    CHECK(dep.symmetry == SymmetryStatus::skipped_hypotheses);
    CHECK_THROWS_AS(check_plaus_symmetry_lemmas(space, {set_of(4, {0, 1}), set_of(4, {1, 2})}, set_of(4, {0})),
                    Error);
    CHECK(to_string(SymmetryStatus::skipped_noncommutative) == "skipped (non-commutative)");
}
