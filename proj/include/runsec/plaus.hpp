#pragma once

#include "runsec/kernel.hpp"
#include "runsec/prob.hpp"
#include "runsec/rational.hpp"
#include "runsec/verdict.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace runsec {

// {0,1}, max / min.
struct TrivialDomain {
    using Value = int;
    static constexpr bool commutative = true;
    Value bottom() const { return 0; }
    Value top() const { return 1; }
    Value plus(Value a, Value b) const { return std::max(a, b); }
    Value times(Value a, Value b) const { return std::min(a, b); }
    bool leq(Value a, Value b) const { return a <= b; }
    bool equal(Value a, Value b) const { return a == b; }
    std::string show(Value v) const { return std::to_string(v); }
};

// [0,1], capped sum / product.
struct ProbabilityDomain {
    using Value = Rational;
    static constexpr bool commutative = true;
    Value bottom() const { return 0; }
    Value top() const { return 1; }
    Value plus(const Value& a, const Value& b) const {
        Value s = a + b;
        return s > 1 ? Value(1) : s;
    }
    Value times(const Value& a, const Value& b) const { return a * b; }
    bool leq(const Value& a, const Value& b) const { return a <= b; }
    bool equal(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& v) const { return to_string(v); }
};

// Functions from a list of measures to [0,1] ∪ {*}, pointwise. nullopt is *.
// * absorbs under ⊕; under ⊗ an exact 0 wins over *.
struct MeasureVectorDomain {
    using Component = std::optional<Rational>;
    using Value = std::vector<Component>;
    static constexpr bool commutative = true;
    std::size_t n = 1;

    Value bottom() const { return Value(n, Rational(0)); }
    Value top() const { return Value(n, Rational(1)); }
    Value plus(const Value& a, const Value& b) const;
    Value times(const Value& a, const Value& b) const;
    bool leq(const Value& a, const Value& b) const;
    bool equal(const Value& a, const Value& b) const { return a == b; }
    bool is_bottom(const Value& v) const;
    std::string show(const Value& v) const;
};

template <class D>
bool is_bottom(const D& d, const typename D::Value& v) {
    if constexpr (std::is_same_v<D, MeasureVectorDomain>)
        return d.is_bottom(v);
    else
        return d.equal(v, d.bottom());
}

// Finite conditional plausibility space over a carrier of runs or points.
template <class D>
class PlausibilitySpace {
public:
    using Value = typename D::Value;
    using Member = std::function<bool(const IndexSet&)>;
    using Table = std::function<Value(const IndexSet&, const IndexSet&)>;

    PlausibilitySpace(D domain, std::size_t carrier, Member in_fprime, Table pl, bool acceptable = true)
        : dom_(std::move(domain)), n_(carrier), fprime_(std::move(in_fprime)), pl_(std::move(pl)),
          acceptable_(acceptable) {}

    const D& domain() const { return dom_; }
    std::size_t carrier() const { return n_; }
    bool acceptable() const { return acceptable_; }
    bool conditionable(const IndexSet& u) const { return fprime_(u); }

    // Pl(V | U); throws Error when U is outside F'.
    Value pl(const IndexSet& v, const IndexSet& u) const {
        if (!fprime_(u))
            throw Error("conditioning on a set outside F'");
        return pl_(v, u);
    }

private:
    D dom_;
    std::size_t n_;
    Member fprime_;
    Table pl_;
    bool acceptable_;
};

PlausibilitySpace<TrivialDomain> trivial_space(std::size_t carrier);
PlausibilitySpace<ProbabilityDomain> probability_space(std::vector<Rational> weights);
PlausibilitySpace<MeasureVectorDomain> measure_vector_space(std::vector<std::vector<Rational>> weights);

// Run-carrier spaces.
inline PlausibilitySpace<TrivialDomain> trivial_run_space(const System& sys) { return trivial_space(sys.run_count()); }
inline PlausibilitySpace<ProbabilityDomain> probability_run_space(const RunMeasure& mu) {
    return probability_space(mu.weights());
}
PlausibilitySpace<MeasureVectorDomain> measure_vector_run_space(const std::vector<RunMeasure>& mus);

// Point-carrier spaces from common priors.
inline PlausibilitySpace<TrivialDomain> trivial_point_space(const System& sys) {
    return trivial_space(sys.point_count());
}
inline PlausibilitySpace<ProbabilityDomain> probability_point_space(const CommonPrior& cp) {
    return probability_space(cp.weights);
}
PlausibilitySpace<MeasureVectorDomain> measure_vector_point_space(const std::vector<CommonPrior>& cps);

enum class PlausVariant { total, sync, run_based };

// run_based needs a run-carrier space; total and sync a point-carrier one.
template <class D>
SecrecyVerdict check_plaus_secrecy(const PlausibilitySpace<D>& space, const System& sys, AgentId i, AgentId j,
                                   PlausVariant variant) {
    const bool runs = variant == PlausVariant::run_based;
    if (space.carrier() != (runs ? sys.run_count() : sys.point_count()))
        throw Error("plausibility space carrier does not match the variant");
    if (variant == PlausVariant::sync && !is_synchronous(sys))
        throw Error("plausibilistic synchronous secrecy requires a synchronous system");
    const D& dom = space.domain();
    auto set_of = [&](AgentId a, LocalId l) { return runs ? sys.info_runs(a, l) : sys.info_points(a, l); };
    auto time_of = [&](AgentId a, LocalId l) { return sys.point(sys.members(a, l).front()).time; };
    for (LocalId b = 0; b < sys.local_count(j); ++b) {
        IndexSet target = set_of(j, b);
        std::optional<std::pair<LocalId, typename D::Value>> first;
        for (LocalId a = 0; a < sys.local_count(i); ++a) {
            if (variant == PlausVariant::sync && time_of(i, a) != time_of(j, b))
                continue;
            auto v = space.pl(target, set_of(i, a));
            if (!first) {
                first = std::pair{a, v};
            } else if (!dom.equal(first->second, v)) {
                Point p0 = sys.point(sys.members(i, first->first).front());
                Point p = sys.point(sys.members(i, a).front());
                Point q = sys.point(sys.members(j, b).front());
                Counterexample cx{{p0, p, q}, {}, {},
                                  "Pl of j-state " + sys.local_token(j, b) + " is " + dom.show(first->second) +
                                      " given " + sys.local_token(i, first->first) + " but " + dom.show(v) +
                                      " given " + sys.local_token(i, a)};
                return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
            }
        }
    }
    return SecrecyVerdict::pass("plausibility of every j-information set is constant");
}

struct AxiomReport {
    bool top_on_self = true;
    bool fprime_superset_closed = true;
    bool additivity = true;
    bool chain_rule = true;
    bool distributivity = true;
    bool cancellation = true;
    bool identities = true;
    bool acceptability = true;
    std::string first_failure;
    bool ok() const {
        return top_on_self && fprime_superset_closed && additivity && chain_rule && distributivity && cancellation &&
               identities && acceptability;
    }
};

// Checks the algebraic axioms over `family` (sets of the carrier); Dom(⊕)
// and Dom(⊗) are the value tuples the family produces.
template <class D>
AxiomReport verify_axioms(const PlausibilitySpace<D>& space, const std::vector<IndexSet>& family) {
    const D& dom = space.domain();
    using V = typename D::Value;
    AxiomReport rep;
    auto flag = [&](bool& field, const std::string& what) {
        if (field && rep.first_failure.empty())
            rep.first_failure = what;
        field = false;
    };
    std::map<std::string, V> values;
    std::set<std::pair<std::string, std::string>> dom_plus, dom_times;
    for (const auto& u : family) {
        if (!space.conditionable(u))
            continue;
        if (!dom.equal(space.pl(u, u), dom.top()))
            flag(rep.top_on_self, "Pl(U|U) != top");
        for (const auto& v : family)
            if (u.is_subset_of(v) && !space.conditionable(v))
                flag(rep.fprime_superset_closed, "F' not closed under supersets");
        for (const auto& v1 : family) {
            V a = space.pl(v1, u);
            values.emplace(dom.show(a), a);
            if (space.acceptable() && !is_bottom(dom, a) && !space.conditionable(v1 & u))
                flag(rep.acceptability, "Pl(V|U) != bottom but V∩U outside F'");
            for (const auto& v2 : family) {
                if (v1.intersects(v2))
                    continue;
                V b = space.pl(v2, u);
                dom_plus.emplace(dom.show(a), dom.show(b));
                if (!dom.equal(space.pl(v1 | v2, u), dom.plus(a, b)))
                    flag(rep.additivity, "additivity fails");
            }
        }
    }
    for (const auto& u3 : family)
        for (const auto& u2 : family) {
            IndexSet c23 = u2 & u3;
            if (!space.conditionable(c23))
                continue;
            V c = space.pl(u2, u3);
            for (const auto& u1 : family) {
                V a = space.pl(u1, c23);
                dom_times.emplace(dom.show(a), dom.show(c));
                if (!dom.equal(space.pl(u1 & u2, u3), dom.times(a, c)))
                    flag(rep.chain_rule, "chain rule fails");
            }
        }
    for (const auto& [ka, a] : values) {
        if (!dom.equal(dom.plus(a, dom.bottom()), a))
            flag(rep.identities, "bottom is not a ⊕ identity");
        if (!dom.equal(dom.times(a, dom.top()), a) || !dom.equal(dom.times(dom.top(), a), a))
            flag(rep.identities, "top is not a ⊗ identity");
    }
    for (const auto& [kb1, kb2] : dom_plus) {
        const V& b1 = values.at(kb1);
        const V& b2 = values.at(kb2);
        V sum = dom.plus(b1, b2);
        for (const auto& [ka, a] : values) {
            if (!dom_times.count({ka, kb1}) || !dom_times.count({ka, kb2}) || !dom_times.count({ka, dom.show(sum)}))
                continue;
            if (!dom_plus.count({dom.show(dom.times(a, b1)), dom.show(dom.times(a, b2))}))
                continue;
            if (!dom.equal(dom.times(a, sum), dom.plus(dom.times(a, b1), dom.times(a, b2))))
                flag(rep.distributivity, "⊗ does not distribute over ⊕");
        }
    }
    for (const auto& [ka, kc] : dom_times)
        for (const auto& [kb, kc2] : dom_times) {
            if (kc != kc2)
                continue;
            const V& a = values.at(ka);
            const V& b = values.at(kb);
            const V& c = values.at(kc);
            if (is_bottom(dom, c))
                continue;
            if (dom.leq(dom.times(a, c), dom.times(b, c)) && !dom.leq(a, b))
                flag(rep.cancellation, "cancellation fails");
        }
    return rep;
}

// All subsets when the carrier is small, else the sets generated by the
// given generators under intersection, plus ∅ and the carrier.
std::vector<IndexSet> axiom_family(std::size_t carrier, const std::vector<IndexSet>& generators,
                                   std::size_t exhaustive_limit = 5);

enum class SymmetryStatus { verified, violated, skipped_noncommutative, skipped_hypotheses };
std::string to_string(SymmetryStatus s);

struct LemmaReport {
    bool constancy = false;          // (a): Pl(X|Y_i) constant over Y_i in F'
    bool equals_whole = false;       // (b): Pl(X|Y_i) = Pl(X|Y)
    bool independence_ok = false;    // (a) <=> (b)
    SymmetryStatus symmetry = SymmetryStatus::skipped_hypotheses;
    std::string label;
    bool ok() const { return independence_ok && symmetry != SymmetryStatus::violated; }
};

template <class D>
LemmaReport check_plaus_symmetry_lemmas(const PlausibilitySpace<D>& space, const std::vector<IndexSet>& partition,
                                        const IndexSet& x) {
    if (!space.acceptable())
        throw Error("the symmetry lemmas need an acceptable space");
    const D& dom = space.domain();
    LemmaReport rep;
    IndexSet y(space.carrier());
    for (const auto& yi : partition) {
        if (yi.intersects(y))
            throw Error("partition blocks overlap");
        y |= yi;
    }
    if (!space.conditionable(y))
        throw Error("the union of the partition must lie in F'");
    rep.constancy = true;
    rep.equals_whole = true;
    std::optional<typename D::Value> first;
    auto whole = space.pl(x, y);
    for (const auto& yi : partition) {
        if (!space.conditionable(yi))
            continue;
        auto v = space.pl(x, yi);
        if (!first)
            first = v;
        else if (!dom.equal(*first, v))
            rep.constancy = false;
        if (!dom.equal(v, whole))
            rep.equals_whole = false;
    }
    rep.independence_ok = rep.constancy == rep.equals_whole;
    if (!D::commutative) {
        rep.symmetry = SymmetryStatus::skipped_noncommutative;
        rep.label = "skipped: ⊗ is not commutative";
        return rep;
    }
    if (!space.conditionable(x) || !x.is_subset_of(y) || is_bottom(dom, whole) || !rep.constancy) {
        rep.symmetry = SymmetryStatus::skipped_hypotheses;
        rep.label = "skipped: hypotheses not met";
        return rep;
    }
    rep.symmetry = SymmetryStatus::verified;
    rep.label = "verified";
    for (const auto& yi : partition)
        if (!dom.equal(space.pl(yi, x), space.pl(yi, y))) {
            rep.symmetry = SymmetryStatus::violated;
            rep.label = "violated";
        }
    return rep;
}

} // namespace runsec
