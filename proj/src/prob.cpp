#include "runsec/prob.hpp"
#include "runsec/epistemic.hpp"

#include <map>

namespace runsec {

RunMeasure::RunMeasure(std::vector<Rational> weights) : w_(std::move(weights)) {
    Rational total = 0;
    for (const auto& w : w_) {
        if (w < 0)
            throw Error("negative run weight " + to_string(w));
        total += w;
    }
    if (total != 1)
        throw Error("run weights sum to " + to_string(total) + ", not 1");
}

RunMeasure RunMeasure::uniform(std::size_t runs) {
    return RunMeasure(std::vector<Rational>(runs, Rational(1, static_cast<unsigned long>(runs))));
}

Rational RunMeasure::measure(const RunSet& s) const {
    Rational out = 0;
    for (auto r = s.find_first(); r != RunSet::npos; r = s.find_next(r))
        out += w_.at(r);
    return out;
}

Rational RunMeasure::conditional(const RunSet& a, const RunSet& given) const {
    Rational g = measure(given);
    if (g == 0)
        throw Error("conditioning on a null set of runs");
    return measure(a & given) / g;
}

void validate_run_measure(const RunMeasure& mu, const System& sys) {
    if (mu.size() != sys.run_count())
        throw Error("run measure has " + std::to_string(mu.size()) + " weights for " +
                    std::to_string(sys.run_count()) + " runs");
    for (AgentId a = 0; a < sys.agent_count(); ++a)
        for (LocalId l = 0; l < sys.local_count(a); ++l)
            if (mu.measure(sys.info_runs(a, l)) == 0)
                throw Error("information set of agent '" + sys.agent_name(a) + "' with local state '" +
                            sys.local_token(a, l) +
                            "' has probability 0; every information set must have positive probability");
}

PointMeasure PointMeasure::from_runs(const System& sys, const RunMeasure& mu, AgentId i, Point p) {
    sys.check_point(p);
    PointMeasure pm;
    pm.sys_ = &sys;
    pm.agent_ = i;
    pm.at_ = p;
    pm.info_ = sys.info_points(i, sys.local_id(i, p));
    pm.from_runs_ = true;
    RunSet rk = runs_through(sys, pm.info_);
    Rational total = mu.measure(rk);
    if (total == 0)
        throw Error("K_" + sys.agent_name(i) + sys.point_label(p) + " has probability 0");
    pm.run_cond_.assign(sys.run_count(), 0);
    for (auto r = rk.find_first(); r != RunSet::npos; r = rk.find_next(r))
        pm.run_cond_[r] = mu.weight(r) / total;
    return pm;
}

PointMeasure PointMeasure::from_points(const System& sys, AgentId i, Point p, std::vector<Rational> point_weights) {
    sys.check_point(p);
    if (point_weights.size() != sys.point_count())
        throw Error("point weights must cover every point");
    PointMeasure pm;
    pm.sys_ = &sys;
    pm.agent_ = i;
    pm.at_ = p;
    pm.info_ = sys.info_points(i, sys.local_id(i, p));
    pm.from_runs_ = false;
    Rational total = 0;
    for (std::size_t k = 0; k < point_weights.size(); ++k) {
        if (point_weights[k] < 0)
            throw Error("negative point weight");
        if (!pm.info_.test(k) && point_weights[k] != 0)
            throw Error("point measure puts weight outside K_" + sys.agent_name(i) + sys.point_label(p));
        total += point_weights[k];
    }
    if (total != 1)
        throw Error("point measure at " + sys.point_label(p) + " sums to " + to_string(total));
    pm.point_w_ = std::move(point_weights);
    return pm;
}

bool PointMeasure::is_measurable(const PointSet& u) const {
    if (!from_runs_)
        return true;
    PointSet inside = u & info_;
    return (points_on(*sys_, runs_through(*sys_, inside)) & info_) == inside;
}

std::optional<Rational> PointMeasure::measure(const PointSet& u) const {
    PointSet inside = u & info_;
    Rational out = 0;
    if (from_runs_) {
        if (!is_measurable(u))
            return std::nullopt;
        RunSet rs = runs_through(*sys_, inside);
        for (auto r = rs.find_first(); r != RunSet::npos; r = rs.find_next(r))
            out += run_cond_[r];
    } else {
        for (auto k = inside.find_first(); k != PointSet::npos; k = inside.find_next(k))
            out += point_w_[k];
    }
    return out;
}

Rational PointMeasure::measure_or_throw(const PointSet& u) const {
    auto v = measure(u);
    if (!v)
        throw Error("set is not measurable for K_" + sys_->agent_name(agent_) + sys_->point_label(at_) +
                    " (not generated by runs)");
    return *v;
}

std::optional<std::vector<std::pair<Point, Rational>>> PointMeasure::point_weights() const {
    std::vector<std::pair<Point, Rational>> out;
    for (auto k = info_.find_first(); k != PointSet::npos; k = info_.find_next(k)) {
        PointSet single(info_.size());
        single.set(k);
        auto v = measure(single);
        if (!v)
            return std::nullopt;
        out.emplace_back(sys_->point(k), *v);
    }
    return out;
}

PointMeasure ht_point_measure(const System& sys, const RunMeasure& mu, AgentId i, Point p) {
    return PointMeasure::from_runs(sys, mu, i, p);
}

ProbabilityAssignment ht_assignment(const System& sys, const RunMeasure& mu) {
    return [&sys, &mu](AgentId i, Point p) { return ht_point_measure(sys, mu, i, p); };
}

SecrecyVerdict check_prob_total_secrecy(const System& sys, const ProbabilityAssignment& pr, AgentId i, AgentId j) {
    std::vector<PointMeasure> pms;
    pms.reserve(sys.point_count());
    for (std::size_t k = 0; k < sys.point_count(); ++k)
        pms.push_back(pr(i, sys.point(k)));
    for (LocalId b = 0; b < sys.local_count(j); ++b) {
        PointSet kj = sys.info_points(j, b);
        Point q = sys.point(sys.members(j, b).front());
        std::optional<Rational> first;
        Point first_p;
        for (std::size_t k = 0; k < sys.point_count(); ++k) {
            Point p = sys.point(k);
            auto v = pms[k].measure(kj);
            if (!v) {
                Counterexample cx{{p, q}, {}, {}, "K_j" + sys.point_label(q) + " ∩ K_i" + sys.point_label(p) +
                                                      " is not measurable"};
                return SecrecyVerdict::fail(Failure::non_measurable, std::move(cx));
            }
            if (!first) {
                first = *v;
                first_p = p;
            } else if (*v != *first) {
                Counterexample cx{{first_p, p, q}, {*first, *v}, {},
                                  "mu of K_j" + sys.point_label(q) + " differs between " + sys.point_label(first_p) +
                                      " and " + sys.point_label(p)};
                return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
            }
        }
    }
    return SecrecyVerdict::pass("every j-information set has the same measure from every point");
}

SecrecyVerdict check_prob_sync_secrecy(const System& sys, const RunMeasure& mu, AgentId i, AgentId j) {
    if (!is_synchronous(sys))
        throw Error("probabilistic synchronous secrecy requires a synchronous system");
    for (std::size_t m = 0; m <= sys.horizon(); ++m) {
        // joint[a][b] = mu of runs with (i, j) states (a, b) at time m
        std::map<LocalId, std::map<LocalId, Rational>> joint;
        std::map<LocalId, Rational> marg;
        std::vector<LocalId> jstates;
        std::map<LocalId, Point> j_first;
        for (std::size_t r = 0; r < sys.run_count(); ++r) {
            LocalId a = sys.local_id(i, {r, m}), b = sys.local_id(j, {r, m});
            joint[a][b] += mu.weight(r);
            marg[a] += mu.weight(r);
            if (j_first.emplace(b, Point{r, m}).second)
                jstates.push_back(b);
        }
        for (auto b : jstates) {
            std::optional<Rational> first;
            Point first_p;
            for (std::size_t r = 0; r < sys.run_count(); ++r) {
                LocalId a = sys.local_id(i, {r, m});
                if (marg[a] == 0)
                    throw Error("K_" + sys.agent_name(i) + sys.point_label({r, m}) + " has probability 0");
                Rational v = joint[a][b] / marg[a];
                if (!first) {
                    first = v;
                    first_p = {r, m};
                } else if (v != *first) {
                    Counterexample cx{{first_p, {r, m}, j_first[b]}, {*first, v}, {},
                                      "time " + std::to_string(m) + ": conditional probability of j-state " +
                                          sys.local_token(j, b) + " differs"};
                    return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
                }
            }
        }
    }
    return SecrecyVerdict::pass("per-time conditional probabilities agree");
}

SecrecyVerdict check_run_based_prob_secrecy(const System& sys, const RunMeasure& mu, AgentId i, AgentId j) {
    std::vector<RunSet> ri, rj;
    for (LocalId a = 0; a < sys.local_count(i); ++a)
        ri.push_back(sys.info_runs(i, a));
    for (LocalId b = 0; b < sys.local_count(j); ++b)
        rj.push_back(sys.info_runs(j, b));
    for (LocalId b = 0; b < rj.size(); ++b) {
        Point q = sys.point(sys.members(j, b).front());
        Rational first = mu.conditional(rj[b], ri[0]);
        Point first_p = sys.point(sys.members(i, 0).front());
        for (LocalId a = 1; a < ri.size(); ++a) {
            Rational v = mu.conditional(rj[b], ri[a]);
            if (v != first) {
                Point p = sys.point(sys.members(i, a).front());
                Counterexample cx{{first_p, p, q}, {first, v}, {},
                                  "mu(R(" + sys.local_token(j, b) + ") | R(" + sys.local_token(i, 0) + ")) = " +
                                      to_string(first) + " but mu(R(" + sys.local_token(j, b) + ") | R(" +
                                      sys.local_token(i, a) + ")) = " + to_string(v)};
                return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
            }
        }
    }
    return SecrecyVerdict::pass("conditional probability of every j-run-set is constant");
}

bool check_independence(const System& sys, const RunMeasure& mu, AgentId i, AgentId j) {
    for (LocalId a = 0; a < sys.local_count(i); ++a) {
        RunSet ra = sys.info_runs(i, a);
        Rational ma = mu.measure(ra);
        for (LocalId b = 0; b < sys.local_count(j); ++b) {
            RunSet rb = sys.info_runs(j, b);
            if (mu.measure(ra & rb) != ma * mu.measure(rb))
                return false;
        }
    }
    return true;
}

Rational CommonPrior::mass(const PointSet& u) const {
    Rational out = 0;
    for (auto k = u.find_first(); k != PointSet::npos; k = u.find_next(k))
        out += weights.at(k);
    return out;
}

Rational CommonPrior::conditional(const PointSet& a, const PointSet& given) const {
    Rational g = mass(given);
    if (g == 0)
        throw Error("conditioning the common prior on a null set");
    return mass(a & given) / g;
}

Rational CommonPrior::time_marginal(const System& sys, std::size_t m) const {
    Rational out = 0;
    for (std::size_t r = 0; r < sys.run_count(); ++r)
        out += weights.at(sys.index({r, m}));
    return out;
}

CommonPrior common_prior_for_sync_standard(const System& sys, const RunMeasure& mu) {
    if (!is_synchronous(sys))
        throw Error("the standard common prior is defined for synchronous systems");
    CommonPrior cp;
    cp.weights.resize(sys.point_count());
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        cp.weights[k] = mu.weight(p.run) / pow2(static_cast<unsigned>(p.time + 1));
    }
    return cp;
}

ProbabilityAssignment common_prior_assignment(const System& sys, const CommonPrior& cp) {
    return [&sys, &cp](AgentId i, Point p) {
        PointSet info = sys.info_points(i, sys.local_id(i, p));
        Rational total = cp.mass(info);
        if (total == 0)
            throw Error("common prior gives K_" + sys.agent_name(i) + sys.point_label(p) + " weight 0");
        std::vector<Rational> w(sys.point_count(), 0);
        for (auto k = info.find_first(); k != PointSet::npos; k = info.find_next(k))
            w[k] = cp.weights[k] / total;
        return PointMeasure::from_points(sys, i, p, std::move(w));
    };
}

bool cp_conditional_independence(const System& sys, const CommonPrior& cp, AgentId i, AgentId j, bool synchronous) {
    PointSet all = sys.empty_points();
    all.set();
    for (LocalId a = 0; a < sys.local_count(i); ++a) {
        PointSet ka = sys.info_points(i, a);
        std::size_t m = sys.point(sys.members(i, a).front()).time;
        for (LocalId b = 0; b < sys.local_count(j); ++b) {
            PointSet kb = sys.info_points(j, b);
            PointSet base = all;
            if (synchronous) {
                if (sys.point(sys.members(j, b).front()).time != m)
                    continue;
                base = sys.empty_points();
                for (std::size_t r = 0; r < sys.run_count(); ++r)
                    base.set(sys.index({r, m}));
            }
            if (cp.conditional(kb, ka) != cp.conditional(kb, base))
                return false;
        }
    }
    return true;
}

ProbOracleResult oracle_prob_syntactic(const System& sys, const RunMeasure& mu, AgentId i, AgentId j,
                                       ProbVariant variant, std::size_t bound) {
    if (variant == ProbVariant::sync && !is_synchronous(sys))
        throw Error("the synchronous probabilistic oracle requires a synchronous system");
    auto phi = prim(oracle_prop);
    auto target = variant == ProbVariant::sync ? phi : once(phi);
    ProbOracleResult res;
    for (const auto& s : j_local_family(sys, j, bound)) {
        InterpretedSystem is{sys, j_local_interpretation(sys, j, s.locals), &mu};
        Evaluator ev(is);
        std::vector<std::optional<std::pair<Point, Rational>>> per_time(sys.horizon() + 1);
        std::optional<std::pair<Point, Rational>> global;
        for (std::size_t k = 0; k < sys.point_count(); ++k) {
            Point p = sys.point(k);
            Rational v = ev.probability(i, *target, p);
            auto& ref = variant == ProbVariant::sync ? per_time[p.time] : global;
            if (!ref) {
                ref = std::pair{p, v};
            } else if (ref->second != v) {
                res.holds = false;
                res.first = ref->first;
                res.second = p;
                res.first_value = ref->second;
                res.second_value = v;
                for (auto l = s.locals.find_first(); l != IndexSet::npos; l = s.locals.find_next(l))
                    res.extension.push_back(sys.local_token(j, l));
                return res;
            }
        }
    }
    return res;
}

std::vector<LocalId> partition_info_sets(const System& sys, AgentId j, const std::vector<LocalId>& omega) {
    if (!has_perfect_recall(sys, j))
        throw Error("partition_info_sets requires perfect recall for agent '" + sys.agent_name(j) + "'");
    std::vector<LocalId> out;
    for (auto a : omega) {
        bool dominated = false;
        for (auto b : omega) {
            if (a == b)
                continue;
            for (std::size_t r = 0; r < sys.run_count() && !dominated; ++r) {
                // b occurs strictly before a on run r
                std::optional<std::size_t> first_b;
                for (std::size_t m = 0; m <= sys.horizon(); ++m) {
                    LocalId l = sys.local_id(j, {r, m});
                    if (l == b && !first_b)
                        first_b = m;
                    if (l == a && first_b && *first_b < m) {
                        dominated = true;
                        break;
                    }
                }
            }
            if (dominated)
                break;
        }
        if (!dominated)
            out.push_back(a);
    }
    return out;
}

IndependenceLemma independence_lemma(const RunMeasure& mu, const RunSet& y, const std::vector<RunSet>& psi,
                                     const std::vector<RunSet>& omega) {
    IndependenceLemma res{true, true, true};
    auto positive = [&](const RunSet& s) { return mu.measure(s) > 0; };
    for (const auto& ps : psi) {
        std::optional<Rational> first;
        for (const auto& w : omega) {
            if (!positive(w))
                continue;
            Rational v = mu.conditional(ps, w);
            if (!first)
                first = v;
            else if (v != *first)
                res.a = false;
        }
    }
    for (const auto& w : omega) {
        std::optional<Rational> first;
        for (const auto& ps : psi) {
            if (!positive(ps))
                continue;
            Rational v = mu.conditional(w, ps);
            if (!first)
                first = v;
            else if (v != *first)
                res.b = false;
        }
    }
    if (mu.measure(y) == 0)
        throw Error("independence lemma needs mu(Y) > 0");
    for (const auto& ps : psi) {
        if (!positive(ps))
            continue;
        for (const auto& w : omega)
            if (positive(w) && mu.conditional(ps, w) != mu.conditional(ps, y))
                res.c = false;
    }
    return res;
}

} // namespace runsec
