#pragma once

#include "runsec/kernel.hpp"
#include "runsec/rational.hpp"
#include "runsec/verdict.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace runsec {

// Probability on runs, indexed by run position.
class RunMeasure {
public:
    RunMeasure() = default;
    // Weights must be nonnegative and sum to 1.
    explicit RunMeasure(std::vector<Rational> weights);
    static RunMeasure uniform(std::size_t runs);

    std::size_t size() const { return w_.size(); }
    const Rational& weight(std::size_t r) const { return w_.at(r); }
    const std::vector<Rational>& weights() const { return w_; }
    Rational measure(const RunSet& s) const;
    // mu(a | given); throws Error when mu(given) = 0.
    Rational conditional(const RunSet& a, const RunSet& given) const;

private:
    std::vector<Rational> w_;
};

// Size match plus the standing assumption mu(R(K_i(p))) > 0 for all i, p.
void validate_run_measure(const RunMeasure& mu, const System& sys);

// mu_{p,i}: either a run measure conditioned on the runs through K_i(p), whose
// measurable sets are the run-generated subsets of K_i(p), or explicit point weights.
class PointMeasure {
public:
    static PointMeasure from_runs(const System& sys, const RunMeasure& mu, AgentId i, Point p);
    static PointMeasure from_points(const System& sys, AgentId i, Point p, std::vector<Rational> point_weights);

    AgentId agent() const { return agent_; }
    Point at() const { return at_; }
    const PointSet& support() const { return info_; }
    bool run_generated() const { return from_runs_; }

    // Measure of u ∩ K_i(p); nullopt when that set is not measurable.
    std::optional<Rational> measure(const PointSet& u) const;
    // Throws Error when not measurable.
    Rational measure_or_throw(const PointSet& u) const;
    bool is_measurable(const PointSet& u) const;
    // Per-point weights, available when every point of K_i(p) is measurable.
    std::optional<std::vector<std::pair<Point, Rational>>> point_weights() const;

private:
    const System* sys_ = nullptr;
    AgentId agent_ = 0;
    Point at_;
    PointSet info_;
    bool from_runs_ = true;
    std::vector<Rational> run_cond_;   // by run, when from_runs_
    std::vector<Rational> point_w_;    // by point index, otherwise
};

using ProbabilityAssignment = std::function<PointMeasure(AgentId, Point)>;

PointMeasure ht_point_measure(const System& sys, const RunMeasure& mu, AgentId i, Point p);
ProbabilityAssignment ht_assignment(const System& sys, const RunMeasure& mu);

SecrecyVerdict check_prob_total_secrecy(const System& sys, const ProbabilityAssignment& pr, AgentId i, AgentId j);
SecrecyVerdict check_prob_sync_secrecy(const System& sys, const RunMeasure& mu, AgentId i, AgentId j);
SecrecyVerdict check_run_based_prob_secrecy(const System& sys, const RunMeasure& mu, AgentId i, AgentId j);
bool check_independence(const System& sys, const RunMeasure& mu, AgentId i, AgentId j);

// Unnormalized: weight mu(r)/2^(m+1), truncated at the horizon.
struct CommonPrior {
    std::vector<Rational> weights; // by point index
    Rational mass(const PointSet& u) const;
    Rational conditional(const PointSet& a, const PointSet& given) const;
    Rational time_marginal(const System& sys, std::size_t m) const;
};

CommonPrior common_prior_for_sync_standard(const System& sys, const RunMeasure& mu);
ProbabilityAssignment common_prior_assignment(const System& sys, const CommonPrior& cp);
// Synchronous form: mu_cp(K_j(r',m) | K_i(r,m)) = mu_cp(K_j(r',m) | PT(m)).
// Total form: mu_cp(K_j(q) | K_i(p)) = mu_cp(K_j(q)) / mu_cp(all).
bool cp_conditional_independence(const System& sys, const CommonPrior& cp, AgentId i, AgentId j, bool synchronous);

enum class ProbVariant { sync, run_based };

struct ProbOracleResult {
    bool holds = true;
    std::optional<Point> first, second;
    Rational first_value, second_value;
    std::vector<std::string> extension; // j-local states of the violating formula
};

// Enumerates j-local formulas (unions of j-information sets) and checks that
// Pr_i(phi) is constant per time (sync) or Pr_i(once phi) is constant (run_based).
ProbOracleResult oracle_prob_syntactic(const System& sys, const RunMeasure& mu, AgentId i, AgentId j,
                                       ProbVariant variant, std::size_t bound = 16);

// Undominated subfamily of omega (local-state ids of j). Throws Error unless
// j has perfect recall.
std::vector<LocalId> partition_info_sets(const System& sys, AgentId j, const std::vector<LocalId>& omega);

struct IndependenceLemma {
    bool a = false; // mu(psi | w) constant over positive w
    bool b = false; // mu(w | psi) constant over positive psi
    bool c = false; // mu(psi | w) = mu(psi | Y)
};

IndependenceLemma independence_lemma(const RunMeasure& mu, const RunSet& y, const std::vector<RunSet>& psi,
                                     const std::vector<RunSet>& omega);

} // namespace runsec
