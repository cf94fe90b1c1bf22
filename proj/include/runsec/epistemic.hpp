#pragma once

#include "runsec/formula.hpp"
#include "runsec/kernel.hpp"
#include "runsec/prob.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace runsec {

// True at a global state when the named component (an agent, or the
// environment when agent is empty) is one of the tokens.
struct StatePredicate {
    std::optional<std::string> agent;
    std::set<std::string> tokens;
};

// Proposition -> disjunction of state predicates.
using Interpretation = std::map<std::string, std::vector<StatePredicate>>;

struct InterpretedSystem {
    const System& sys;
    Interpretation pi;
    const RunMeasure* mu = nullptr; // needed by pr formulas
};

class Evaluator {
public:
    explicit Evaluator(const InterpretedSystem& is) : is_(is) {}

    PointSet extension(const Formula& f);
    bool holds(Point p, const Formula& f) { return extension(f).test(is_.sys.index(p)); }
    // mu_{p,i}(ext(f) ∩ K_i(p)) under HT conditioning.
    Rational probability(AgentId i, const Formula& f, Point p);

private:
    const InterpretedSystem& is_;
    std::unordered_map<std::string, PointSet> memo_; // keyed by canonical text

    PointSet compute(const Formula& f);
};

bool eval(const InterpretedSystem& is, Point p, const Formula& f);
bool is_j_local(const InterpretedSystem& is, AgentId j, const Formula& f);
// Extension is a union of j-information sets.
bool is_union_of_info_sets(const System& sys, AgentId j, const PointSet& s);

struct JLocalSet {
    IndexSet locals; // chosen j-information sets, by local id
    PointSet points;
};

// All 2^n unions of j's n information sets. Throws Error when n > bound.
std::vector<JLocalSet> j_local_family(const System& sys, AgentId j, std::size_t bound = 16);

// The proposition name used by the oracles for a j-local extension.
inline const char* oracle_prop = "phi";
Interpretation j_local_interpretation(const System& sys, AgentId j, const IndexSet& locals);

bool oracle_C_secrecy(const System& sys, AgentId i, AgentId j, const Allowability& c, std::size_t bound = 16);
bool oracle_run_based_secrecy(const System& sys, AgentId i, AgentId j, std::size_t bound = 16);

} // namespace runsec
