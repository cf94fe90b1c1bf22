#pragma once

#include "runsec/kernel.hpp"
#include "runsec/verdict.hpp"

#include <string>
#include <vector>

namespace runsec {

// Counterexamples are the first violating pair (p, q) in (run, time) order,
// where p is i's point and q is j's.
SecrecyVerdict check_total_secrecy(const System& sys, AgentId i, AgentId j);
SecrecyVerdict check_C_secrecy(const System& sys, AgentId i, AgentId j, const Allowability& c);
SecrecyVerdict check_synchronous_secrecy(const System& sys, AgentId i, AgentId j);
SecrecyVerdict check_run_based_secrecy(const System& sys, AgentId i, AgentId j);

// Secrecy of f(j's state) via the derived agent j_f.
SecrecyVerdict check_f_secrecy(const System& sys, AgentId i, const InfoFunction& f, const Allowability& c);
SecrecyVerdict check_f_run_based_secrecy(const System& sys, AgentId i, const InfoFunction& f);

// Worlds are indices 0..n-1; g[w], h[w] are the observed values.
// Counterexample indices are the world pair (w, w').
SecrecyVerdict check_nondeducibility(const std::vector<std::string>& g, const std::vector<std::string>& h);

} // namespace runsec
