#pragma once

#include "runsec/adversarial.hpp"
#include "runsec/kernel.hpp"
#include "runsec/rational.hpp"
#include "runsec/verdict.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace runsec {

// ---- synchronous traces ----

struct SyncTuple {
    std::string li, hi, lo, ho;
    auto operator<=>(const SyncTuple&) const = default;
};

using SyncTrace = std::vector<SyncTuple>;

struct SyncTraceSystem {
    std::vector<std::string> LI, HI, LO, HO;
    std::vector<SyncTrace> traces;
};

// Values are [A-Za-z0-9_]+; traces share one length and draw from the
// alphabets; duplicates are rejected.
void validate(const SyncTraceSystem& s);
std::size_t trace_length(const SyncTraceSystem& s);

// Projection tokens of the length-k prefix, e.g. "<0/1,1/0>".
std::string low_view(const SyncTrace& t, std::size_t k);
std::string high_view(const SyncTrace& t, std::size_t k);
std::string high_input_view(const SyncTrace& t, std::size_t k);

// Agents "L" and "H"; one run per trace; horizon defaults to the trace length
// and may be shorter (observations then stop before the trace ends).
System runs_from_sync(const SyncTraceSystem& s, std::optional<std::size_t> horizon = std::nullopt);
// f_hi on agent H of runs_from_sync(s, horizon).
InfoFunction high_input_function(const System& sys);

// Counterexample indices are the trace pair (tau, tau').
SecrecyVerdict check_separability(const SyncTraceSystem& s);
SecrecyVerdict check_gni_sync(const SyncTraceSystem& s);

// Membership is decided by horizon-M prefixes: every trace over the alphabets
// whose M-prefix starts some trace of s is itself in s.
bool is_horizon_complete(const SyncTraceSystem& s, std::size_t horizon);

// ---- asynchronous traces ----

using Event = std::string;
using AsyncTrace = std::vector<Event>;

struct AsyncTraceSystem {
    std::vector<Event> low;          // L events
    std::vector<Event> high_inputs;  // HI
    std::vector<Event> high_outputs; // HO
    std::vector<AsyncTrace> traces;  // the empty trace is implicit
};

// Disjoint alphabets, known events, prefix closure.
void validate(const AsyncTraceSystem& s);
bool is_low(const AsyncTraceSystem& s, const Event& e);
bool is_high_input(const AsyncTraceSystem& s, const Event& e);
bool is_high(const AsyncTraceSystem& s, const Event& e);

std::string event_token(const AsyncTrace& t);

// Maximal chains among traces of length <= M (default: the longest trace).
// Local states are the agent's own event subsequence.
System runs_from_async(const AsyncTraceSystem& s, std::optional<std::size_t> horizon = std::nullopt,
                       std::size_t chain_bound = 100000);
InfoFunction async_high_input_function(const AsyncTraceSystem& s, const System& sys);

SecrecyVerdict check_async_separability(const AsyncTraceSystem& s);
SecrecyVerdict check_async_gni(const AsyncTraceSystem& s);
bool is_closed_under_interleavings(const AsyncTraceSystem& s);

// Adds every interleaving of each trace's low and high parts, then prefixes,
// until nothing changes.
AsyncTraceSystem close_under_interleavings(AsyncTraceSystem s);

// Calls out(t) for each interleaving of a and b until out returns false.
void for_each_interleaving(const AsyncTrace& a, const AsyncTrace& b,
                           const std::function<bool(const AsyncTrace&)>& out);

// ---- strategies ----

// Deterministic H protocol: H-view prefix token -> next high input.
struct Protocol {
    std::string name;
    std::map<std::string, std::string> table;
};

bool is_consistent(const Protocol& p, const SyncTrace& t);
// All deterministic strategies, as decision trees over reachable H-views.
std::vector<Protocol> enumerate_strategies(const SyncTraceSystem& s, std::size_t bound = 100000);

// Runs are (strategy, consistent trace) pairs; H's state carries the
// strategy name, so f_strat is a function of H's local state.
System strategy_annotated_system(const SyncTraceSystem& s, const std::vector<Protocol>& strategies);

struct NosReport {
    SecrecyVerdict verdict;     // the trace definition
    SecrecyVerdict reduction;   // synchronous f_strat-secrecy on the annotated system
    bool covered = false;       // every trace follows some supplied strategy
    bool agree() const { return verdict.holds == reduction.holds; }
};

// Throws Error when a strategy is consistent with no trace.
NosReport nos_report(const SyncTraceSystem& s, const std::vector<Protocol>& strategies);
SecrecyVerdict check_nos(const SyncTraceSystem& s, const std::vector<Protocol>& strategies);

// ---- probabilistic protocols ----

using Dist = std::map<std::string, Rational>;
using OutputDist = std::map<std::pair<std::string, std::string>, Rational>; // (l_o, h_o)
using View = std::vector<std::pair<std::string, std::string>>;            // (input, output)

struct ProbProtocol {
    std::string name;
    std::function<Dist(const View&)> next;
};

// O sees the prefix and the inputs of the current step.
using OutputModel = std::function<OutputDist(const SyncTrace&, const std::string& li, const std::string& hi)>;

struct ProbProtocolSystem {
    std::vector<std::string> LI, HI, LO, HO;
    std::vector<ProbProtocol> low, high;
    OutputModel output;
    std::size_t horizon = 1;
};

// Agents "L" and "H"; INIT choices are the protocol names; zero-probability
// traces are omitted. Throws Error on a malformed distribution row.
AdversarialSystem build_gray_syverson(const ProbProtocolSystem& pps);
// Trace of each run of build_gray_syverson(pps), in run order.
std::vector<SyncTrace> gray_syverson_traces(const ProbProtocolSystem& pps);

struct PniReport {
    SecrecyVerdict pni;
    bool no_evidence = false;
    bool generalized_run_based = false;
    bool generalized_sync = false;
    bool agree() const {
        return pni.holds == no_evidence && no_evidence == generalized_run_based &&
               generalized_run_based == generalized_sync;
    }
};

SecrecyVerdict check_pni(const AdversarialSystem& gs);
SecrecyVerdict check_pni(const ProbProtocolSystem& pps);
PniReport pni_report(const ProbProtocolSystem& pps, const GeneralizedOptions& opt = {});

} // namespace runsec
