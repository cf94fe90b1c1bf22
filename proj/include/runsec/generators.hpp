#pragma once

#include "runsec/kernel.hpp"
#include "runsec/prob.hpp"
#include "runsec/spec_io.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace runsec {

// Small random systems with two agents "1" and "2".
struct SystemShape {
    std::size_t max_runs = 5;
    std::size_t max_horizon = 3;
    std::size_t max_symbols = 3;
    std::size_t max_locals = 12; // per agent; larger draws are redrawn
    bool synchronous = true;
    std::array<bool, 2> recall{true, true};
    // Runs are all pairs of one behaviour per agent (at most max_runs + 1).
    bool product = false;
};

struct RandomSystem {
    System sys;
    // For product systems: the behaviour index of each agent on each run.
    std::vector<std::array<std::size_t, 2>> factors;
    bool complete_product = false;
};

RandomSystem random_system(std::mt19937_64& rng, const SystemShape& shape);

// Positive weights 1..9, normalized.
RunMeasure random_measure(std::mt19937_64& rng, std::size_t runs);
// Product of random per-agent marginals; needs a complete product system.
RunMeasure product_measure(std::mt19937_64& rng, const RandomSystem& rs);
// Moves 1/10^9 of mass between two runs whose behaviours differ for both agents
// (any two runs when there is no such pair).
RunMeasure near_miss(std::mt19937_64& rng, const RandomSystem& rs, const RunMeasure& mu);

// Two-agent INIT adversarial spec (values, choices, cell measures) over a
// synchronous perfect-recall system. With no_evidence, agent "1" gets no
// evidence about the other agent's choice by construction.
Json random_init_spec(std::mt19937_64& rng, bool no_evidence);

enum class SyncTraceKind { random, product, complete };
// "sync_traces" spec. complete: horizon-complete at a run horizon below the
// trace length.
Json random_sync_trace_spec(std::mt19937_64& rng, SyncTraceKind kind);

enum class AsyncTraceKind { random, closed, shuffle };
Json random_async_trace_spec(std::mt19937_64& rng, AsyncTraceKind kind);

// "gray_syverson" spec. blind: low outputs ignore high inputs and high
// outputs are an independent coin.
Json random_pps_spec(std::mt19937_64& rng, bool blind);

inline std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t k) { return seed * 1000003u + k; }

} // namespace runsec
