#pragma once

#include "runsec/spec_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace runsec {

// Deliberately broken variants of the checks, for showing that suites fail.
enum class Mutation {
    none,
    skip_recall_filter, // ignore the perfect-recall / synchrony hypotheses
    float_tolerance,    // run-based probabilistic secrecy in doubles with 1e-6 tolerance
};

Mutation parse_mutation(const std::string& name);
std::string to_string(Mutation m);

struct SuiteFailure {
    std::size_t instance = 0;
    std::string message;
    Json spec; // minimized reproduction
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t count = 0;   // instances requested
    std::size_t checked = 0; // instances meeting the hypotheses
    std::size_t skipped = 0; // generated instances outside the hypotheses
    std::size_t held = 0;    // checked instances where the headline verdict holds
    std::size_t failed = 0;  // ... and where it fails
    std::vector<SuiteFailure> failures;
    double elapsed_ms = 0;
    bool ok() const { return failures.empty(); }
};

const std::vector<std::string>& suite_names();
// Generates instances until `count` meet the suite's hypotheses (or a draw
// limit is reached). Deterministic in (name, seed, count, mutation).
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t count,
                      Mutation mutation = Mutation::none);

std::string suite_text(const SuiteResult& r);
Json suite_json(const SuiteResult& r);

} // namespace runsec
