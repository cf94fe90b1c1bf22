#pragma once

#include "runsec/adversarial.hpp"
#include "runsec/epistemic.hpp"
#include "runsec/kernel.hpp"
#include "runsec/prob.hpp"
#include "runsec/traces.hpp"
#include "runsec/verdict.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace runsec {

using Json = nlohmann::ordered_json;

struct Expectation {
    std::string check;
    Json params;                     // the whole expect entry
    bool holds = true;
    std::vector<Rational> values;    // optional exact counterexample values
};

// Everything a spec document can describe. `system` is the run system the
// checks act on: explicit runs, or one derived from a trace block.
struct Loaded {
    std::string name;
    std::optional<System> system;
    std::optional<RunMeasure> measure;
    std::vector<RunMeasure> measures; // extra measures for the measure-vector domain
    std::map<std::string, InfoFunction> info_functions;
    std::map<std::string, Allowability> allowability;
    Interpretation interpretation;
    std::optional<AdversarialSystem> adversarial;
    std::optional<SyncTraceSystem> sync_traces;
    std::optional<AsyncTraceSystem> async_traces;
    std::optional<ProbProtocolSystem> gray_syverson;
    std::optional<std::vector<Protocol>> strategies; // nullopt: enumerate all
    std::vector<Expectation> expect;
    Json source;
};

// Errors carry a JSON-pointer style location.
Loaded load(const std::string& path);
Loaded load_json(const Json& doc);

// Serializes explicit runs, measures and annotations; trace and protocol
// blocks are copied from the source document.
Json emit(const Loaded& l);
Json system_json(const System& sys, const RunMeasure* mu = nullptr);

Point parse_point(const System& sys, const std::string& text);
std::string point_text(const System& sys, Point p);

struct CheckRecord {
    std::string check;
    Json params;
    bool holds = true;
    std::optional<bool> expected;
    bool matches = true;
    std::string failure;
    std::optional<Counterexample> counterexample;
    std::optional<bool> reverified; // set for point counterexamples of possibilistic checks
    std::string note;
    double elapsed_ms = 0;
};

struct Report {
    std::string spec;
    std::vector<CheckRecord> records;
    bool all_match() const;
};

const std::vector<std::string>& check_names();
// Runs one check described by an expect-style entry; throws Error on an
// unknown name or bad parameters.
CheckRecord run_check(const Loaded& l, const Json& entry);
// Runs the expect block, optionally restricted to the named checks.
Report run_checks(const Loaded& l, const std::vector<std::string>& only = {});

std::string report_text(const Report& r);
Json report_json(const Report& r);

} // namespace runsec
