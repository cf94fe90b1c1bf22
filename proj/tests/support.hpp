#pragma once

#include "runsec/fixtures.hpp"
#include "runsec/spec_io.hpp"

#include <string>
#include <utility>
#include <vector>

namespace testing {

using Rows = std::vector<std::vector<std::pair<std::string, std::string>>>;

// Two agents "1" and "2"; run ids r1, r2, ...
inline runsec::System two_agent(const Rows& rows, std::size_t horizon,
                                runsec::TimeMode mode = runsec::TimeMode::synchronous) {
    std::vector<runsec::Run> runs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        runsec::Run run{"r" + std::to_string(r + 1), {}};
        for (const auto& [a, b] : rows[r])
            run.states.push_back({"", {a, b}});
        runs.push_back(std::move(run));
    }
    return runsec::System({"1", "2"}, std::move(runs), horizon, mode);
}

inline runsec::Loaded fixture(const std::string& name, const std::vector<std::string>& params = {}) {
    return runsec::load_json(runsec::fixture(name, params));
}

inline runsec::Rational q(const char* text) { return runsec::parse_rational(text); }

} // namespace testing
