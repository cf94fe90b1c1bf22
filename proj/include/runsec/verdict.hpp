#pragma once

#include "runsec/kernel.hpp"
#include "runsec/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace runsec {

enum class Failure { none, empty_intersection, unequal, non_measurable, precondition };

std::string to_string(Failure f);

struct Counterexample {
    std::vector<Point> points;
    std::vector<Rational> values;
    std::vector<std::size_t> indices; // worlds or traces, when not points
    std::string detail;
};

struct SecrecyVerdict {
    bool holds = true;
    Failure failure = Failure::none;
    std::optional<Counterexample> counterexample;
    std::string note;

    static SecrecyVerdict pass(std::string note = {}) { return {true, Failure::none, std::nullopt, std::move(note)}; }
    static SecrecyVerdict fail(Failure f, Counterexample cx, std::string note = {}) {
        return {false, f, std::move(cx), std::move(note)};
    }
};

} // namespace runsec
