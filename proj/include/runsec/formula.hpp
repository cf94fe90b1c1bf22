#pragma once

#include "runsec/rational.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace runsec {

enum class Cmp { eq, le, lt, ge, gt };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { prim, negation, conjunction, knows, possible, once, pr };
    Kind kind = Kind::prim;
    std::string name;  // prim: proposition; K/P/pr: agent
    FormulaPtr left, right;
    Cmp cmp = Cmp::eq;
    Rational bound;
};

FormulaPtr prim(std::string name);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr knows(std::string agent, FormulaPtr f);
FormulaPtr possible(std::string agent, FormulaPtr f);
FormulaPtr once(FormulaPtr f);
// q must lie in [0,1].
FormulaPtr pr(std::string agent, FormulaPtr f, Cmp cmp, Rational q);

// Prefix syntax:
//   p | (not f) | (and f g ...) | (or f g ...) | (K i f) | (P i f)
//   | (once f) | (pr i f op q)   with op in = <= < >= >
FormulaPtr parse_formula(std::string_view text);
std::string to_string(const Formula& f);
bool compare(const Rational& lhs, Cmp cmp, const Rational& rhs);

} // namespace runsec
