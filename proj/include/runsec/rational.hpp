#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace runsec {

using Rational = mpq_class;

// Accepts "p/q", "p" and "-p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& q);

inline Rational pow2(unsigned k) {
    mpz_class z = 1;
    z <<= k;
    return Rational(z);
}

} // namespace runsec
