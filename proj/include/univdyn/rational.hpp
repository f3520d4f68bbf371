#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace univdyn {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p", "p/q" (and tolerates surrounding blanks).
Rational parse_rational(std::string_view text);

// Canonical "p/q" text; integers are written without a denominator.
std::string to_string(const Rational& q);

Rational abs(const Rational& q);

// std::min/max do not accept gmp expression templates.
inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

// 2^{-n} as an exact rational.
Rational pow2_neg(std::size_t n);

Rational pow(const Rational& base, std::size_t exponent);

// Fractional part in [0, 1).
Rational frac(const Rational& q);

// Rational matrix, row-major.
using Matrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

// Accepts "[[a,b],[c,d]]" or "a b; c d".
Matrix parse_matrix(std::string_view text);
std::string to_string(const Matrix& m);
std::string to_string(const RationalVector& v);

}  // namespace univdyn
