#pragma once

#include <cstddef>
#include <span>

#include "ppboot/bootstrap.hpp"

namespace ppboot {

/// Largest n for which exhaustive enumeration of the n^n assignments is offered.
inline constexpr std::size_t max_oracle_n = 8;

/// Exact E prod_c w(c)^{exponents[c]} for multinomial(n; 1/n, ..., 1/n) occurrence
/// counts, obtained by enumerating all n^n equally likely ways the n draws can
/// land on the n points. Categories with exponent 0 are ignored.
///
/// Throws UndefinedMoment if more categories carry a positive exponent than n.
Rational multinomial_moment_oracle(std::size_t n, std::span<const unsigned> exponents);

/// alpha2, alpha3, alpha4 assembled from enumerated moments:
///   alpha4 = E w1 w2 w3 w4 - (E w1 w2)^2
///   alpha3 = E w1^2 w2 w3  - (E w1 w2)^2
///   alpha2 = E (w1 w2)^2   - (E w1 w2)^2
/// Requires 4 <= n <= max_oracle_n.
ExactAlphas enumerated_alphas(std::size_t n);

}  // namespace ppboot
