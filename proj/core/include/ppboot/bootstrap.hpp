#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "ppboot/geometry.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/rng.hpp"

namespace ppboot {

using Rational = boost::rational<std::int64_t>;

/// How a pseudo sample is drawn from the n observed points.
///  - multinomial: n draws with replacement, uniform over the points;
///  - poissonized: occurrence counts i.i.d. Poisson(1), so the resample size is Poisson(n).
enum class ResampleScheme { multinomial, poissonized };

std::string_view scheme_name(ResampleScheme scheme) noexcept;
ResampleScheme parse_scheme(std::string_view name);

/// Occurrence counts w(i) of each observed point in one pseudo sample.
struct WeightVector {
  std::vector<std::int64_t> counts;
  ResampleScheme scheme = ResampleScheme::multinomial;

  std::size_t size() const noexcept { return counts.size(); }
  std::int64_t total() const noexcept;
};

/// Moment differences scaling the quadruple, triple and pair sums in the N -> infinity
/// bootstrap variance: alpha4 Q4 + 4 alpha3 T3 + 2 alpha2 R.
struct AlphaCoefficients {
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;
  std::optional<std::size_t> n;  // nullopt stands for n = infinity
  ResampleScheme scheme = ResampleScheme::multinomial;
};

struct ExactAlphas {
  Rational alpha2, alpha3, alpha4;
};

WeightVector draw_weights(std::size_t n, ResampleScheme scheme, RngSeed seed);

/// theta*_k = sum_{i != j} f(x_i, x_j) w(i) w(j). Evaluates f directly (O(n^2)).
double bootstrap_statistic(const PointPattern2& pattern, const PairFunction& f, const WeightVector& weights);

struct BootstrapVariance {
  double value = 0.0;           // v*_N, the sample variance of theta*_1..theta*_N
  double mean = 0.0;            // mean of theta*_k
  double standard_error = 0.0;  // estimated standard error of `value`
  std::size_t draws = 0;
};

/// Draw k uses substream seed.child(k); the result does not depend on `threads`.
BootstrapVariance bootstrap_variance(const PointPattern2& pattern, const PairFunction& f, std::size_t draws,
                                     ResampleScheme scheme, RngSeed seed, std::size_t threads = 1);

/// Closed-form alphas as exact rationals:
///   alpha4 = (-4n^2 + 10n - 6) / n^3
///   alpha3 = (n^3 - 7n^2 + 12n - 6) / n^3
///   alpha2 = (3n^3 - 11n^2 + 14n - 6) / n^3
ExactAlphas alpha_polynomials(std::size_t n);

/// Poissonized scheme or n = nullopt (infinity) gives (alpha2, alpha3, alpha4) = (3, 1, 0).
AlphaCoefficients alpha_coefficients(std::optional<std::size_t> n, ResampleScheme scheme);

/// lim_{N -> inf} v*_N, computed from the distinct-index sums without simulation.
double bootstrap_variance_limit(const PointPattern2& pattern, const PairFunction& f, ResampleScheme scheme);

}  // namespace ppboot
