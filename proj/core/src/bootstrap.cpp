#include "ppboot/bootstrap.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "ppboot/error.hpp"
#include "ppboot/parallel.hpp"
#include "ppboot/summation.hpp"
#include "ppboot/two_point.hpp"

namespace ppboot {

std::string_view scheme_name(ResampleScheme scheme) noexcept {
  return scheme == ResampleScheme::multinomial ? "multinomial" : "poissonized";
}

ResampleScheme parse_scheme(std::string_view name) {
  if (name == "multinomial") return ResampleScheme::multinomial;
  if (name == "poissonized" || name == "poisson") return ResampleScheme::poissonized;
  throw InvalidParameter(fmt::format("unknown resampling scheme '{}'", name));
}

std::int64_t WeightVector::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

WeightVector draw_weights(std::size_t n, ResampleScheme scheme, RngSeed seed) {
  if (n == 0) throw InvalidParameter("cannot resample an empty pattern");
  WeightVector w{std::vector<std::int64_t>(n, 0), scheme};
  auto engine = seed.engine();
  if (scheme == ResampleScheme::multinomial) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t draw = 0; draw < n; ++draw) ++w.counts[pick(engine)];
  } else {
    std::poisson_distribution<std::int64_t> count(1.0);
    for (auto& c : w.counts) c = count(engine);
  }
  return w;
}

double bootstrap_statistic(const PointPattern2& pattern, const PairFunction& f, const WeightVector& weights) {
  const std::size_t n = pattern.size();
  if (weights.size() != n) {
    throw InvalidParameter(
        fmt::format("weight vector has length {} but the pattern has {} points", weights.size(), n));
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    const auto wi = weights.counts[i];
    if (wi == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const auto wj = weights.counts[j];
      if (i == j || wj == 0) continue;
      total.add(f(pattern[i], pattern[j]) * static_cast<double>(wi * wj));
    }
  }
  return total.value();
}

BootstrapVariance bootstrap_variance(const PointPattern2& pattern, const PairFunction& f, std::size_t draws,
                                     ResampleScheme scheme, RngSeed seed, std::size_t threads) {
  if (draws < 2) throw InvalidParameter(fmt::format("need at least 2 bootstrap draws, got {}", draws));
  BootstrapVariance out;
  out.draws = draws;
  if (pattern.size() < 2) return out;

  const PairTable table(pattern, f);
  std::vector<double> theta(draws);
  parallel_for(draws, threads, [&](std::size_t k) {
    const auto w = draw_weights(pattern.size(), scheme, seed.child(k));
    theta[k] = table.weighted(w.counts);
  });

  const auto moments = sample_moments(theta);
  out.mean = moments.mean;
  out.value = moments.variance;

  CompensatedSum fourth;
  for (double t : theta) {
    const double d = t - moments.mean;
    fourth.add(d * d * d * d);
  }
  const double m4 = fourth.value() / static_cast<double>(draws);
  const double n = static_cast<double>(draws);
  const double s4 = moments.variance * moments.variance;
  const double var_of_var = (m4 - s4 * (n - 3.0) / (n - 1.0)) / n;
  out.standard_error = std::sqrt(std::max(0.0, var_of_var));
  return out;
}

ExactAlphas alpha_polynomials(std::size_t n) {
  if (n == 0) throw InvalidParameter("alpha coefficients need n >= 1");
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t cube = m * m * m;
  return ExactAlphas{
      Rational(3 * cube - 11 * m * m + 14 * m - 6, cube),
      Rational(cube - 7 * m * m + 12 * m - 6, cube),
      Rational(-4 * m * m + 10 * m - 6, cube),
  };
}

AlphaCoefficients alpha_coefficients(std::optional<std::size_t> n, ResampleScheme scheme) {
  AlphaCoefficients a;
  a.n = n;
  a.scheme = scheme;
  if (scheme == ResampleScheme::poissonized || !n) {
    a.alpha2 = 3.0;
    a.alpha3 = 1.0;
    a.alpha4 = 0.0;
    return a;
  }
  const auto exact = alpha_polynomials(*n);
  a.alpha2 = boost::rational_cast<double>(exact.alpha2);
  a.alpha3 = boost::rational_cast<double>(exact.alpha3);
  a.alpha4 = boost::rational_cast<double>(exact.alpha4);
  return a;
}

double bootstrap_variance_limit(const PointPattern2& pattern, const PairFunction& f, ResampleScheme scheme) {
  if (pattern.size() < 2) return 0.0;
  const auto sums = distinct_index_sums(pattern, f);
  const auto a = alpha_coefficients(pattern.size(), scheme);
  CompensatedSum total;
  total.add(a.alpha4 * sums.quadruples);
  total.add(4.0 * a.alpha3 * sums.triples);
  total.add(2.0 * a.alpha2 * sums.squares);
  return total.value();
}

}  // namespace ppboot
