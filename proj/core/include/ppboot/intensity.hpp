#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppboot/geometry.hpp"
#include "ppboot/rng.hpp"

namespace ppboot {

/// Rectangular-kernel estimate lambda_hat(x) = p(x) / (2h), p(x) = #points in [x - h, x + h].
struct IntensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::int64_t> counts;
  double h = 0.0;
};

IntensityEstimate kernel_intensity_estimate(const PointPattern1& pattern, double h, std::span<const double> grid);

/// Inputs of the resampling quantile t*: observed count p, bandwidth h, level alpha.
struct TStarQuery {
  std::int64_t p = 0;
  double h = 0.0;
  double alpha = 0.05;

  /// a(t) = p + h t^2
  double a(double t) const noexcept { return static_cast<double>(p) + h * t * t; }
  /// b(t) = t sqrt(2 h p + h^2 t^2)
  double b(double t) const noexcept;
};

/// P*{a(t) - b(t) <= p* <= a(t) + b(t)} for p* ~ Poisson(p), evaluated as
/// F(floor(a + b)) - F(ceil(a - b) - 1). Endpoints within 1e-9 of an integer are
/// snapped to it so that boundary points count as inside.
double resample_coverage(const TStarQuery& query, double t);

struct TStarResult {
  double t = 0.0;
  double coverage = 0.0;                // P{|T| <= t}
  std::optional<double> previous_t;     // the largest smaller jump point of the coverage, if any
  double previous_coverage = 0.0;       // P{|T| <= previous_t}
};

/// Smallest t >= 0 with P*{|T*| <= t} >= 1 - alpha, where
/// T* = (p* - p) / sqrt(2 h p*), p* ~ Poisson(p), and |T*| = +inf when p* = 0.
///
/// The coverage is a right-continuous step function whose jumps sit at
/// t_k = |k - p| / sqrt(2 h k); they are visited in increasing order.
///
/// Throws DegenerateCount for p = 0 and UnattainableLevel when no finite t
/// reaches the level. Because p* = 0 is never covered, the latter happens
/// whenever alpha < exp(-p) (always for alpha = 0).
TStarResult t_star_closed_form(const TStarQuery& query);

struct TStarMonteCarlo {
  double t = 0.0;  // empirical (1 - alpha) quantile of |T*|; +inf if more than alpha N draws have p* = 0
  std::size_t draws = 0;
  std::size_t zero_draws = 0;  // draws with p* = 0
};

/// Resamples p* = sum_{i=1}^p w(i) with w(i) i.i.d. Poisson(1), N times.
TStarMonteCarlo t_star_monte_carlo(std::int64_t p, double h, double alpha, std::size_t draws, RngSeed seed,
                                   std::size_t threads = 1);

/// Range of t the Monte Carlo quantile should fall in with about z-sigma confidence:
/// closed-form t* at levels alpha +- z sqrt(alpha (1 - alpha) / N).
struct QuantileBand {
  double lo = 0.0;
  double hi = 0.0;
};
QuantileBand t_star_quantile_band(std::int64_t p, double h, double alpha, std::size_t draws, double z = 3.0);

/// Exact t_alpha for a known intensity: 2 h lambda_hat ~ Poisson(m), m = \int_{x-h}^{x+h} lambda,
/// with T = (lambda_hat - m / (2h)) / sqrt(lambda_hat). The integral is restricted to `domain`.
TStarResult t_alpha_oracle(const IntensityFunction& intensity, const Interval1& domain, double x, double h,
                           double alpha);

/// Garwood interval for a Poisson mean from one observed count.
struct PoissonInterval {
  double lo = 0.0;
  double hi = 0.0;
};
PoissonInterval garwood_interval(std::int64_t count, double alpha);

enum class BandMethod { bootstrap_mc, bootstrap_closed_form, exact_poisson, oracle_true_t };

std::string_view band_method_name(BandMethod method) noexcept;
BandMethod parse_band_method(std::string_view name);

enum BandFlag : unsigned {
  band_ok = 0,
  band_zero_count = 1u << 0,   // p(x) = 0, exact band substituted
  band_edge = 1u << 1,         // [x - h, x + h] sticks out of the interval
  band_unattainable = 1u << 2, // no finite t* for this count, exact band substituted
};

std::string band_flag_text(unsigned flags);

struct BandOptions {
  BandMethod method = BandMethod::bootstrap_closed_form;
  std::size_t mc_draws = 10'000;  // bootstrap_mc only
  RngSeed seed{};                  // bootstrap_mc only
  std::size_t threads = 1;
  std::optional<IntensityFunction> intensity;  // oracle_true_t only
};

struct ConfidenceBand {
  std::vector<double> grid;
  std::vector<double> lambda_hat;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> t_star;  // NaN for exact_poisson and fallback points
  std::vector<unsigned> flags;
  double level = 0.95;
  double h = 0.0;
  BandMethod method = BandMethod::bootstrap_closed_form;
};

/// Pointwise band for lambda(x) on `grid`. Resampling methods give
/// [lambda_hat - t sqrt(lambda_hat), lambda_hat + t sqrt(lambda_hat)] with the lower
/// end clipped at 0; exact_poisson gives [L(p), U(p)] / (2h) from the Garwood interval.
ConfidenceBand confidence_band(const PointPattern1& pattern, double h, double alpha, std::span<const double> grid,
                               const BandOptions& options);

/// `steps` midpoints of equal cells spanning the interval.
std::vector<double> midpoint_grid(const Interval1& interval, std::size_t steps);

struct CoverageTable {
  std::vector<double> grid;
  std::vector<double> coverage_true_lambda;    // fraction of bands containing lambda(x)
  std::vector<double> coverage_e_lambda_hat;   // fraction containing E lambda_hat(x)
  std::vector<double> se_true_lambda;
  std::vector<double> se_e_lambda_hat;
  std::vector<bool> edge;
  std::size_t reps = 0;
};

/// Replication `r` simulates with seed.child(r).child(0) and resamples with seed.child(r).child(1).
CoverageTable coverage_experiment(const IntensityFunction& intensity, const Interval1& interval, double h,
                                  double alpha, const BandOptions& options, std::size_t reps,
                                  std::span<const double> grid, RngSeed seed, std::size_t threads = 1);

}  // namespace ppboot
