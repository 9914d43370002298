#include "ppboot/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <fmt/format.h>

#include "ppboot/error.hpp"
#include "ppboot/parallel.hpp"

namespace ppboot {
namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidParameter(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  if (alpha == 0.0) {
    throw UnattainableLevel("alpha = 0 asks for coverage 1, which no finite t reaches");
  }
}

void check_bandwidth(double h) {
  if (!std::isfinite(h) || h <= 0.0) throw InvalidParameter(fmt::format("bandwidth h must be positive, got {}", h));
}

// Cumulative distribution of Poisson(mean) with F(k) = 0 for k < 0.
class PoissonCdf {
 public:
  explicit PoissonCdf(double mean) : dist_(mean) {}
  double operator()(std::int64_t k) const {
    if (k < 0) return 0.0;
    return boost::math::cdf(dist_, static_cast<double>(k));
  }

 private:
  boost::math::poisson_distribution<double> dist_;
};

// Smallest t with P{|K - mean| <= t sqrt(2 h K)} >= 1 - alpha for K ~ Poisson(mean), K = 0 never counted.
//
// Jump points t_k^2 = (k - mean)^2 / (2 h k) increase as k moves away from the
// mean on either side, so the two sides are merged like sorted lists. The covered
// set is always a run of consecutive integers [lo, hi].
TStarResult solve_step_quantile(double mean, double h, double alpha) {
  check_bandwidth(h);
  check_alpha(alpha);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DegenerateCount(fmt::format("Poisson mean must be positive, got {}", mean));
  }

  const PoissonCdf cdf(mean);
  const auto coverage = [&](std::int64_t lo, std::int64_t hi) {
    return hi < lo ? 0.0 : cdf(hi) - cdf(lo - 1);
  };
  // Same expression as the resampled |T*|, so both paths produce identical jump values.
  const auto jump = [&](std::int64_t k) {
    return std::abs(static_cast<double>(k) - mean) / std::sqrt(2.0 * h * static_cast<double>(k));
  };
  // Exact comparison of jump_sq(k1) against jump_sq(k2).
  const auto compare = [&](std::int64_t k1, std::int64_t k2) {
    const long double m = mean;
    const long double d1 = static_cast<long double>(k1) - m;
    const long double d2 = static_cast<long double>(k2) - m;
    const long double lhs = d1 * d1 * static_cast<long double>(k2);
    const long double rhs = d2 * d2 * static_cast<long double>(k1);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  };

  std::int64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(mean)));
  std::int64_t hi = lo - 1;
  TStarResult result;

  if (alpha >= 1.0) {
    const auto k = static_cast<std::int64_t>(mean);
    result.t = 0.0;
    result.coverage = static_cast<double>(k) == mean ? coverage(k, k) : 0.0;
    return result;
  }

  const double target = 1.0 - alpha;
  if (1.0 - cdf(0) < target) {
    throw UnattainableLevel(fmt::format(
        "coverage {} is unreachable: P(K = 0) = {} is never covered for Poisson mean {}", target, cdf(0), mean));
  }

  const auto limit = static_cast<std::int64_t>(mean + 60.0 * std::sqrt(mean) + 200.0);
  std::optional<double> previous;
  double previous_coverage = 0.0;
  while (hi < limit) {
    const std::int64_t up = hi + 1;
    const std::int64_t down = lo - 1;
    int order = down >= 1 ? compare(up, down) : -1;
    double t = 0.0;
    if (order <= 0) {
      hi = up;
      t = jump(up);
    }
    if (order >= 0) {
      lo = down;
      t = jump(down);
    }
    const double cov = coverage(lo, hi);
    if (cov >= target) {
      result.t = t;
      result.coverage = cov;
      result.previous_t = previous;
      result.previous_coverage = previous_coverage;
      return result;
    }
    previous = t;
    previous_coverage = cov;
  }
  throw UnattainableLevel(fmt::format("coverage {} not reached for Poisson mean {}", target, mean));
}

double snap_floor(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : std::floor(v);
}

double snap_ceil(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : std::ceil(v);
}

double window_integral(const IntensityFunction& intensity, const Interval1& domain, double x, double h) {
  const double a = std::max(domain.lo(), x - h);
  const double b = std::min(domain.hi(), x + h);
  return b > a ? intensity.integral(a, b) : 0.0;
}

bool near_edge(const Interval1& domain, double x, double h) {
  return x - h < domain.lo() || x + h > domain.hi();
}

}  // namespace

IntensityEstimate kernel_intensity_estimate(const PointPattern1& pattern, double h, std::span<const double> grid) {
  check_bandwidth(h);
  IntensityEstimate est;
  est.h = h;
  est.grid.assign(grid.begin(), grid.end());
  est.values.reserve(grid.size());
  est.counts.reserve(grid.size());
  for (double x : grid) {
    const auto p = static_cast<std::int64_t>(count_points_in(pattern, x - h, x + h));
    est.counts.push_back(p);
    est.values.push_back(static_cast<double>(p) / (2.0 * h));
  }
  return est;
}

double TStarQuery::b(double t) const noexcept {
  return t * std::sqrt(2.0 * h * static_cast<double>(p) + h * h * t * t);
}

double resample_coverage(const TStarQuery& q, double t) {
  check_bandwidth(q.h);
  if (q.p < 0) throw InvalidParameter("observed count must be >= 0");
  const double upper = snap_floor(q.a(t) + q.b(t));
  const double lower = snap_ceil(q.a(t) - q.b(t));
  if (q.p == 0) return lower <= 0.0 && upper >= 0.0 ? 1.0 : 0.0;
  const PoissonCdf cdf(static_cast<double>(q.p));
  if (upper < lower) return 0.0;
  return cdf(static_cast<std::int64_t>(upper)) - cdf(static_cast<std::int64_t>(lower) - 1);
}

TStarResult t_star_closed_form(const TStarQuery& query) {
  if (query.p <= 0) {
    throw DegenerateCount(fmt::format("t* needs an observed count p >= 1, got {}", query.p));
  }
  return solve_step_quantile(static_cast<double>(query.p), query.h, query.alpha);
}

TStarMonteCarlo t_star_monte_carlo(std::int64_t p, double h, double alpha, std::size_t draws, RngSeed seed,
                                   std::size_t threads) {
  check_bandwidth(h);
  check_alpha(alpha);
  if (p <= 0) throw DegenerateCount(fmt::format("t* needs an observed count p >= 1, got {}", p));
  if (draws < 1000) throw InvalidParameter(fmt::format("need at least 1000 resamples, got {}", draws));

  std::vector<double> abs_t(draws);
  parallel_for(draws, threads, [&](std::size_t k) {
    auto engine = seed.child(k).engine();
    std::poisson_distribution<std::int64_t> weight(1.0);
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < p; ++i) total += weight(engine);
    abs_t[k] = total == 0 ? infinity
                          : std::abs(static_cast<double>(total - p)) / std::sqrt(2.0 * h * static_cast<double>(total));
  });

  TStarMonteCarlo out;
  out.draws = draws;
  out.zero_draws = static_cast<std::size_t>(std::count(abs_t.begin(), abs_t.end(), infinity));
  const double rank = std::ceil((1.0 - alpha) * static_cast<double>(draws) - 1e-9);
  if (rank <= 0.0) {
    out.t = 0.0;
    return out;
  }
  const auto idx = static_cast<std::size_t>(rank) - 1;
  std::nth_element(abs_t.begin(), abs_t.begin() + static_cast<std::ptrdiff_t>(idx), abs_t.end());
  out.t = abs_t[idx];
  return out;
}

QuantileBand t_star_quantile_band(std::int64_t p, double h, double alpha, std::size_t draws, double z) {
  const double sigma = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(draws));
  QuantileBand band;
  const double alpha_hi = alpha + z * sigma;
  const double alpha_lo = alpha - z * sigma;
  const auto t_or_inf = [&](double level) {
    if (level >= 1.0) return 0.0;
    if (level <= 0.0) return infinity;
    try {
      return t_star_closed_form({p, h, level}).t;
    } catch (const UnattainableLevel&) {
      return infinity;
    }
  };
  band.lo = t_or_inf(alpha_hi);
  band.hi = t_or_inf(alpha_lo);
  return band;
}

TStarResult t_alpha_oracle(const IntensityFunction& intensity, const Interval1& domain, double x, double h,
                           double alpha) {
  check_bandwidth(h);
  const double m = window_integral(intensity, domain, x, h);
  if (!(m > 0.0)) {
    throw DegenerateCount(fmt::format("expected count over [{}, {}] is zero", x - h, x + h));
  }
  return solve_step_quantile(m, h, alpha);
}

PoissonInterval garwood_interval(std::int64_t count, double alpha) {
  if (count < 0) throw InvalidParameter("count must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParameter(fmt::format("alpha must lie in (0, 1], got {}", alpha));
  }
  using boost::math::chi_squared_distribution;
  using boost::math::quantile;
  PoissonInterval out;
  if (count > 0) {
    out.lo = 0.5 * quantile(chi_squared_distribution<double>(2.0 * static_cast<double>(count)), alpha / 2.0);
  }
  out.hi = 0.5 * quantile(chi_squared_distribution<double>(2.0 * static_cast<double>(count) + 2.0), 1.0 - alpha / 2.0);
  return out;
}

std::string_view band_method_name(BandMethod method) noexcept {
  switch (method) {
    case BandMethod::bootstrap_mc:
      return "mc";
    case BandMethod::bootstrap_closed_form:
      return "closed";
    case BandMethod::exact_poisson:
      return "exact";
    case BandMethod::oracle_true_t:
      return "oracle";
  }
  return "unknown";
}

BandMethod parse_band_method(std::string_view name) {
  if (name == "mc" || name == "bootstrap_mc") return BandMethod::bootstrap_mc;
  if (name == "closed" || name == "bootstrap_closed_form") return BandMethod::bootstrap_closed_form;
  if (name == "exact" || name == "exact_poisson") return BandMethod::exact_poisson;
  if (name == "oracle" || name == "oracle_true_t") return BandMethod::oracle_true_t;
  throw InvalidParameter(fmt::format("unknown band method '{}' (expected mc, closed, exact or oracle)", name));
}

std::string band_flag_text(unsigned flags) {
  if (flags == band_ok) return "ok";
  std::string out;
  const auto append = [&](const char* s) {
    if (!out.empty()) out += '|';
    out += s;
  };
  if (flags & band_zero_count) append("zero_count");
  if (flags & band_unattainable) append("unattainable");
  if (flags & band_edge) append("edge");
  return out;
}

ConfidenceBand confidence_band(const PointPattern1& pattern, double h, double alpha, std::span<const double> grid,
                               const BandOptions& options) {
  check_bandwidth(h);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParameter(fmt::format("alpha must lie in (0, 1], got {}", alpha));
  }
  if (options.method == BandMethod::oracle_true_t && !options.intensity) {
    throw InvalidParameter("oracle_true_t needs the true intensity function");
  }

  const auto est = kernel_intensity_estimate(pattern, h, grid);
  const auto& domain = pattern.interval();
  const double two_h = 2.0 * h;

  ConfidenceBand band;
  band.grid = est.grid;
  band.lambda_hat = est.values;
  band.level = 1.0 - alpha;
  band.h = h;
  band.method = options.method;
  const std::size_t n = grid.size();
  band.lo.resize(n);
  band.hi.resize(n);
  band.t_star.assign(n, std::numeric_limits<double>::quiet_NaN());
  band.flags.assign(n, band_ok);

  // Resampling quantiles depend on the grid point only through p(x).
  std::map<std::int64_t, std::optional<double>> cache;
  const auto resampled_t = [&](std::int64_t p) -> std::optional<double> {
    if (auto it = cache.find(p); it != cache.end()) return it->second;
    std::optional<double> t;
    if (options.method == BandMethod::bootstrap_mc) {
      const auto mc = t_star_monte_carlo(p, h, alpha, options.mc_draws, options.seed.child(static_cast<std::uint64_t>(p)),
                                         options.threads);
      if (std::isfinite(mc.t)) t = mc.t;
    } else {
      try {
        t = t_star_closed_form({p, h, alpha}).t;
      } catch (const UnattainableLevel&) {
      }
    }
    cache.emplace(p, t);
    return t;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid[i];
    const std::int64_t p = est.counts[i];
    const double lam = est.values[i];
    if (near_edge(domain, x, h)) band.flags[i] |= band_edge;

    const auto use_exact = [&] {
      const auto g = garwood_interval(p, alpha);
      band.lo[i] = g.lo / two_h;
      band.hi[i] = g.hi / two_h;
    };

    if (options.method == BandMethod::exact_poisson) {
      use_exact();
      continue;
    }
    if (p == 0 && alpha == 1.0) {
      // Level 0 needs no width; t = 0 holds for every count.
      band.lo[i] = band.hi[i] = band.t_star[i] = 0.0;
      continue;
    }
    if (p == 0) {
      band.flags[i] |= band_zero_count;
      use_exact();
      continue;
    }

    std::optional<double> t;
    if (options.method == BandMethod::oracle_true_t) {
      try {
        t = t_alpha_oracle(*options.intensity, domain, x, h, alpha).t;
      } catch (const UnattainableLevel&) {
      }
    } else {
      t = resampled_t(p);
    }
    if (!t) {
      band.flags[i] |= band_unattainable;
      use_exact();
      continue;
    }
    const double half = *t * std::sqrt(lam);
    band.t_star[i] = *t;
    band.lo[i] = std::max(0.0, lam - half);
    band.hi[i] = lam + half;
  }
  return band;
}

std::vector<double> midpoint_grid(const Interval1& interval, std::size_t steps) {
  if (steps == 0) throw InvalidParameter("grid needs at least one step");
  std::vector<double> grid(steps);
  const double width = interval.length() / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) grid[i] = interval.lo() + (static_cast<double>(i) + 0.5) * width;
  return grid;
}

CoverageTable coverage_experiment(const IntensityFunction& intensity, const Interval1& interval, double h,
                                  double alpha, const BandOptions& options, std::size_t reps,
                                  std::span<const double> grid, RngSeed seed, std::size_t threads) {
  if (reps < 100) throw InvalidParameter(fmt::format("coverage experiments need >= 100 replications, got {}", reps));
  check_bandwidth(h);
  const std::size_t n = grid.size();

  std::vector<double> truth(n), mean_target(n);
  CoverageTable table;
  table.grid.assign(grid.begin(), grid.end());
  table.reps = reps;
  table.edge.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = intensity(grid[i]);
    mean_target[i] = window_integral(intensity, interval, grid[i], h) / (2.0 * h);
    table.edge[i] = near_edge(interval, grid[i], h);
  }

  // Per replication and grid point: bit 0 covers lambda(x), bit 1 covers E lambda_hat(x).
  std::vector<unsigned char> hits(reps * n, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const auto rep_seed = seed.child(r);
    const auto pattern = simulate_inhomogeneous_poisson(intensity, interval, rep_seed.child(0));
    BandOptions opts = options;
    opts.seed = rep_seed.child(1);
    opts.threads = 1;
    if (!opts.intensity) opts.intensity = intensity;
    const auto band = confidence_band(pattern, h, alpha, grid, opts);
    for (std::size_t i = 0; i < n; ++i) {
      unsigned char bits = 0;
      if (band.lo[i] <= truth[i] && truth[i] <= band.hi[i]) bits |= 1;
      if (band.lo[i] <= mean_target[i] && mean_target[i] <= band.hi[i]) bits |= 2;
      hits[r * n + i] = bits;
    }
  });

  const double total = static_cast<double>(reps);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = 0, b = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      a += hits[r * n + i] & 1;
      b += (hits[r * n + i] >> 1) & 1;
    }
    const double ca = static_cast<double>(a) / total;
    const double cb = static_cast<double>(b) / total;
    table.coverage_true_lambda.push_back(ca);
    table.coverage_e_lambda_hat.push_back(cb);
    table.se_true_lambda.push_back(std::sqrt(ca * (1.0 - ca) / total));
    table.se_e_lambda_hat.push_back(std::sqrt(cb * (1.0 - cb) / total));
  }
  return table;
}

}  // namespace ppboot
