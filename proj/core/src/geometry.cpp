#include "ppboot/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <random>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "ppboot/error.hpp"

namespace ppboot {
namespace {

bool finite_all(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

Window2::Window2(double x_min, double x_max, double y_min, double y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!finite_all({x_min, x_max, y_min, y_max}) || !(x_min < x_max) || !(y_min < y_max)) {
    throw InvalidParameter(fmt::format("window [{}, {}] x [{}, {}] is empty or non-finite",
                                       x_min, x_max, y_min, y_max));
  }
}

Interval1::Interval1(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!finite_all({lo, hi}) || !(lo < hi)) {
    throw InvalidParameter(fmt::format("interval [{}, {}] is empty or non-finite", lo, hi));
  }
}

PointPattern2::PointPattern2(Window2 window, std::vector<Point2> points)
    : window_(window), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!window_.contains(points_[i])) {
      throw OutOfWindow(fmt::format("point {} ({}, {}) lies outside the window", i,
                                    points_[i].x, points_[i].y),
                        i);
    }
  }
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& p = points_[a];
    const auto& q = points_[b];
    return std::tie(p.x, p.y, a) < std::tie(q.x, q.y, b);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_[order[k]] == points_[order[k - 1]]) {
      const std::size_t later = std::max(order[k], order[k - 1]);
      throw DuplicatePoint(fmt::format("point {} duplicates point {}; points must be pairwise "
                                       "different",
                                       later, std::min(order[k], order[k - 1])),
                           later);
    }
  }
}

PointPattern1::PointPattern1(Interval1 interval, std::vector<double> points)
    : interval_(interval), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!interval_.contains(points_[i])) {
      throw OutOfWindow(fmt::format("point {} ({}) lies outside the interval", i, points_[i]), i);
    }
  }
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_[order[k]] == points_[order[k - 1]]) {
      const std::size_t later = std::max(order[k], order[k - 1]);
      throw DuplicatePoint(fmt::format("point {} duplicates point {}; points must be pairwise "
                                       "different",
                                       later, std::min(order[k], order[k - 1])),
                           later);
    }
  }
  std::sort(points_.begin(), points_.end());
}

IntensityFunction::IntensityFunction(std::function<double(double)> evaluator, double lambda_max,
                                     std::string description)
    : evaluator_(std::move(evaluator)), lambda_max_(lambda_max), description_(std::move(description)) {
  if (!evaluator_) throw InvalidParameter("intensity evaluator is empty");
  if (!std::isfinite(lambda_max) || lambda_max < 0.0) {
    throw InvalidParameter(fmt::format("lambda_max must be finite and nonnegative, got {}", lambda_max));
  }
}

IntensityFunction IntensityFunction::constant(double c) {
  if (!std::isfinite(c) || c < 0.0) {
    throw InvalidParameter(fmt::format("constant intensity must be finite and >= 0, got {}", c));
  }
  return IntensityFunction([c](double) { return c; }, c, fmt::format("const:{}", c));
}

IntensityFunction IntensityFunction::linear(double intercept, double slope, const Interval1& domain) {
  const double at_lo = intercept + slope * domain.lo();
  const double at_hi = intercept + slope * domain.hi();
  if (!finite_all({intercept, slope}) || at_lo < 0.0 || at_hi < 0.0) {
    throw InvalidParameter(fmt::format("linear intensity {} + {}x is negative on [{}, {}]", intercept,
                                       slope, domain.lo(), domain.hi()));
  }
  return IntensityFunction([intercept, slope](double x) { return intercept + slope * x; },
                           std::max(at_lo, at_hi), fmt::format("linear:{},{}", intercept, slope));
}

double IntensityFunction::integral(double a, double b) const {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(evaluator_, a, b, 10, 1e-12);
}

PointPattern2 simulate_homogeneous_poisson(double lambda, const Window2& window, RngSeed seed) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidParameter(fmt::format("intensity must be finite and >= 0, got {}", lambda));
  }
  std::vector<Point2> points;
  const double mean = lambda * window.area();
  if (mean > 0.0) {
    auto engine = seed.engine();
    std::poisson_distribution<std::int64_t> count_dist(mean);
    const auto n = static_cast<std::size_t>(count_dist(engine));
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = window.x_min() + window.width() * uniform_open(engine);
      const double y = window.y_min() + window.height() * uniform_open(engine);
      points.push_back({x, y});
    }
  }
  return PointPattern2(window, std::move(points));
}

PointPattern1 simulate_inhomogeneous_poisson(const IntensityFunction& intensity,
                                             const Interval1& interval, RngSeed seed) {
  const double bound = intensity.lambda_max();
  std::vector<double> points;
  const double mean = bound * interval.length();
  if (mean > 0.0) {
    auto engine = seed.engine();
    std::poisson_distribution<std::int64_t> count_dist(mean);
    const auto proposals = static_cast<std::size_t>(count_dist(engine));
    points.reserve(proposals);
    for (std::size_t i = 0; i < proposals; ++i) {
      const double x = interval.lo() + interval.length() * uniform_open(engine);
      const double u = uniform_open(engine);
      const double value = intensity(x);
      if (!(value >= 0.0) || value > bound) {
        throw InvalidBound(fmt::format("intensity {} at x = {} is outside [0, lambda_max = {}]",
                                       value, x, bound));
      }
      if (u * bound < value) points.push_back(x);
    }
  }
  return PointPattern1(interval, std::move(points));
}

std::size_t count_points_in(const PointPattern1& pattern, double lo, double hi) {
  if (!(lo <= hi)) return 0;
  const auto pts = pattern.points();
  const auto first = std::lower_bound(pts.begin(), pts.end(), lo);
  const auto last = std::upper_bound(first, pts.end(), hi);
  return static_cast<std::size_t>(last - first);
}

std::size_t count_points_in(const PointPattern1& pattern, const Interval1& query) {
  return count_points_in(pattern, query.lo(), query.hi());
}

}  // namespace ppboot
