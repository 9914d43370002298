#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ppboot/rng.hpp"

namespace ppboot {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Axis-aligned rectangular observation window.
class Window2 {
 public:
  Window2(double x_min, double x_max, double y_min, double y_max);

  static Window2 unit_square() { return Window2(0.0, 1.0, 0.0, 1.0); }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  double area() const noexcept { return width() * height(); }

  bool contains(const Point2& p) const noexcept {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }
  Window2 translated(double dx, double dy) const {
    return Window2(x_min_ + dx, x_max_ + dx, y_min_ + dy, y_max_ + dy);
  }

  friend bool operator==(const Window2&, const Window2&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
};

/// Interval [lo, hi] on the real line with lo < hi.
class Interval1 {
 public:
  Interval1(double lo, double hi);

  static Interval1 unit() { return Interval1(0.0, 1.0); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  friend bool operator==(const Interval1&, const Interval1&) = default;

 private:
  double lo_, hi_;
};

/// Planar pattern of pairwise distinct points inside a rectangle.
/// Construction throws OutOfWindow / DuplicatePoint carrying the offending index.
class PointPattern2 {
 public:
  PointPattern2(Window2 window, std::vector<Point2> points);

  const Window2& window() const noexcept { return window_; }
  std::span<const Point2> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

 private:
  Window2 window_;
  std::vector<Point2> points_;
};

/// Pattern on an interval; points are stored in ascending order.
class PointPattern1 {
 public:
  PointPattern1(Interval1 interval, std::vector<double> points);

  const Interval1& interval() const noexcept { return interval_; }
  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

 private:
  Interval1 interval_;
  std::vector<double> points_;
};

/// Nonnegative intensity x -> lambda(x) with a finite upper bound.
class IntensityFunction {
 public:
  IntensityFunction(std::function<double(double)> evaluator, double lambda_max,
                    std::string description = "custom");

  static IntensityFunction constant(double c);
  /// lambda(x) = intercept + slope * x; rejected if negative anywhere on `domain`.
  static IntensityFunction linear(double intercept, double slope, const Interval1& domain);

  double operator()(double x) const { return evaluator_(x); }
  double lambda_max() const noexcept { return lambda_max_; }
  const std::string& description() const noexcept { return description_; }

  /// Integral of lambda over [a, b] (adaptive Gauss-Kronrod).
  double integral(double a, double b) const;

 private:
  std::function<double(double)> evaluator_;
  double lambda_max_;
  std::string description_;
};

PointPattern2 simulate_homogeneous_poisson(double lambda, const Window2& window, RngSeed seed);

/// Lewis-Shedler thinning of a homogeneous Poisson(lambda_max) proposal.
/// Throws InvalidBound if a proposal point evaluates above lambda_max.
PointPattern1 simulate_inhomogeneous_poisson(const IntensityFunction& intensity,
                                             const Interval1& interval, RngSeed seed);

/// Number of points x with query.lo() <= x <= query.hi() (closed on both ends).
std::size_t count_points_in(const PointPattern1& pattern, const Interval1& query);
std::size_t count_points_in(const PointPattern1& pattern, double lo, double hi);

}  // namespace ppboot
