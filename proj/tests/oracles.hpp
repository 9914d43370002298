#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's numerical code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "ppboot/geometry.hpp"

namespace oracle {

using Fn = std::function<double(const ppboot::Point2&, const ppboot::Point2&)>;

inline std::vector<ppboot::Point2> random_points(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ppboot::Point2> pts(n);
  for (auto& p : pts) p = {u(gen), u(gen)};
  return pts;
}

inline double dist(const ppboot::Point2& a, const ppboot::Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// K_b(r - d) / (2 pi r area) with the box kernel 1/(2b) on |u| <= b.
inline double box_product_density(double d, double r, double b, double area) {
  return std::abs(r - d) <= b ? 1.0 / (2.0 * b) / (2.0 * std::numbers::pi * r * area) : 0.0;
}

struct Sums {
  double pairs = 0, triples = 0, quadruples = 0, squares = 0;
};

// O(n^4) / O(n^3) enumeration over distinct index tuples.
inline Sums brute_force_sums(const std::vector<ppboot::Point2>& x, const Fn& f) {
  const std::size_t n = x.size();
  Sums s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double fij = f(x[i], x[j]);
      s.pairs += fij;
      s.squares += fij * fij;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        s.triples += fij * f(x[i], x[k]);
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          s.quadruples += fij * f(x[k], x[l]);
        }
      }
    }
  return s;
}

inline double weighted_pairs(const std::vector<ppboot::Point2>& x, const Fn& f, const std::vector<std::int64_t>& w) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (i != j) s += f(x[i], x[j]) * static_cast<double>(w[i] * w[j]);
  return s;
}

// \int\int_{[0,1]^2 x [0,1]^2} g(|u - v|) du dv = \int_0^{sqrt 2} g(rho) rho (2 pi - 8 rho + 2 rho^2) drho,
// valid for rho <= 1 (all radii used in the tests are far below 1).
// Antiderivative of rho (2 pi - 8 rho + 2 rho^2).
inline double unit_square_radial_mass(double lo, double hi) {
  const auto F = [](double r) { return std::numbers::pi * r * r - 8.0 * r * r * r / 3.0 + r * r * r * r / 2.0; };
  return F(hi) - F(std::max(lo, 0.0));
}

// lambda^2 \int\int f for the box product-density f on the unit square.
inline double box_e_theta(double lambda, double r, double b) {
  return lambda * lambda * unit_square_radial_mass(r - b, r + b) / (2.0 * b) / (2.0 * std::numbers::pi * r);
}

// lambda^2 \int\int f^2 for the same f.
inline double box_s2(double lambda, double r, double b) {
  const double c = 1.0 / (2.0 * b) / (2.0 * std::numbers::pi * r);
  return lambda * lambda * c * c * unit_square_radial_mass(r - b, r + b);
}

inline double poisson_pmf(std::int64_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

// P{|p* - p| <= t sqrt(2 h p*)} for p* ~ Poisson(mean), counting directly from the
// untransformed inequality; p* = 0 is never covered.
inline double direct_coverage(std::int64_t p, double mean, double h, double t) {
  double c = 0;
  const auto hi = static_cast<std::int64_t>(mean + 40.0 * std::sqrt(mean + 1.0) + 50.0);
  for (std::int64_t k = 1; k <= hi; ++k) {
    const double lhs = std::abs(static_cast<double>(k - p));
    if (lhs <= t * std::sqrt(2.0 * h * static_cast<double>(k)) * (1.0 + 1e-12) + 1e-12) c += poisson_pmf(k, mean);
  }
  return c;
}

}  // namespace oracle
