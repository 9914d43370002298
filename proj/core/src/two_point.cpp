#include "ppboot/two_point.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ppboot/error.hpp"
#include "ppboot/summation.hpp"

namespace ppboot {

PairTable::PairTable(const PointPattern2& pattern, const PairFunction& f)
    : n_(pattern.size()), values_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double v = f(pattern[i], pattern[j]);
      if (!std::isfinite(v)) {
        throw NumericalError(fmt::format("pair function is non-finite at points {} and {}", i, j));
      }
      values_[i * n_ + j] = v;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = at(i, j) + at(j, i);
      if (v != 0.0) {
        nonzero_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
      }
    }
  }
}

double PairTable::statistic() const {
  CompensatedSum total;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j) total.add(at(i, j));
    }
  }
  return total.value();
}

double PairTable::weighted(std::span<const std::int64_t> weights) const {
  if (weights.size() != n_) {
    throw InvalidParameter(
        fmt::format("weight vector has length {} but the pattern has {} points", weights.size(), n_));
  }
  double total = 0.0;
  for (const auto& e : nonzero_) {
    const auto wi = weights[e.i];
    const auto wj = weights[e.j];
    if (wi != 0 && wj != 0) total += e.value * static_cast<double>(wi * wj);
  }
  return total;
}

TwoPointSums PairTable::sums() const {
  CompensatedSum pairs, squares, triples;
  for (std::size_t i = 0; i < n_; ++i) {
    CompensatedSum row, row_sq;
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double v = at(i, j);
      row.add(v);
      row_sq.add(v * v);
    }
    const double q = row.value();
    const double r = row_sq.value();
    pairs.add(q);
    squares.add(r);
    triples.add(q * q);
    triples.add(-r);
  }
  TwoPointSums s;
  s.pairs = pairs.value();
  s.squares = squares.value();
  s.triples = triples.value();
  CompensatedSum quad;
  quad.add(s.pairs * s.pairs);
  quad.add(-4.0 * s.triples);
  quad.add(-2.0 * s.squares);
  s.quadruples = quad.value();
  return s;
}

double two_point_statistic(const PointPattern2& pattern, const PairFunction& f) {
  CompensatedSum total;
  const std::size_t n = pattern.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) total.add(f(pattern[i], pattern[j]));
    }
  }
  return total.value();
}

std::vector<ProductDensityPoint> estimate_product_density(const PointPattern2& pattern,
                                                          std::span<const double> r_grid,
                                                          const KernelFunction& kernel) {
  for (double r : r_grid) {
    if (!std::isfinite(r) || r <= 0.0) {
      throw InvalidParameter(fmt::format("product density radius must be positive, got {}", r));
    }
  }
  const std::size_t n = pattern.size();
  std::vector<double> distances;
  distances.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) distances.push_back(distance(pattern[i], pattern[j]));
  }

  std::vector<ProductDensityPoint> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    CompensatedSum total;
    for (double d : distances) {
      const double k = kernel(r - d);
      if (k != 0.0) total.add(k);
    }
    // Each unordered pair stands for two ordered pairs.
    const double rho = 2.0 * total.value() / (2.0 * std::numbers::pi * r * pattern.window().area());
    out.push_back({r, rho});
  }
  return out;
}

TwoPointSums distinct_index_sums(const PointPattern2& pattern, const PairFunction& f) {
  return PairTable(pattern, f).sums();
}

}  // namespace ppboot
