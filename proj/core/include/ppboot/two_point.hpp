#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ppboot/geometry.hpp"
#include "ppboot/kernel.hpp"
#include "ppboot/pair_function.hpp"

namespace ppboot {

/// Sums of f over ordered tuples of pairwise distinct indices.
///
///   pairs      P  = sum_{i != j} f(x_i, x_j)
///   triples    T3 = sum_{i, j, k distinct} f(x_i, x_j) f(x_i, x_k)
///   quadruples Q4 = sum_{i, j, k, l distinct} f(x_i, x_j) f(x_k, x_l)
///   squares    R  = sum_{i != j} f(x_i, x_j)^2
///
/// For symmetric f these satisfy P^2 = Q4 + 4 T3 + 2 R.
struct TwoPointSums {
  double pairs = 0.0;
  double triples = 0.0;
  double quadruples = 0.0;
  double squares = 0.0;
};

/// Dense table of f(x_i, x_j) for one pattern, plus the sparse list of unordered
/// pairs where f(x_i, x_j) + f(x_j, x_i) is nonzero. Built once, then reused for
/// every weighted evaluation of a bootstrap run.
class PairTable {
 public:
  PairTable(const PointPattern2& pattern, const PairFunction& f);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }

  /// sum_{i != j} f(x_i, x_j)
  double statistic() const;

  /// sum_{i != j} f(x_i, x_j) w(i) w(j)
  double weighted(std::span<const std::int64_t> weights) const;

  TwoPointSums sums() const;

 private:
  struct Entry {
    std::uint32_t i;
    std::uint32_t j;
    double value;  // f(x_i, x_j) + f(x_j, x_i)
  };

  std::size_t n_;
  std::vector<double> values_;
  std::vector<Entry> nonzero_;
};

/// theta_hat = sum over ordered pairs i != j of f(x_i, x_j).
double two_point_statistic(const PointPattern2& pattern, const PairFunction& f);

struct ProductDensityPoint {
  double r = 0.0;
  double rho_hat = 0.0;
};

/// rho_hat(r) = (2 pi r area(W))^{-1} sum_{i != j} K_b(r - |x_i - x_j|), no edge correction.
std::vector<ProductDensityPoint> estimate_product_density(const PointPattern2& pattern,
                                                          std::span<const double> r_grid,
                                                          const KernelFunction& kernel);

/// O(n^2) evaluation of all four distinct-index sums.
TwoPointSums distinct_index_sums(const PointPattern2& pattern, const PairFunction& f);

}  // namespace ppboot
