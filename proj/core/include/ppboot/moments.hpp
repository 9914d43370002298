#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ppboot/bootstrap.hpp"
#include "ppboot/geometry.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/rng.hpp"

namespace ppboot {

enum class IntegrationMethod { monte_carlo, product_quadrature };

std::string_view method_name(IntegrationMethod method) noexcept;
IntegrationMethod parse_integration_method(std::string_view name);

struct IntegrationSpec {
  IntegrationMethod method = IntegrationMethod::product_quadrature;
  std::size_t samples = 200'000;  // monte_carlo: outer samples x1, at least 1000
  std::size_t inner_samples = 4;  // monte_carlo: partner samples per x1, at least 2
  std::size_t nodes_per_axis = 32;  // product_quadrature: Gauss-Legendre order per axis, at least 8
  RngSeed seed{};
  std::size_t threads = 1;

  static IntegrationSpec monte_carlo(std::size_t samples, RngSeed seed, std::size_t inner_samples = 4);
  static IntegrationSpec quadrature(std::size_t nodes_per_axis);
  void validate() const;
};

/// Integration error estimates. For monte_carlo these are 3-standard-error
/// half-widths; for product_quadrature they are the change between the
/// requested order and half of it.
struct MomentErrors {
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;
  double e_theta = 0.0;
};

/// Moment integrals of a two-point statistic under a homogeneous Poisson
/// process of intensity lambda, where the i-th product density is lambda^i:
///   s2 = lambda^2 \int\int f^2,   s3 = lambda^3 \int (\int f(x1, x2) dx2)^2 dx1,
///   s4 = lambda^4 (\int\int f)^2, e_theta = lambda^2 \int\int f.
struct MomentSet {
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;
  double e_theta = 0.0;
  double lambda = 0.0;
  std::string f_descriptor;
  IntegrationMethod method = IntegrationMethod::product_quadrature;
  MomentErrors errors;
};

MomentSet s_moments_poisson(double lambda, const Window2& window, const PairFunction& f,
                            const IntegrationSpec& spec);

struct TrueVariance {
  double value = 0.0;         // s4 + 4 s3 + 2 s2 - e_theta^2
  double reduced = 0.0;       // 4 s3 + 2 s2
  double cancellation = 0.0;  // s4 - e_theta^2, zero for Poisson up to integration error
  double error = 0.0;         // propagated error estimate of `value`
};

TrueVariance true_variance_poisson(const MomentSet& moments);

/// alpha4 s4 + 4 alpha3 s3 + 2 alpha2 s2; equals 4 s3 + 6 s2 for poissonized alphas.
double expected_bootstrap_variance(const MomentSet& moments, const AlphaCoefficients& alphas);

}  // namespace ppboot
