#include "ppboot/moments.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "ppboot/error.hpp"
#include "ppboot/parallel.hpp"
#include "ppboot/summation.hpp"

namespace ppboot {
namespace {

// Raw integrals over W^k without the lambda powers.
struct RawIntegrals {
  double first = 0.0;   // \int\int f
  double square = 0.0;  // \int\int f^2
  double triple = 0.0;  // \int (\int f dx2)^2 dx1
  double quad = 0.0;    // (\int\int f)^2 as a 4-fold integral
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order mapped to [a, b].
Rule gauss_legendre(std::size_t order, double a, double b) {
  Rule rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(order));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto add = [&](double z) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(order), z);
    rule.nodes.push_back(mid + half * z);
    rule.weights.push_back(half * 2.0 / ((1.0 - z * z) * dp * dp));
  };
  for (double z : zeros) {
    add(z);
    if (z != 0.0) add(-z);
  }
  return rule;
}

double checked(double v, const Point2& a, const Point2& b) {
  if (!std::isfinite(v)) {
    throw NumericalError(fmt::format("integrand is non-finite at x1 = ({}, {}), x2 = ({}, {})", a.x, a.y, b.x, b.y));
  }
  return v;
}

// Integrals of f(x1, .) and f(x1, .)^2 over the second argument.
struct Inner {
  double first = 0.0;
  double square = 0.0;
};

class QuadratureIntegrator {
 public:
  QuadratureIntegrator(const Window2& window, const PairFunction& f, std::size_t order)
      : window_(window), f_(f) {
    xs_ = gauss_legendre(order, window.x_min(), window.x_max());
    ys_ = gauss_legendre(order, window.y_min(), window.y_max());
    if (const auto& s = f.support()) {
      if (s->r_max > s->r_min) radial_ = gauss_legendre(order, s->r_min, s->r_max);
      const std::size_t angles = 4 * order;
      const double step = 2.0 * std::numbers::pi / static_cast<double>(angles);
      for (std::size_t k = 0; k < angles; ++k) {
        const double phi = (static_cast<double>(k) + 0.5) * step;
        directions_.push_back({std::cos(phi), std::sin(phi)});
      }
      angle_weight_ = step;
    }
  }

  Inner inner(const Point2& x1) const {
    CompensatedSum first, square;
    if (f_.support()) {
      for (std::size_t a = 0; a < radial_.nodes.size(); ++a) {
        const double rho = radial_.nodes[a];
        const double w = radial_.weights[a] * rho * angle_weight_;
        for (const auto& d : directions_) {
          const Point2 x2{x1.x + rho * d.x, x1.y + rho * d.y};
          const double v = checked(f_(x1, x2), x1, x2);
          if (v == 0.0) continue;
          first.add(w * v);
          square.add(w * v * v);
        }
      }
    } else {
      for (std::size_t a = 0; a < xs_.nodes.size(); ++a) {
        for (std::size_t b = 0; b < ys_.nodes.size(); ++b) {
          const Point2 x2{xs_.nodes[a], ys_.nodes[b]};
          const double v = checked(f_(x1, x2), x1, x2);
          const double w = xs_.weights[a] * ys_.weights[b];
          first.add(w * v);
          square.add(w * v * v);
        }
      }
    }
    return {first.value(), square.value()};
  }

  RawIntegrals integrate(std::size_t threads) const {
    const std::size_t nx = xs_.nodes.size();
    const std::size_t ny = ys_.nodes.size();
    std::vector<Inner> values(nx * ny);
    parallel_for(nx * ny, threads, [&](std::size_t idx) {
      values[idx] = inner({xs_.nodes[idx / ny], ys_.nodes[idx % ny]});
    });
    CompensatedSum first, square, triple;
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const double w = xs_.weights[idx / ny] * ys_.weights[idx % ny];
      first.add(w * values[idx].first);
      square.add(w * values[idx].square);
      triple.add(w * values[idx].first * values[idx].first);
    }
    RawIntegrals out{first.value(), square.value(), triple.value(), 0.0};
    out.quad = out.first * out.first;
    return out;
  }

 private:
  Window2 window_;
  const PairFunction& f_;
  Rule xs_, ys_, radial_;
  std::vector<Point2> directions_;
  double angle_weight_ = 0.0;
};

struct RawWithErrors {
  RawIntegrals value;
  RawIntegrals error;
};

RawWithErrors integrate_quadrature(const Window2& window, const PairFunction& f, const IntegrationSpec& spec) {
  const auto fine = QuadratureIntegrator(window, f, spec.nodes_per_axis).integrate(spec.threads);
  const auto coarse = QuadratureIntegrator(window, f, spec.nodes_per_axis / 2).integrate(spec.threads);
  return {fine,
          {std::abs(fine.first - coarse.first), std::abs(fine.square - coarse.square),
           std::abs(fine.triple - coarse.triple), std::abs(fine.quad - coarse.quad)}};
}

// Per outer sample x1: unbiased estimates of J1(x1), J2(x1) and J1(x1)^2.
struct OuterSample {
  double first = 0.0;
  double square = 0.0;
  double first_squared = 0.0;
};

RawWithErrors integrate_monte_carlo(const Window2& window, const PairFunction& f, const IntegrationSpec& spec) {
  constexpr std::size_t chunk = 1024;
  const std::size_t samples = spec.samples;
  const std::size_t m = spec.inner_samples;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  const auto& support = f.support();
  const double inner_area = support ? std::numbers::pi * (support->r_max * support->r_max - support->r_min * support->r_min)
                                    : window.area();

  std::vector<OuterSample> outer(samples);
  parallel_for(chunks, spec.threads, [&](std::size_t c) {
    auto engine = spec.seed.child(c).engine();
    std::vector<double> y(m);
    const std::size_t end = std::min(samples, (c + 1) * chunk);
    for (std::size_t s = c * chunk; s < end; ++s) {
      const Point2 x1{window.x_min() + window.width() * uniform_open(engine),
                      window.y_min() + window.height() * uniform_open(engine)};
      for (std::size_t a = 0; a < m; ++a) {
        Point2 x2;
        if (support) {
          const double r2 = support->r_min * support->r_min +
                            uniform_open(engine) * (support->r_max * support->r_max - support->r_min * support->r_min);
          const double rho = std::sqrt(r2);
          const double phi = 2.0 * std::numbers::pi * uniform_open(engine);
          x2 = {x1.x + rho * std::cos(phi), x1.y + rho * std::sin(phi)};
        } else {
          x2 = {window.x_min() + window.width() * uniform_open(engine),
                window.y_min() + window.height() * uniform_open(engine)};
        }
        y[a] = inner_area * checked(f(x1, x2), x1, x2);
      }
      double sum = 0.0, sum_sq = 0.0;
      for (double v : y) {
        sum += v;
        sum_sq += v * v;
      }
      const double md = static_cast<double>(m);
      outer[s] = {sum / md, inner_area > 0.0 ? sum_sq / md / inner_area : 0.0,
                  (sum * sum - sum_sq) / (md * (md - 1.0))};
    }
  });

  std::vector<double> g1(samples), g2(samples), g3(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    g1[s] = outer[s].first;
    g2[s] = outer[s].square;
    g3[s] = outer[s].first_squared;
  }
  const double area = window.area();
  const double n = static_cast<double>(samples);
  const auto m1 = sample_moments(g1);
  const auto m2 = sample_moments(g2);
  const auto m3 = sample_moments(g3);

  RawWithErrors out;
  out.value.first = area * m1.mean;
  out.value.square = area * m2.mean;
  out.value.triple = area * m3.mean;
  // Two independent outer samples give an unbiased product for the 4-fold integral.
  CompensatedSum sum, sum_sq;
  for (double v : g1) {
    sum.add(v);
    sum_sq.add(v * v);
  }
  out.value.quad = area * area * (sum.value() * sum.value() - sum_sq.value()) / (n * (n - 1.0));

  constexpr double z = 3.0;
  const double se1 = area * std::sqrt(m1.variance / n);
  out.error.first = z * se1;
  out.error.square = z * area * std::sqrt(m2.variance / n);
  out.error.triple = z * area * std::sqrt(m3.variance / n);
  out.error.quad = z * 2.0 * std::abs(out.value.first) * se1;
  return out;
}

}  // namespace

std::string_view method_name(IntegrationMethod method) noexcept {
  return method == IntegrationMethod::monte_carlo ? "mc" : "quad";
}

IntegrationMethod parse_integration_method(std::string_view name) {
  if (name == "mc" || name == "monte_carlo") return IntegrationMethod::monte_carlo;
  if (name == "quad" || name == "product_quadrature") return IntegrationMethod::product_quadrature;
  throw InvalidParameter(fmt::format("unknown integration method '{}' (expected mc or quad)", name));
}

IntegrationSpec IntegrationSpec::monte_carlo(std::size_t samples, RngSeed seed, std::size_t inner_samples) {
  IntegrationSpec spec;
  spec.method = IntegrationMethod::monte_carlo;
  spec.samples = samples;
  spec.seed = seed;
  spec.inner_samples = inner_samples;
  return spec;
}

IntegrationSpec IntegrationSpec::quadrature(std::size_t nodes_per_axis) {
  IntegrationSpec spec;
  spec.method = IntegrationMethod::product_quadrature;
  spec.nodes_per_axis = nodes_per_axis;
  return spec;
}

void IntegrationSpec::validate() const {
  if (method == IntegrationMethod::monte_carlo) {
    if (samples < 1000) throw InvalidParameter(fmt::format("monte_carlo needs >= 1000 samples, got {}", samples));
    if (inner_samples < 2) {
      throw InvalidParameter(fmt::format("monte_carlo needs >= 2 inner samples, got {}", inner_samples));
    }
  } else if (nodes_per_axis < 8) {
    throw InvalidParameter(fmt::format("product_quadrature needs >= 8 nodes per axis, got {}", nodes_per_axis));
  }
}

MomentSet s_moments_poisson(double lambda, const Window2& window, const PairFunction& f,
                            const IntegrationSpec& spec) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidParameter(fmt::format("intensity must be finite and >= 0, got {}", lambda));
  }
  spec.validate();
  const auto raw = spec.method == IntegrationMethod::monte_carlo ? integrate_monte_carlo(window, f, spec)
                                                                 : integrate_quadrature(window, f, spec);
  const double l2 = lambda * lambda;
  const double l3 = l2 * lambda;
  const double l4 = l2 * l2;
  MomentSet m;
  m.lambda = lambda;
  m.f_descriptor = f.descriptor();
  m.method = spec.method;
  m.s2 = l2 * raw.value.square;
  m.s3 = l3 * raw.value.triple;
  m.s4 = l4 * raw.value.quad;
  m.e_theta = l2 * raw.value.first;
  m.errors = {l2 * raw.error.square, l3 * raw.error.triple, l4 * raw.error.quad, l2 * raw.error.first};
  return m;
}

TrueVariance true_variance_poisson(const MomentSet& m) {
  TrueVariance v;
  v.reduced = 4.0 * m.s3 + 2.0 * m.s2;
  v.cancellation = m.s4 - m.e_theta * m.e_theta;
  v.value = v.cancellation + v.reduced;
  v.error = m.errors.s4 + 2.0 * std::abs(m.e_theta) * m.errors.e_theta + 4.0 * m.errors.s3 + 2.0 * m.errors.s2;
  return v;
}

double expected_bootstrap_variance(const MomentSet& m, const AlphaCoefficients& a) {
  return a.alpha4 * m.s4 + 4.0 * a.alpha3 * m.s3 + 2.0 * a.alpha2 * m.s2;
}

}  // namespace ppboot
