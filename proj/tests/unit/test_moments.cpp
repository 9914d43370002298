#include <doctest.h>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "ppboot/bootstrap.hpp"
#include "ppboot/error.hpp"
#include "ppboot/moments.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/summation.hpp"
#include "ppboot/two_point.hpp"

using namespace ppboot;

namespace {
const Window2 unit = Window2::unit_square();
}

TEST_SUITE("moments") {
  TEST_CASE("f = 0 gives zero moments") {
    for (const auto& spec : {IntegrationSpec::quadrature(16), IntegrationSpec::monte_carlo(2000, {1, 0})}) {
      const auto m = s_moments_poisson(100.0, unit, PairFunction::zero(unit), spec);
      CHECK(m.s2 == 0.0);
      CHECK(m.s3 == 0.0);
      CHECK(m.s4 == 0.0);
      CHECK(m.e_theta == 0.0);
      CHECK(true_variance_poisson(m).value == 0.0);
      CHECK(expected_bootstrap_variance(m, alpha_coefficients(std::nullopt, ResampleScheme::poissonized)) == 0.0);
    }
  }

  TEST_CASE("f = 1 on the unit square with lambda = 1") {
    const auto f = PairFunction::constant(unit, 1.0);
    const auto q = s_moments_poisson(1.0, unit, f, IntegrationSpec::quadrature(16));
    CHECK(q.s2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.s3 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.s4 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.e_theta == doctest::Approx(1.0).epsilon(1e-12));
    const auto mc = s_moments_poisson(1.0, unit, f, IntegrationSpec::monte_carlo(20000, {3, 0}));
    CHECK(std::abs(mc.s2 - 1.0) <= mc.errors.s2 + 1e-12);
    CHECK(std::abs(mc.s3 - 1.0) <= mc.errors.s3 + 1e-12);
    CHECK(std::abs(mc.s4 - 1.0) <= mc.errors.s4 + 1e-12);
    CHECK(std::abs(mc.e_theta - 1.0) <= mc.errors.e_theta + 1e-12);
  }

  TEST_CASE("quadrature and Monte Carlo agree for a box product-density f") {
    const double lambda = 100.0, r = 0.05, b = 0.01;
    const auto f = parse_pair_function("pcf:r=0.05,b=0.01,kernel=box", unit);
    const auto q = s_moments_poisson(lambda, unit, f, IntegrationSpec::quadrature(48));
    auto spec = IntegrationSpec::monte_carlo(200000, {5, 0});
    spec.threads = 2;
    const auto mc = s_moments_poisson(lambda, unit, f, spec);
    CHECK(std::abs(q.s2 - mc.s2) <= q.errors.s2 + mc.errors.s2);
    CHECK(std::abs(q.s3 - mc.s3) <= q.errors.s3 + mc.errors.s3);
    CHECK(std::abs(q.s4 - mc.s4) <= q.errors.s4 + mc.errors.s4);
    CHECK(std::abs(q.e_theta - mc.e_theta) <= q.errors.e_theta + mc.errors.e_theta);

    // closed-form radial integrals on the unit square
    CHECK(q.e_theta == doctest::Approx(oracle::box_e_theta(lambda, r, b)).epsilon(1e-3));
    CHECK(q.s2 == doctest::Approx(oracle::box_s2(lambda, r, b)).epsilon(1e-3));
    CHECK(std::abs(mc.e_theta - oracle::box_e_theta(lambda, r, b)) <= mc.errors.e_theta);
    CHECK(std::abs(mc.s2 - oracle::box_s2(lambda, r, b)) <= mc.errors.s2);
  }

  TEST_CASE("Monte Carlo moments do not depend on the thread count") {
    const auto f = parse_pair_function("disk:0.1", unit);
    auto spec = IntegrationSpec::monte_carlo(5000, {8, 0});
    const auto a = s_moments_poisson(50.0, unit, f, spec);
    spec.threads = 3;
    const auto b = s_moments_poisson(50.0, unit, f, spec);
    CHECK(a.s2 == b.s2);
    CHECK(a.s3 == b.s3);
    CHECK(a.s4 == b.s4);
  }

  TEST_CASE("Poisson cancellation s4 - e_theta^2 vanishes within the integration error") {
    const auto f = parse_pair_function("pcf:r=0.1,b=0.02,kernel=epanechnikov", unit);
    const auto m = s_moments_poisson(80.0, unit, f, IntegrationSpec::quadrature(32));
    const auto t = true_variance_poisson(m);
    CHECK(std::abs(t.cancellation) <= m.errors.s4 + 2.0 * m.e_theta * m.errors.e_theta + 1e-9 * m.s4);
    CHECK(t.reduced == doctest::Approx(4 * m.s3 + 2 * m.s2));
  }

  TEST_CASE("poissonized expected bootstrap variance is 4 s3 + 6 s2") {
    MomentSet m;
    m.s2 = 1.7;
    m.s3 = 0.4;
    m.s4 = 9.0;
    const double v = expected_bootstrap_variance(m, alpha_coefficients(std::nullopt, ResampleScheme::poissonized));
    CHECK(v == doctest::Approx(4 * 0.4 + 6 * 1.7));
    const auto a4 = alpha_coefficients(std::size_t{4}, ResampleScheme::multinomial);
    CHECK(expected_bootstrap_variance(m, a4) == doctest::Approx(a4.alpha4 * 9.0 + 4 * a4.alpha3 * 0.4 + 2 * a4.alpha2 * 1.7));
  }

  TEST_CASE("integrated true variance matches the simulated variance of theta") {
    const double lambda = 100.0;
    const auto f = parse_pair_function("pcf:r=0.05,b=0.01,kernel=box", unit);
    const auto m = s_moments_poisson(lambda, unit, f, IntegrationSpec::quadrature(48));
    const int reps = 2000;
    std::vector<double> theta(reps);
    for (int r = 0; r < reps; ++r) theta[r] = two_point_statistic(simulate_homogeneous_poisson(lambda, unit, RngSeed{31, 0}.child(r)), f);
    const auto sm = sample_moments(theta);
    CHECK(std::abs(sm.variance / true_variance_poisson(m).value - 1.0) < 0.10);
    CHECK(std::abs(sm.mean / m.e_theta - 1.0) < 0.05);
  }

  TEST_CASE("small-support regime gives a ratio near three") {
    const auto f = parse_pair_function("pcf:r=0.02,b=0.002,kernel=box", unit);
    const auto m = s_moments_poisson(100.0, unit, f, IntegrationSpec::quadrature(64));
    const double ratio = expected_bootstrap_variance(m, alpha_coefficients(std::nullopt, ResampleScheme::poissonized)) /
                         true_variance_poisson(m).reduced;
    CHECK(ratio > 2.5);
    CHECK(ratio < 3.5);
  }

  TEST_CASE("integration spec validation") {
    const auto f = PairFunction::constant(unit, 1.0);
    CHECK_THROWS_AS(s_moments_poisson(1.0, unit, f, IntegrationSpec::monte_carlo(10, {})), InvalidParameter);
    CHECK_THROWS_AS(s_moments_poisson(1.0, unit, f, IntegrationSpec::monte_carlo(5000, {}, 1)), InvalidParameter);
    CHECK_THROWS_AS(s_moments_poisson(1.0, unit, f, IntegrationSpec::quadrature(4)), InvalidParameter);
    CHECK_THROWS_AS(s_moments_poisson(-1.0, unit, f, IntegrationSpec::quadrature(16)), InvalidParameter);
  }
}
