#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "ppboot/error.hpp"
#include "ppboot/geometry.hpp"
#include "ppboot/io.hpp"
#include "ppboot/rng.hpp"

using namespace ppboot;

TEST_SUITE("geometry") {
  TEST_CASE("window validation") {
    CHECK_THROWS_AS(Window2(1, 0, 0, 1), InvalidParameter);
    CHECK_THROWS_AS(Window2(0, 1, 0, 0), InvalidParameter);
    CHECK_THROWS_AS(Interval1(0.5, 0.5), InvalidParameter);
    const Window2 w(0, 2, 1, 4);
    CHECK(w.area() == doctest::Approx(6.0));
    CHECK(w.contains({0, 1}));
    CHECK(w.contains({2, 4}));
    CHECK_FALSE(w.contains({2.0001, 4}));
  }

  TEST_CASE("patterns reject duplicates and out-of-window points with their index") {
    const auto w = Window2::unit_square();
    try {
      PointPattern2(w, {{0.1, 0.1}, {0.2, 0.2}, {0.1, 0.1}});
      FAIL("expected DuplicatePoint");
    } catch (const DuplicatePoint& e) {
      CHECK(e.row() == 2);
    }
    try {
      PointPattern2(w, {{0.1, 0.1}, {1.5, 0.2}});
      FAIL("expected OutOfWindow");
    } catch (const OutOfWindow& e) {
      CHECK(e.row() == 1);
    }
    CHECK_THROWS_AS(PointPattern1(Interval1::unit(), {0.3, 0.3}), DuplicatePoint);
    CHECK_THROWS_AS(PointPattern1(Interval1::unit(), {-0.1}), OutOfWindow);
  }

  TEST_CASE("substreams are reproducible and distinct") {
    const RngSeed s{7, 3};
    auto a = s.child(5).engine();
    auto b = s.child(5).engine();
    auto c = s.child(6).engine();
    const auto a1 = a();
    CHECK(a1 == b());
    CHECK(a1 != c());
    auto e = RngSeed{1, 0}.engine();
    for (int i = 0; i < 100000; ++i) {
      const double u = uniform_open(e);
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
  }

  TEST_CASE("zero intensity gives an empty pattern") {
    CHECK(simulate_homogeneous_poisson(0.0, Window2::unit_square(), {1, 0}).empty());
    CHECK(simulate_homogeneous_poisson(0.0, Window2(0, 5, 0, 3), {9, 2}).empty());
    CHECK(simulate_inhomogeneous_poisson(IntensityFunction::constant(0.0), Interval1::unit(), {1, 0}).empty());
    CHECK_THROWS_AS(simulate_homogeneous_poisson(-1.0, Window2::unit_square(), {1, 0}), InvalidParameter);
  }

  TEST_CASE("homogeneous counts have mean lambda times area") {
    const int reps = 10000;
    double sum = 0;
    const RngSeed base{2024, 0};
    for (int r = 0; r < reps; ++r) {
      const auto pat = simulate_homogeneous_poisson(100.0, Window2::unit_square(), base.child(r));
      for (const auto& p : pat.points()) REQUIRE(pat.window().contains(p));
      sum += static_cast<double>(pat.size());
    }
    CHECK(std::abs(sum / reps - 100.0) < 3.0 * std::sqrt(100.0 / reps));
  }

  TEST_CASE("same seed gives a byte-identical pattern") {
    const auto a = simulate_homogeneous_poisson(100.0, Window2::unit_square(), {42, 0});
    const auto b = simulate_homogeneous_poisson(100.0, Window2::unit_square(), {42, 0});
    CHECK(pattern_csv(a) == pattern_csv(b));
    const auto c = simulate_homogeneous_poisson(100.0, Window2::unit_square(), {43, 0});
    CHECK(pattern_csv(a) != pattern_csv(c));
  }

  TEST_CASE("thinning with constant intensity matches Poisson(c |I|) by chi-square") {
    const double c = 4.0;
    const Interval1 interval(0.0, 1.5);
    const double mean = c * interval.length();
    const int reps = 10000;
    // cells 0..10 and 11+, each with expected count above 5
    std::vector<double> observed(12, 0.0);
    const RngSeed base{99, 1};
    for (int r = 0; r < reps; ++r) {
      const auto n = simulate_inhomogeneous_poisson(IntensityFunction::constant(c), interval, base.child(r)).size();
      observed[std::min<std::size_t>(n, 11)] += 1;
    }
    double stat = 0, tail = 1.0;
    for (std::size_t k = 0; k < 12; ++k) {
      const double p = k < 11 ? oracle::poisson_pmf(static_cast<std::int64_t>(k), mean) : tail;
      if (k < 11) tail -= p;
      const double expected = p * reps;
      REQUIRE(expected > 5.0);
      stat += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    const boost::math::chi_squared dist(11.0);
    CHECK(stat < boost::math::quantile(dist, 0.99));
  }

  TEST_CASE("linear intensity 50 + 20x has mean count 60") {
    const auto lam = IntensityFunction::linear(50.0, 20.0, Interval1::unit());
    CHECK(lam.integral(0.0, 1.0) == doctest::Approx(60.0).epsilon(1e-12));
    const int reps = 10000;
    double sum = 0;
    const RngSeed base{5, 0};
    for (int r = 0; r < reps; ++r) sum += static_cast<double>(simulate_inhomogeneous_poisson(lam, Interval1::unit(), base.child(r)).size());
    CHECK(std::abs(sum / reps - 60.0) < 3.0 * std::sqrt(60.0 / reps));
  }

  TEST_CASE("thinning refuses an intensity above its declared bound") {
    const IntensityFunction bad([](double x) { return 10.0 + 100.0 * x; }, 20.0);
    CHECK_THROWS_AS(simulate_inhomogeneous_poisson(bad, Interval1::unit(), {1, 0}), InvalidBound);
  }

  TEST_CASE("closed-interval point counts") {
    const PointPattern1 empty(Interval1::unit(), {});
    CHECK(count_points_in(empty, Interval1(0.0, 1.0)) == 0);
    const PointPattern1 three(Interval1::unit(), {0.9, 0.1, 0.5});
    CHECK(count_points_in(three, Interval1(0.4, 0.6)) == 1);
    const PointPattern1 two(Interval1::unit(), {0.4, 0.6});
    CHECK(count_points_in(two, Interval1(0.4, 0.6)) == 2);
    CHECK(count_points_in(two, 0.41, 0.59) == 0);
  }
}
