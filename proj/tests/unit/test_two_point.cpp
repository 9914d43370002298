#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "ppboot/bootstrap.hpp"
#include "ppboot/error.hpp"
#include "ppboot/kernel.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/two_point.hpp"

using namespace ppboot;

namespace {

const Window2 unit = Window2::unit_square();

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

TEST_SUITE("two_point") {
  TEST_CASE("fewer than two points give zero") {
    const auto f = PairFunction::constant(unit, 1.0);
    CHECK(two_point_statistic(PointPattern2(unit, {}), f) == 0.0);
    CHECK(two_point_statistic(PointPattern2(unit, {{0.5, 0.5}}), f) == 0.0);
  }

  TEST_CASE("f = 1 counts ordered pairs") {
    for (std::size_t n : {2u, 5u, 13u}) {
      const PointPattern2 pat(unit, oracle::random_points(n, 11));
      CHECK(two_point_statistic(pat, parse_pair_function("const", unit)) == doctest::Approx(double(n * (n - 1))));
    }
  }

  TEST_CASE("box-kernel statistic matches an independent double loop") {
    const double r = 0.3, b = 0.1;
    const auto pts = oracle::random_points(8, 3);
    const PointPattern2 pat(unit, pts);
    const auto f = PairFunction::product_density(unit, r, KernelFunction(KernelKind::box, b));
    double direct = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (i != j) direct += oracle::box_product_density(oracle::dist(pts[i], pts[j]), r, b, 1.0);
    REQUIRE(direct > 0.0);
    CHECK(rel_err(two_point_statistic(pat, f), direct) < 1e-12);
    CHECK(rel_err(PairTable(pat, f).statistic(), direct) < 1e-12);
  }

  TEST_CASE("pair function specs") {
    CHECK(parse_pair_function("zero", unit)({0.1, 0.1}, {0.2, 0.2}) == 0.0);
    CHECK(parse_pair_function("const:2.5", unit)({0.1, 0.1}, {0.2, 0.2}) == 2.5);
    CHECK(parse_pair_function("disk:0.2", unit)({0.1, 0.1}, {0.2, 0.2}) == 1.0);
    CHECK(parse_pair_function("disk:0.1", unit)({0.1, 0.1}, {0.2, 0.2}) == 0.0);
    CHECK(parse_pair_function("const", unit)({0.1, 0.1}, {1.2, 0.2}) == 0.0);
    const auto f = parse_pair_function("pcf:r=0.1,b=0.02,kernel=box", unit);
    CHECK(f({0, 0}, {0.1, 0}) == doctest::Approx(oracle::box_product_density(0.1, 0.1, 0.02, 1.0)));
    CHECK_THROWS_AS(parse_pair_function("pcf:r=0.1", unit), InvalidParameter);
    CHECK_THROWS_AS(parse_pair_function("pcf:r=-1,b=0.1", unit), InvalidParameter);
    CHECK_THROWS_AS(parse_pair_function("gauss:1", unit), InvalidParameter);
  }

  TEST_CASE("product density of an empty pattern is zero") {
    const std::vector<double> grid{0.05, 0.1, 0.2};
    for (const auto& pt : estimate_product_density(PointPattern2(unit, {}), grid, KernelFunction(KernelKind::box, 0.01))) {
      CHECK(pt.rho_hat == 0.0);
    }
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(estimate_product_density(PointPattern2(unit, {}), bad, KernelFunction(KernelKind::box, 0.01)),
                    InvalidParameter);
  }

  TEST_CASE("two points at distance d, evaluated at r = d") {
    const Window2 w(0, 2, 0, 3);
    const double d = 0.25, b = 0.05;
    const PointPattern2 pat(w, {{0.5, 0.5}, {0.5 + d, 0.5}});
    const std::vector<double> grid{d};
    const auto est = estimate_product_density(pat, grid, KernelFunction(KernelKind::box, b));
    const double expected = 2.0 * (1.0 / (2.0 * b)) / (2.0 * std::numbers::pi * d * w.area());
    CHECK(est.at(0).rho_hat == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("mean product density estimate matches the edge-affected expectation") {
    const double lambda = 200.0, r = 0.05, b = 0.01;
    const std::vector<double> grid{r};
    const KernelFunction k(KernelKind::box, b);
    const int reps = 2000;
    double sum = 0;
    const RngSeed base{77, 0};
    for (int i = 0; i < reps; ++i) {
      sum += estimate_product_density(simulate_homogeneous_poisson(lambda, unit, base.child(i)), grid, k)[0].rho_hat;
    }
    const double expected = oracle::box_e_theta(lambda, r, b);
    CHECK(std::abs(sum / reps / expected - 1.0) < 0.10);
  }

  TEST_CASE("distinct-index sums for tiny patterns") {
    const auto f = parse_pair_function("const", unit);
    const auto s0 = distinct_index_sums(PointPattern2(unit, {{0.3, 0.3}}), f);
    CHECK(s0.pairs == 0.0);
    CHECK(s0.triples == 0.0);
    CHECK(s0.quadruples == 0.0);
    CHECK(s0.squares == 0.0);
    for (std::size_t n : {2u, 3u}) {
      const auto s = distinct_index_sums(PointPattern2(unit, oracle::random_points(n, 5)), parse_pair_function("disk:2", unit));
      CHECK(std::abs(s.quadruples) < 1e-12);
    }
  }

  TEST_CASE("f = 1 gives tuple counts") {
    const auto f = parse_pair_function("const", unit);
    for (double n : {2.0, 4.0, 9.0, 20.0}) {
      const auto s = distinct_index_sums(PointPattern2(unit, oracle::random_points(std::size_t(n), 8)), f);
      CHECK(s.pairs == doctest::Approx(n * (n - 1)));
      CHECK(s.squares == doctest::Approx(n * (n - 1)));
      CHECK(s.triples == doctest::Approx(n * (n - 1) * (n - 2)));
      CHECK(s.quadruples == doctest::Approx(n * (n - 1) * (n - 2) * (n - 3)));
    }
  }

  TEST_CASE("fast distinct-index sums equal brute-force enumeration") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
      const double a = u(gen), c = u(gen), s = u(gen);
      const oracle::Fn h = [=](const Point2& x, const Point2& y) {
        return a * std::exp(-c * oracle::dist(x, y)) + s * (x.x + y.x) * (x.y + y.y);
      };
      const auto pts = oracle::random_points(10, 100 + trial);
      const auto fast = distinct_index_sums(PointPattern2(unit, pts), PairFunction(unit, h, "test"));
      const auto slow = oracle::brute_force_sums(pts, h);
      CHECK(rel_err(fast.pairs, slow.pairs) < 1e-9);
      CHECK(rel_err(fast.squares, slow.squares) < 1e-9);
      CHECK(rel_err(fast.triples, slow.triples) < 1e-9);
      CHECK(rel_err(fast.quadruples, slow.quadruples) < 1e-9);
      CHECK(rel_err(fast.pairs * fast.pairs, fast.quadruples + 4 * fast.triples + 2 * fast.squares) < 1e-9);
    }
  }

  TEST_CASE("pair table weighted sum matches the weighted double loop") {
    const auto pts = oracle::random_points(12, 4);
    const auto f = parse_pair_function("disk:0.4", unit);
    const PairTable table(PointPattern2(unit, pts), f);
    std::mt19937 gen(1);
    std::uniform_int_distribution<int> d(0, 3);
    std::vector<std::int64_t> w(pts.size());
    for (auto& x : w) x = d(gen);
    const oracle::Fn fn = [&](const Point2& a, const Point2& b) { return f(a, b); };
    CHECK(table.weighted(w) == doctest::Approx(oracle::weighted_pairs(pts, fn, w)).epsilon(1e-12));
    std::vector<std::int64_t> short_w(3, 1);
    CHECK_THROWS_AS(table.weighted(short_w), InvalidParameter);
  }
}
