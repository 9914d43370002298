#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "ppboot/error.hpp"
#include "ppboot/experiment.hpp"
#include "ppboot/io.hpp"

using namespace ppboot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ppboot_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path write(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream(p) << content;
    return p;
  }
};

const char* unit_window = R"({"window": {"x_min": 0, "x_max": 1, "y_min": 0, "y_max": 1}})";

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("well-formed file with three rows") {
    TempDir dir;
    const auto csv = dir.write("pts.csv", "x,y\n0.1,0.2\n0.5,0.5\n0.9,0.3\n");
    dir.write("pts.window.json", unit_window);
    const auto pat = ingest_pattern2(csv);
    CHECK(pat.size() == 3);
    CHECK(pat.points()[2].x == 0.9);
    CHECK(pat.window().area() == 1.0);
  }

  TEST_CASE("duplicated row is rejected with its line") {
    TempDir dir;
    const auto csv = dir.write("dup.csv", "x,y\n0.1,0.2\n0.5,0.5\n0.1,0.2\n");
    dir.write("dup.window.json", unit_window);
    try {
      ingest_pattern(csv);
      FAIL("expected DuplicatePoint");
    } catch (const DuplicatePoint& e) {
      CHECK(e.row() == 4);
      CHECK(std::string(e.what()).find("pairwise different") != std::string::npos);
    }
  }

  TEST_CASE("point outside the window is rejected with its line") {
    TempDir dir;
    const auto csv = dir.write("out.csv", "x,y\n0.1,0.2\n1.5,0.5\n");
    const auto win = dir.write("w.json", unit_window);
    try {
      ingest_pattern(csv, win);
      FAIL("expected OutOfWindow");
    } catch (const OutOfWindow& e) {
      CHECK(e.row() == 3);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }

  TEST_CASE("malformed inputs are data errors") {
    TempDir dir;
    dir.write("a.window.json", unit_window);
    CHECK_THROWS_AS(ingest_pattern(dir.write("a.csv", "lon,lat\n0.1,0.2\n")), DataError);
    dir.write("b.window.json", unit_window);
    CHECK_THROWS_AS(ingest_pattern(dir.write("b.csv", "x,y\n0.1,abc\n")), DataError);
    dir.write("c.window.json", R"({"window": {"x_min": 0, "x_max": 1, "y_min": 0, "y_max": 1, "z": 3}})");
    CHECK_THROWS_AS(ingest_pattern(dir.write("c.csv", "x,y\n0.1,0.2\n")), DataError);
    CHECK_THROWS_AS(ingest_pattern(dir.write("d.csv", "x,y\n0.1,0.2\n")), DataError);  // no sidecar
    dir.write("e.window.json", R"({"window": {"x_min": 0, "x_max": 2}})");
    const auto one = ingest_pattern1(dir.write("e.csv", "x\n1.5\n0.25\n"));
    CHECK(one.size() == 2);
    CHECK_THROWS_AS(ingest_pattern2(dir.path / "e.csv"), DataError);
  }

  TEST_CASE("digest and number formatting") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-20) == "1e-20");
  }

  TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(parse_experiment_config({{"experiment", "variance_comparison"}}));
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "variance_comparison"}, {"lamda", 3}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "variance_comparison"}, {"reps", "ten"}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "variance_comparison"}, {"reps", -3}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "variance_comparison"}, {"f", "nope"}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "ci_suite"}, {"methods", {"exact", "magic"}}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "ci_suite"}, {"alpha", 0}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "ci_suite"}, {"interval", {{"x_min", 1}, {"x_max", 0}}}}),
                    InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config({{"experiment", "other"}}), InvalidParameter);
    CHECK_THROWS_AS(parse_experiment_config(nlohmann::json::array()), InvalidParameter);

    const auto c = parse_experiment_config(
        {{"experiment", "variance_comparison"}, {"integration", {{"method", "mc"}, {"samples", 5000}}}});
    REQUIRE(c.variance);
    CHECK(c.variance->integration.method == IntegrationMethod::monte_carlo);
    CHECK(c.variance->integration.samples == 5000);
    // the echo parses back to the same document
    CHECK(parse_experiment_config(c.source).source == c.source);
  }

  TEST_CASE("variance comparison with f = 0 is all zero") {
    VarianceComparisonConfig cfg;
    cfg.f_spec = "zero";
    cfg.reps = 20;
    cfg.integration = IntegrationSpec::quadrature(8);
    const auto rec = run_variance_comparison(cfg);
    CHECK_FALSE(rec.results.empty());
    for (const auto& [key, value] : rec.results) {
      CAPTURE(key);
      CHECK(value == 0.0);
      CHECK(rec.errors.at(key) == 0.0);
    }
  }

  TEST_CASE("variance comparison reruns are byte identical across thread counts") {
    VarianceComparisonConfig cfg;
    cfg.reps = 200;
    cfg.integration = IntegrationSpec::quadrature(16);
    const auto a = run_variance_comparison(cfg, 1).to_json().dump();
    const auto b = run_variance_comparison(cfg, 3).to_json().dump();
    CHECK(a == b);
    cfg.seed = 2;
    CHECK(run_variance_comparison(cfg, 1).to_json().dump() != a);
  }

  TEST_CASE("variance comparison reproduces the factor of three") {
    const auto rec = run_variance_comparison(VarianceComparisonConfig{}, 2);
    CHECK(rec.results.at("ratio_integrated") > 2.5);
    CHECK(rec.results.at("ratio_integrated") < 3.5);
    CHECK(rec.results.at("ratio_empirical") > 2.5);
    CHECK(rec.results.at("ratio_empirical") < 3.5);
    for (const auto& [key, _] : rec.results) CHECK(rec.errors.count(key) == 1);
  }

  TEST_CASE("ci suite bands, t* agreement and coverage") {
    CiSuiteConfig cfg;
    cfg.reps = 500;
    cfg.methods = {BandMethod::exact_poisson, BandMethod::bootstrap_closed_form, BandMethod::bootstrap_mc};
    cfg.mc_draws = 2000;
    cfg.t_star_max_count = 15;
    const auto rec = run_ci_suite(cfg, 2);
    CHECK(rec.results.at("t_star_agreement_fraction") == 1.0);
    const auto& cov = rec.series.at("coverage_exact");
    for (const auto& row : cov.rows) {
      if (row[5] != 0.0) continue;  // edge
      CHECK(row[1] >= 0.95 - 3.0 * row[3]);
    }

    cfg.alpha = 1.0;
    cfg.reps = 100;
    const auto flat = run_ci_suite(cfg, 1);
    for (const char* name : {"band_closed", "band_mc"}) {
      for (const auto& row : flat.series.at(name).rows) {
        CHECK(row[2] == row[1]);
        CHECK(row[3] == row[1]);
      }
    }
    const auto csv = flat.series_long_csv();
    CHECK(csv.rfind("series,row,column,value\n", 0) == 0);
  }
}
