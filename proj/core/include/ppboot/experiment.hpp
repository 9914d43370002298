#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppboot/bootstrap.hpp"
#include "ppboot/geometry.hpp"
#include "ppboot/intensity.hpp"
#include "ppboot/moments.hpp"

namespace ppboot {

/// Bootstrap-versus-truth comparison under a homogeneous Poisson process.
struct VarianceComparisonConfig {
  std::string id = "variance_comparison";
  double lambda = 100.0;
  Window2 window = Window2::unit_square();
  std::string f_spec = "pcf:r=0.02,b=0.002,kernel=box";
  ResampleScheme scheme = ResampleScheme::poissonized;
  std::size_t reps = 2000;
  std::uint64_t seed = 1;
  IntegrationSpec integration = IntegrationSpec::quadrature(64);
};

/// Coverage and t* comparison for intensity bands on an interval.
struct CiSuiteConfig {
  std::string id = "ci_suite";
  std::string intensity = "linear:50,20";
  Interval1 interval = Interval1::unit();
  double h = 0.05;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::size_t grid_steps = 20;
  std::vector<BandMethod> methods{BandMethod::exact_poisson, BandMethod::bootstrap_closed_form};
  std::size_t mc_draws = 10'000;
  std::int64_t t_star_max_count = 20;  // t* table covers p = 1..t_star_max_count
  std::uint64_t seed = 1;
};

/// Parsed experiment document; `kind` selects which of the two configs is set.
struct ExperimentConfig {
  std::string kind;
  std::optional<VarianceComparisonConfig> variance;
  std::optional<CiSuiteConfig> ci;
  nlohmann::json source;  // the validated document, echoed into results
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw InvalidParameter.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

nlohmann::json to_json(const VarianceComparisonConfig& config);
nlohmann::json to_json(const CiSuiteConfig& config);

/// Column-oriented table; all columns have equal length.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ResultRecord {
  std::string experiment;
  std::string id;
  std::string input_digest;  // SHA-256 of the canonical config echo
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::map<std::string, double> results;
  std::map<std::string, double> errors;  // keyed like `results`
  std::map<std::string, Series> series;
  double wall_clock_seconds = 0.0;

  /// Timing is left out by default so identical runs serialize identically.
  nlohmann::json to_json(bool include_timing = false) const;
  /// series,row,column,value
  std::string series_long_csv() const;
};

ResultRecord run_variance_comparison(const VarianceComparisonConfig& config, std::size_t threads = 1);
ResultRecord run_ci_suite(const CiSuiteConfig& config, std::size_t threads = 1);
ResultRecord run_experiment(const ExperimentConfig& config, std::size_t threads = 1);

}  // namespace ppboot
