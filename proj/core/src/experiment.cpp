#include "ppboot/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "ppboot/error.hpp"
#include "ppboot/io.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/parallel.hpp"
#include "ppboot/summation.hpp"
#include "ppboot/two_point.hpp"

namespace ppboot {
namespace {

// Reads members of one JSON object and rejects whatever was not asked for.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw InvalidParameter(fmt::format("{} must be a JSON object", where_));
  }

  const nlohmann::json* find(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const char* key, double fallback) {
    const auto* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw InvalidParameter(fmt::format("{}.{} must be a number", where_, key));
    return v->get<double>();
  }

  std::uint64_t count(const char* key, std::uint64_t fallback) {
    const auto* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      throw InvalidParameter(fmt::format("{}.{} must be a nonnegative integer", where_, key));
    }
    return v->get<std::uint64_t>();
  }

  std::string text(const char* key, const std::string& fallback) {
    const auto* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw InvalidParameter(fmt::format("{}.{} must be a string", where_, key));
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) throw InvalidParameter(fmt::format("{}: unknown key \"{}\"", where_, key));
    }
  }

 private:
  const nlohmann::json& obj_;
  std::string where_;
  std::set<std::string, std::less<>> seen_;
};

template <typename Fn>
auto as_config_error(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw InvalidParameter(e.what());
  }
}

IntegrationSpec parse_integration(const nlohmann::json& obj) {
  ObjectReader r(obj, "integration");
  const auto method = parse_integration_method(r.text("method", "quad"));
  IntegrationSpec spec = method == IntegrationMethod::monte_carlo ? IntegrationSpec::monte_carlo(200'000, {})
                                                                  : IntegrationSpec::quadrature(64);
  spec.nodes_per_axis = r.count("nodes_per_axis", spec.nodes_per_axis);
  spec.samples = r.count("samples", spec.samples);
  spec.inner_samples = r.count("inner_samples", spec.inner_samples);
  spec.seed = RngSeed{r.count("seed", 0), 0};
  r.finish();
  spec.validate();
  return spec;
}

VarianceComparisonConfig parse_variance_config(const nlohmann::json& doc) {
  ObjectReader r(doc, "config");
  r.find("experiment");
  VarianceComparisonConfig c;
  c.id = r.text("id", c.id);
  c.lambda = r.number("lambda", c.lambda);
  if (const auto* w = r.find("window")) c.window = as_config_error([&] { return parse_window2(*w); });
  c.f_spec = r.text("f", c.f_spec);
  c.scheme = parse_scheme(r.text("scheme", std::string(scheme_name(c.scheme))));
  c.reps = r.count("reps", c.reps);
  c.seed = r.count("seed", c.seed);
  if (const auto* i = r.find("integration")) c.integration = parse_integration(*i);
  r.finish();
  if (!std::isfinite(c.lambda) || c.lambda < 0.0) throw InvalidParameter("lambda must be finite and >= 0");
  if (c.reps < 2) throw InvalidParameter("reps must be >= 2");
  parse_pair_function(c.f_spec, c.window);
  return c;
}

CiSuiteConfig parse_ci_config(const nlohmann::json& doc) {
  ObjectReader r(doc, "config");
  r.find("experiment");
  CiSuiteConfig c;
  c.id = r.text("id", c.id);
  c.intensity = r.text("intensity", c.intensity);
  if (const auto* w = r.find("interval")) c.interval = as_config_error([&] { return parse_interval(*w); });
  c.h = r.number("h", c.h);
  c.alpha = r.number("alpha", c.alpha);
  c.reps = r.count("reps", c.reps);
  c.grid_steps = r.count("grid_steps", c.grid_steps);
  if (const auto* m = r.find("methods")) {
    if (!m->is_array() || m->empty()) throw InvalidParameter("config.methods must be a non-empty array");
    c.methods.clear();
    for (const auto& item : *m) {
      if (!item.is_string()) throw InvalidParameter("config.methods entries must be strings");
      c.methods.push_back(parse_band_method(item.get<std::string>()));
    }
  }
  c.mc_draws = r.count("mc_draws", c.mc_draws);
  c.t_star_max_count = static_cast<std::int64_t>(r.count("t_star_max_count", static_cast<std::uint64_t>(c.t_star_max_count)));
  c.seed = r.count("seed", c.seed);
  r.finish();
  parse_intensity(c.intensity, c.interval);
  if (!(c.h > 0.0)) throw InvalidParameter("h must be positive");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw InvalidParameter("alpha must lie in (0, 1]");
  if (c.reps < 100) throw InvalidParameter("reps must be >= 100");
  if (c.grid_steps == 0) throw InvalidParameter("grid_steps must be >= 1");
  if (c.mc_draws < 1000) throw InvalidParameter("mc_draws must be >= 1000");
  if (c.t_star_max_count < 1) throw InvalidParameter("t_star_max_count must be >= 1");
  return c;
}

double safe_ratio(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

std::string series_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("experiment") || !doc.at("experiment").is_string()) {
    throw InvalidParameter("config needs a string member \"experiment\"");
  }
  ExperimentConfig out;
  out.kind = doc.at("experiment").get<std::string>();
  if (out.kind == "variance_comparison") {
    out.variance = parse_variance_config(doc);
    out.source = to_json(*out.variance);
  } else if (out.kind == "ci_suite") {
    out.ci = parse_ci_config(doc);
    out.source = to_json(*out.ci);
  } else {
    throw InvalidParameter(fmt::format("unknown experiment \"{}\"", out.kind));
  }
  return out;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter(fmt::format("cannot open config '{}'", path));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(fmt::format("{}: invalid JSON: {}", path, e.what()));
  }
  return parse_experiment_config(doc);
}

nlohmann::json to_json(const VarianceComparisonConfig& c) {
  nlohmann::json integration = {{"method", std::string(method_name(c.integration.method))}};
  if (c.integration.method == IntegrationMethod::monte_carlo) {
    integration["samples"] = c.integration.samples;
    integration["inner_samples"] = c.integration.inner_samples;
    integration["seed"] = c.integration.seed.seed;
  } else {
    integration["nodes_per_axis"] = c.integration.nodes_per_axis;
  }
  return {{"experiment", "variance_comparison"},
          {"id", c.id},
          {"lambda", c.lambda},
          {"window", window_json(c.window).at("window")},
          {"f", c.f_spec},
          {"scheme", std::string(scheme_name(c.scheme))},
          {"reps", c.reps},
          {"seed", c.seed},
          {"integration", integration}};
}

nlohmann::json to_json(const CiSuiteConfig& c) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : c.methods) methods.push_back(std::string(band_method_name(m)));
  return {{"experiment", "ci_suite"},
          {"id", c.id},
          {"intensity", c.intensity},
          {"interval", window_json(c.interval).at("window")},
          {"h", c.h},
          {"alpha", c.alpha},
          {"reps", c.reps},
          {"grid_steps", c.grid_steps},
          {"methods", methods},
          {"mc_draws", c.mc_draws},
          {"t_star_max_count", c.t_star_max_count},
          {"seed", c.seed}};
}

nlohmann::json ResultRecord::to_json(bool include_timing) const {
  nlohmann::json out;
  out["experiment"] = experiment;
  out["id"] = id;
  out["input_digest"] = input_digest;
  out["seed"] = seed;
  out["config"] = config;
  out["results"] = results;
  out["errors"] = errors;
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [name, table] : series) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (double v : row) r.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(series_value(v)));
      rows.push_back(std::move(r));
    }
    s[name] = {{"columns", table.columns}, {"rows", std::move(rows)}};
  }
  out["series"] = std::move(s);
  if (include_timing) out["wall_clock_seconds"] = wall_clock_seconds;
  return out;
}

std::string ResultRecord::series_long_csv() const {
  std::string out = "series,row,column,value\n";
  for (const auto& [name, table] : series) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out += fmt::format("{},{},{},{}\n", name, r, table.columns[c], series_value(table.rows[r][c]));
      }
    }
  }
  return out;
}

ResultRecord run_variance_comparison(const VarianceComparisonConfig& config, std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  const auto f = parse_pair_function(config.f_spec, config.window);

  std::vector<double> theta(config.reps), limit(config.reps);
  const RngSeed base{config.seed, 0};
  parallel_for(config.reps, threads, [&](std::size_t r) {
    const auto pattern = simulate_homogeneous_poisson(config.lambda, config.window, base.child(r));
    theta[r] = two_point_statistic(pattern, f);
    limit[r] = bootstrap_variance_limit(pattern, f, config.scheme);
  });

  auto spec = config.integration;
  spec.threads = threads;
  const auto moments = s_moments_poisson(config.lambda, config.window, f, spec);
  const auto truth = true_variance_poisson(moments);
  const double predicted = expected_bootstrap_variance(moments, alpha_coefficients(std::nullopt, ResampleScheme::poissonized));
  const double predicted_error = 4.0 * moments.errors.s3 + 6.0 * moments.errors.s2;

  const auto theta_m = sample_moments(theta);
  const auto limit_m = sample_moments(limit);
  const double reps = static_cast<double>(config.reps);

  CompensatedSum fourth;
  for (double t : theta) {
    const double d = t - theta_m.mean;
    fourth.add(d * d * d * d);
  }
  const double m4 = fourth.value() / reps;
  const double var_se =
      std::sqrt(std::max(0.0, (m4 - theta_m.variance * theta_m.variance * (reps - 3.0) / (reps - 1.0)) / reps));
  const double limit_se = std::sqrt(limit_m.variance / reps);

  ResultRecord rec;
  rec.experiment = "variance_comparison";
  rec.id = config.id;
  rec.config = to_json(config);
  rec.input_digest = sha256_hex(rec.config.dump());
  rec.seed = config.seed;

  const auto put = [&](const std::string& key, double value, double error) {
    rec.results[key] = value;
    rec.errors[key] = error;
  };
  const double ratio_integrated = safe_ratio(predicted, truth.reduced);
  const double ratio_empirical = safe_ratio(limit_m.mean, theta_m.variance);
  const auto rel = [](double err, double v) { return v == 0.0 ? 0.0 : err / std::abs(v); };

  put("mc_mean_theta", theta_m.mean, std::sqrt(theta_m.variance / reps));
  put("mc_variance_theta", theta_m.variance, var_se);
  put("mean_bootstrap_limit", limit_m.mean, limit_se);
  put("s2", moments.s2, moments.errors.s2);
  put("s3", moments.s3, moments.errors.s3);
  put("s4", moments.s4, moments.errors.s4);
  put("e_theta", moments.e_theta, moments.errors.e_theta);
  put("integrated_true_variance", truth.value, truth.error);
  put("integrated_true_variance_reduced", truth.reduced, 4.0 * moments.errors.s3 + 2.0 * moments.errors.s2);
  put("poisson_cancellation", truth.cancellation, moments.errors.s4 + 2.0 * std::abs(moments.e_theta) * moments.errors.e_theta);
  put("integrated_bootstrap_limit", predicted, predicted_error);
  put("ratio_integrated", ratio_integrated,
      std::abs(ratio_integrated) * std::hypot(rel(predicted_error, predicted), rel(truth.error, truth.reduced)));
  put("ratio_empirical", ratio_empirical,
      std::abs(ratio_empirical) * std::hypot(rel(limit_se, limit_m.mean), rel(var_se, theta_m.variance)));
  put("s3_over_s2", safe_ratio(moments.s3, moments.s2),
      std::abs(safe_ratio(moments.s3, moments.s2)) * std::hypot(rel(moments.errors.s3, moments.s3), rel(moments.errors.s2, moments.s2)));
  put("factor3_gap", ratio_empirical == 0.0 ? 0.0 : ratio_empirical - 3.0, rec.errors["ratio_empirical"]);

  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ResultRecord run_ci_suite(const CiSuiteConfig& config, std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  const auto intensity = parse_intensity(config.intensity, config.interval);
  const auto grid = midpoint_grid(config.interval, config.grid_steps);

  ResultRecord rec;
  rec.experiment = "ci_suite";
  rec.id = config.id;
  rec.config = to_json(config);
  rec.input_digest = sha256_hex(rec.config.dump());
  rec.seed = config.seed;

  const auto example = simulate_inhomogeneous_poisson(intensity, config.interval, RngSeed{config.seed, 0});

  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    const auto method = config.methods[mi];
    const std::string name(band_method_name(method));
    BandOptions opts;
    opts.method = method;
    opts.mc_draws = config.mc_draws;
    opts.intensity = intensity;
    opts.seed = RngSeed{config.seed, 1000 + mi};
    opts.threads = threads;

    const auto band = confidence_band(example, config.h, config.alpha, grid, opts);
    Series band_series{{"x", "lambda_hat", "lo", "hi", "t_star", "flag"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      band_series.rows.push_back({band.grid[i], band.lambda_hat[i], band.lo[i], band.hi[i], band.t_star[i],
                                  static_cast<double>(band.flags[i])});
    }
    rec.series["band_" + name] = std::move(band_series);

    const auto table = coverage_experiment(intensity, config.interval, config.h, config.alpha, opts, config.reps, grid,
                                           RngSeed{config.seed, 1 + mi}, threads);
    Series cov{{"x", "coverage_true_lambda", "coverage_e_lambda_hat", "se_true_lambda", "se_e_lambda_hat", "edge"}, {}};
    double min_true = 1.0, min_mean = 1.0, se_true = 0.0, se_mean = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cov.rows.push_back({table.grid[i], table.coverage_true_lambda[i], table.coverage_e_lambda_hat[i],
                          table.se_true_lambda[i], table.se_e_lambda_hat[i], table.edge[i] ? 1.0 : 0.0});
      if (table.edge[i]) continue;
      if (table.coverage_true_lambda[i] < min_true) {
        min_true = table.coverage_true_lambda[i];
        se_true = table.se_true_lambda[i];
      }
      if (table.coverage_e_lambda_hat[i] < min_mean) {
        min_mean = table.coverage_e_lambda_hat[i];
        se_mean = table.se_e_lambda_hat[i];
      }
    }
    rec.series["coverage_" + name] = std::move(cov);
    rec.results["min_interior_coverage_true_lambda_" + name] = min_true;
    rec.errors["min_interior_coverage_true_lambda_" + name] = se_true;
    rec.results["min_interior_coverage_e_lambda_hat_" + name] = min_mean;
    rec.errors["min_interior_coverage_e_lambda_hat_" + name] = se_mean;
  }

  // Closed-form t* against its Monte Carlo counterpart for small counts.
  Series tstar{{"p", "t_closed", "t_mc", "t_mc_band_lo", "t_mc_band_hi", "agree"}, {}};
  std::size_t comparable = 0, agree = 0;
  for (std::int64_t p = 1; p <= config.t_star_max_count; ++p) {
    double closed = std::numeric_limits<double>::infinity();
    try {
      closed = t_star_closed_form({p, config.h, config.alpha}).t;
    } catch (const UnattainableLevel&) {
    }
    const auto mc = t_star_monte_carlo(p, config.h, config.alpha, config.mc_draws,
                                       RngSeed{config.seed, 5000}.child(static_cast<std::uint64_t>(p)), threads);
    const auto qb = t_star_quantile_band(p, config.h, config.alpha, config.mc_draws);
    // distinct counts can share a jump point up to rounding, hence the relative slack
    const bool ok = mc.t >= qb.lo * (1.0 - 1e-12) && mc.t <= qb.hi * (1.0 + 1e-12);
    ++comparable;
    agree += ok ? 1 : 0;
    tstar.rows.push_back({static_cast<double>(p), closed, mc.t, qb.lo, qb.hi, ok ? 1.0 : 0.0});
  }
  rec.series["t_star"] = std::move(tstar);
  const double frac = comparable == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(comparable);
  rec.results["t_star_agreement_fraction"] = frac;
  rec.errors["t_star_agreement_fraction"] = comparable == 0 ? 0.0 : std::sqrt(frac * (1.0 - frac) / static_cast<double>(comparable));

  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ResultRecord run_experiment(const ExperimentConfig& config, std::size_t threads) {
  if (config.variance) return run_variance_comparison(*config.variance, threads);
  if (config.ci) return run_ci_suite(*config.ci, threads);
  throw InvalidParameter("experiment config is empty");
}

}  // namespace ppboot
