// Command line driver for simulation, estimation, bootstrap and band experiments.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ppboot/bootstrap.hpp"
#include "ppboot/error.hpp"
#include "ppboot/experiment.hpp"
#include "ppboot/intensity.hpp"
#include "ppboot/io.hpp"
#include "ppboot/kernel.hpp"
#include "ppboot/moments.hpp"
#include "ppboot/pair_function.hpp"
#include "ppboot/two_point.hpp"

namespace {

using namespace ppboot;

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_data = 4;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::string out = "-";
  std::string config;
  bool timing = false;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(num(v));
}

// "lo:hi:count" (inclusive, evenly spaced) or "a,b,c".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0;
    std::size_t count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count == 0 || !in.eof()) {
      throw InvalidParameter(fmt::format("grid '{}' must be lo:hi:count", text));
    }
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParameter(fmt::format("grid entry '{}' is not a number", item));
    }
  }
  if (out.empty()) throw InvalidParameter("grid is empty");
  return out;
}

std::optional<std::filesystem::path> optional_path(const std::string& p) {
  if (p.empty()) return std::nullopt;
  return std::filesystem::path(p);
}

void reject_config(const Globals& g, const char* command) {
  if (!g.config.empty()) throw InvalidParameter(fmt::format("--config is not used by '{}'", command));
}

void emit_record(const Globals& g, const ResultRecord& rec, const std::string& series_out) {
  write_output(g.out, rec.to_json(g.timing).dump(2) + "\n");
  if (!series_out.empty()) write_output(series_out, rec.series_long_csv());
  if (g.timing) std::cerr << fmt::format("wall clock: {:.3f} s\n", rec.wall_clock_seconds);
}

int run(int argc, char** argv) {
  CLI::App app{"Bootstrap variance and intensity confidence band toolkit for spatial point patterns"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master random seed (default 1, or the config's seed)");
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on this")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file, '-' for stdout");
  app.add_option("--config", g.config, "Experiment config (JSON) for variance-comparison and ci-suite");
  app.add_flag("--timing", g.timing, "Include wall-clock seconds in experiment records");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a Poisson pattern (planar homogeneous, or 1-d thinned)");
  double sim_lambda = 100.0;
  std::string sim_window = "0,1,0,1", sim_intensity, sim_interval = "0,1", sim_window_out;
  sim->add_option("--lambda", sim_lambda, "Intensity of the planar process");
  sim->add_option("--window", sim_window, "x_min,x_max,y_min,y_max");
  sim->add_option("--intensity", sim_intensity, "1-d intensity const:<c> or linear:<a>,<b>; switches to 1-d");
  sim->add_option("--interval", sim_interval, "lo,hi of the 1-d domain");
  sim->add_option("--window-out", sim_window_out, "Window sidecar path (default: next to --out)");

  // pcf
  auto* pcf = app.add_subcommand("pcf", "Kernel estimate of the second-order product density");
  std::string pcf_input, pcf_window, pcf_grid = "0.01:0.25:25", pcf_kernel = "box";
  double pcf_bandwidth = 0.01;
  std::optional<double> pcf_rmin, pcf_rmax;
  std::optional<std::size_t> pcf_rsteps;
  pcf->add_option("--input", pcf_input, "Point CSV (x,y)")->required();
  pcf->add_option("--window", pcf_window, "Window sidecar (default: <input>.window.json)");
  pcf->add_option("--r", pcf_grid, "Distances: lo:hi:count or comma list");
  pcf->add_option("--rmin", pcf_rmin, "Smallest distance (with --rmax, --rsteps; overrides --r)");
  pcf->add_option("--rmax", pcf_rmax, "Largest distance");
  pcf->add_option("--rsteps", pcf_rsteps, "Number of distances")->check(CLI::PositiveNumber);
  pcf->add_option("--bandwidth", pcf_bandwidth, "Kernel bandwidth b");
  pcf->add_option("--kernel", pcf_kernel, "box or epa (epanechnikov)");

  // alpha-table
  auto* alpha = app.add_subcommand("alpha-table", "Alpha coefficients of the limiting bootstrap variance");
  std::size_t alpha_min = 2, alpha_max = 20;
  std::string alpha_scheme = "multinomial";
  alpha->add_option("--nmin,--n-min", alpha_min, "Smallest n");
  alpha->add_option("--nmax,--n-max", alpha_max, "Largest n");
  alpha->add_option("--scheme", alpha_scheme, "multinomial or poissonized");

  // boot-var
  auto* bv = app.add_subcommand("boot-var", "Monte Carlo bootstrap variance of a two-point statistic");
  std::string bv_input, bv_window, bv_f = "pcf:r=0.05,b=0.01,kernel=box", bv_scheme = "multinomial";
  std::size_t bv_draws = 10'000;
  bv->add_option("--input", bv_input, "Point CSV (x,y)")->required();
  bv->add_option("--window", bv_window, "Window sidecar (default: <input>.window.json)");
  bv->add_option("--f,--f-spec", bv_f, "zero | const[:c] | pcf:r=..,b=..[,kernel=..] | disk:R");
  bv->add_option("--scheme", bv_scheme, "multinomial or poissonized");
  bv->add_option("--draws,--N", bv_draws, "Bootstrap replications N");

  // moments
  auto* mom = app.add_subcommand("moments", "Moment integrals s2, s3, s4 under a homogeneous Poisson process");
  double mom_lambda = 100.0;
  std::string mom_window = "0,1,0,1", mom_f = "pcf:r=0.05,b=0.01,kernel=box", mom_method = "quad";
  std::size_t mom_samples = 200'000, mom_inner = 4, mom_nodes = 32;
  mom->add_option("--lambda", mom_lambda, "Process intensity");
  mom->add_option("--window", mom_window, "x_min,x_max,y_min,y_max");
  mom->add_option("--f,--f-spec", mom_f, "Pair function spec");
  mom->add_option("--method", mom_method, "quad or mc");
  mom->add_option("--samples", mom_samples, "mc: outer samples");
  mom->add_option("--inner-samples", mom_inner, "mc: partner samples per outer sample");
  mom->add_option("--nodes", mom_nodes, "quad: Gauss-Legendre nodes per axis");

  // ci-band
  auto* band = app.add_subcommand("ci-band", "Pointwise confidence band for a 1-d intensity");
  band->set_help_flag("--help", "Print this help message and exit");  // frees --h for the bandwidth
  std::string band_input, band_window, band_method = "closed", band_grid, band_intensity;
  double band_h = 0.05, band_alpha = 0.05;
  std::size_t band_steps = 20, band_draws = 10'000;
  band->add_option("--input", band_input, "Point CSV (x)")->required();
  band->add_option("--window", band_window, "Interval sidecar (default: <input>.window.json)");
  band->add_option("--h,--bandwidth", band_h, "Half-width h of the rectangular kernel");
  band->add_option("--alpha", band_alpha, "1 - confidence level");
  band->add_option("--method", band_method, "mc | closed | exact | oracle");
  band->add_option("--grid", band_grid, "Evaluation points: lo:hi:count or comma list");
  band->add_option("--grid-steps", band_steps, "Midpoint grid size when --grid is absent");
  band->add_option("--mc-draws", band_draws, "Resamples per count for --method mc");
  band->add_option("--intensity", band_intensity, "True intensity for --method oracle");

  // coverage
  auto* cov = app.add_subcommand("coverage", "Simulated pointwise coverage of a band method");
  cov->set_help_flag("--help", "Print this help message and exit");
  std::string cov_intensity = "linear:50,20", cov_interval = "0,1", cov_method = "exact";
  double cov_h = 0.05, cov_alpha = 0.05;
  std::size_t cov_reps = 1000, cov_steps = 20, cov_draws = 10'000;
  cov->add_option("--intensity,--lambda-spec", cov_intensity, "const:<c> or linear:<a>,<b>");
  cov->add_option("--interval", cov_interval, "lo,hi");
  cov->add_option("--h,--bandwidth", cov_h, "Half-width h of the rectangular kernel");
  cov->add_option("--alpha", cov_alpha, "1 - confidence level");
  cov->add_option("--method", cov_method, "mc | closed | exact | oracle");
  cov->add_option("--reps", cov_reps, "Simulated patterns");
  cov->add_option("--grid-steps", cov_steps, "Midpoint grid size");
  cov->add_option("--mc-draws", cov_draws, "Resamples per count for --method mc");

  // experiments
  auto* vc = app.add_subcommand("variance-comparison", "Bootstrap limit versus true variance experiment");
  auto* cs = app.add_subcommand("ci-suite", "Band coverage and t* comparison experiment");
  std::string series_out;
  std::optional<std::size_t> reps_override;
  for (auto* sub : {vc, cs}) {
    sub->add_option("--series-out", series_out, "Long-format CSV of the series (series,row,column,value)");
    sub->add_option("--reps", reps_override, "Override the config's replication count");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  if (*sim) {
    reject_config(g, "simulate");
    const RngSeed seed{g.seed_or(1), 0};
    std::string csv;
    nlohmann::json window;
    if (!sim_intensity.empty()) {
      const auto interval = parse_interval(std::string_view(sim_interval));
      const auto pattern = simulate_inhomogeneous_poisson(parse_intensity(sim_intensity, interval), interval, seed);
      csv = pattern_csv(pattern);
      window = window_json(interval);
    } else {
      const auto w = parse_window2(std::string_view(sim_window));
      const auto pattern = simulate_homogeneous_poisson(sim_lambda, w, seed);
      csv = pattern_csv(pattern);
      window = window_json(w);
    }
    write_output(g.out, csv);
    std::string sidecar = sim_window_out;
    if (sidecar.empty() && g.out != "-" && !g.out.empty()) sidecar = sidecar_path(g.out).string();
    if (!sidecar.empty()) write_output(sidecar, window.dump(2) + "\n");
    return 0;
  }

  if (*pcf) {
    reject_config(g, "pcf");
    const auto pattern = ingest_pattern2(pcf_input, optional_path(pcf_window));
    if (pcf_rmin || pcf_rmax || pcf_rsteps) {
      const auto def = parse_grid(pcf_grid);
      pcf_grid = fmt::format("{}:{}:{}", pcf_rmin.value_or(def.front()), pcf_rmax.value_or(def.back()),
                             pcf_rsteps.value_or(def.size()));
    }
    const auto grid = parse_grid(pcf_grid);
    const KernelFunction kernel(parse_kernel_kind(pcf_kernel), pcf_bandwidth);
    std::string out = "r,rho_hat\n";
    for (const auto& pt : estimate_product_density(pattern, grid, kernel)) {
      out += fmt::format("{},{}\n", num(pt.r), num(pt.rho_hat));
    }
    write_output(g.out, out);
    return 0;
  }

  if (*alpha) {
    reject_config(g, "alpha-table");
    if (alpha_min < 1 || alpha_max < alpha_min) throw InvalidParameter("need 1 <= --n-min <= --n-max");
    const auto scheme = parse_scheme(alpha_scheme);
    std::string out = "n,alpha2,alpha3,alpha4,alpha2_exact,alpha3_exact,alpha4_exact\n";
    const auto rational = [](const Rational& r) { return fmt::format("{}/{}", r.numerator(), r.denominator()); };
    for (std::size_t n = alpha_min; n <= alpha_max; ++n) {
      const auto a = alpha_coefficients(n, scheme);
      ExactAlphas exact{3, 1, 0};
      if (scheme == ResampleScheme::multinomial) exact = alpha_polynomials(n);
      out += fmt::format("{},{},{},{},{},{},{}\n", n, num(a.alpha2), num(a.alpha3), num(a.alpha4),
                         rational(exact.alpha2), rational(exact.alpha3), rational(exact.alpha4));
    }
    write_output(g.out, out);
    return 0;
  }

  if (*bv) {
    reject_config(g, "boot-var");
    const auto pattern = ingest_pattern2(bv_input, optional_path(bv_window));
    const auto f = parse_pair_function(bv_f, pattern.window());
    const auto scheme = parse_scheme(bv_scheme);
    const std::uint64_t seed = g.seed_or(1);
    const auto v = bootstrap_variance(pattern, f, bv_draws, scheme, RngSeed{seed, 0}, g.threads);
    const double limit = bootstrap_variance_limit(pattern, f, scheme);
    nlohmann::json rec = {{"n", pattern.size()},
                          {"f", f.descriptor()},
                          {"scheme", std::string(scheme_name(scheme))},
                          {"draws", v.draws},
                          {"seed", seed},
                          {"theta_hat", two_point_statistic(pattern, f)},
                          {"v_hat", json_number(v.value)},
                          {"v_hat_se", json_number(v.standard_error)},
                          {"bootstrap_mean", json_number(v.mean)},
                          {"limit", json_number(limit)},
                          {"limit_error", 0.0}};
    write_output(g.out, rec.dump(2) + "\n");
    return 0;
  }

  if (*mom) {
    reject_config(g, "moments");
    const auto w = parse_window2(std::string_view(mom_window));
    const auto f = parse_pair_function(mom_f, w);
    const auto method = parse_integration_method(mom_method);
    IntegrationSpec spec = method == IntegrationMethod::monte_carlo
                               ? IntegrationSpec::monte_carlo(mom_samples, RngSeed{g.seed_or(1), 0}, mom_inner)
                               : IntegrationSpec::quadrature(mom_nodes);
    spec.threads = g.threads;
    const auto m = s_moments_poisson(mom_lambda, w, f, spec);
    nlohmann::json rec = {{"lambda", m.lambda},
                          {"f", m.f_descriptor},
                          {"method", std::string(method_name(m.method))},
                          {"s2", m.s2},
                          {"s3", m.s3},
                          {"s4", m.s4},
                          {"e_theta", m.e_theta},
                          {"errors", {{"s2", m.errors.s2}, {"s3", m.errors.s3}, {"s4", m.errors.s4},
                                      {"e_theta", m.errors.e_theta}}}};
    if (method == IntegrationMethod::monte_carlo) rec["seed"] = spec.seed.seed;
    write_output(g.out, rec.dump(2) + "\n");
    return 0;
  }

  if (*band) {
    reject_config(g, "ci-band");
    const auto pattern = ingest_pattern1(band_input, optional_path(band_window));
    const auto grid = band_grid.empty() ? midpoint_grid(pattern.interval(), band_steps) : parse_grid(band_grid);
    BandOptions opts;
    opts.method = parse_band_method(band_method);
    opts.mc_draws = band_draws;
    opts.seed = RngSeed{g.seed_or(1), 0};
    opts.threads = g.threads;
    if (!band_intensity.empty()) opts.intensity = parse_intensity(band_intensity, pattern.interval());
    const auto b = confidence_band(pattern, band_h, band_alpha, grid, opts);
    std::string out = "x,lambda_hat,lo,hi,t_star,flag\n";
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
      out += fmt::format("{},{},{},{},{},{}\n", num(b.grid[i]), num(b.lambda_hat[i]), num(b.lo[i]), num(b.hi[i]),
                         num(b.t_star[i]), band_flag_text(b.flags[i]));
    }
    write_output(g.out, out);
    return 0;
  }

  if (*cov) {
    reject_config(g, "coverage");
    const auto interval = parse_interval(std::string_view(cov_interval));
    const auto intensity = parse_intensity(cov_intensity, interval);
    BandOptions opts;
    opts.method = parse_band_method(cov_method);
    opts.mc_draws = cov_draws;
    opts.intensity = intensity;
    opts.threads = 1;
    const auto grid = midpoint_grid(interval, cov_steps);
    const auto t = coverage_experiment(intensity, interval, cov_h, cov_alpha, opts, cov_reps, grid,
                                       RngSeed{g.seed_or(1), 0}, g.threads);
    std::string out = "x,coverage_true_lambda,se_true_lambda,coverage_e_lambda_hat,se_e_lambda_hat,edge\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      out += fmt::format("{},{},{},{},{},{}\n", num(t.grid[i]), num(t.coverage_true_lambda[i]),
                         num(t.se_true_lambda[i]), num(t.coverage_e_lambda_hat[i]), num(t.se_e_lambda_hat[i]),
                         t.edge[i] ? 1 : 0);
    }
    write_output(g.out, out);
    return 0;
  }

  if (*vc || *cs) {
    ExperimentConfig config;
    if (!g.config.empty()) {
      config = load_experiment_config(g.config);
    } else if (*vc) {
      config = parse_experiment_config({{"experiment", "variance_comparison"}});
    } else {
      config = parse_experiment_config({{"experiment", "ci_suite"}});
    }
    const char* wanted = *vc ? "variance_comparison" : "ci_suite";
    if (config.kind != wanted) {
      throw InvalidParameter(fmt::format("config describes '{}', but the subcommand runs '{}'", config.kind, wanted));
    }
    // Overrides go back through the strict parser so they are validated the same way.
    auto doc = config.source;
    if (g.seed) doc["seed"] = *g.seed;
    if (reps_override) doc["reps"] = *reps_override;
    config = parse_experiment_config(doc);
    emit_record(g, run_experiment(config, g.threads), series_out);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ppboot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ppboot::ErrorKind::invalid_parameter:
        return exit_config;
      case ppboot::ErrorKind::numerical:
        return exit_numerical;
      case ppboot::ErrorKind::data:
        return exit_data;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
