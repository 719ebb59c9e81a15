#include "fodsid/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "fodsid/campaign.hpp"
#include "fodsid/certify.hpp"
#include "fodsid/config.hpp"
#include "fodsid/error.hpp"
#include "fodsid/forecast.hpp"
#include "fodsid/ident.hpp"
#include "fodsid/io.hpp"
#include "fodsid/linalg.hpp"
#include "fodsid/sim.hpp"

namespace fodsid {
namespace fs = std::filesystem;

void configure_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_logger_mt("fodsid");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FODSID_LOG")) {
    const std::string v(env);
    if (v == "error") level = spdlog::level::err;
    else if (v == "warn") level = spdlog::level::warn;
    else if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
  }
  spdlog::set_level(level);
}

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool force = false;
  bool strict = false;
};

/// Signals a result that is only fatal under --strict.
struct Degenerate {
  std::string message;
};

struct Outputs {
  fs::path dir;

  Outputs(const RunConfig& config, std::initializer_list<const char*> names) : dir(config.out) {
    for (const char* name : names) {
      const fs::path p = dir / name;
      if (fs::exists(p) && !config.force) {
        throw ConfigError("output file '" + p.string() + "' exists; pass --force to overwrite",
                          p.string());
      }
    }
    fs::create_directories(dir);
  }

  void write(const char* name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write '" + p.string() + "'", p.string());
    os << content;
  }

  void write_json(const char* name, const json& j) const { write(name, j.dump(2) + "\n"); }
};

void add_provenance(json& j, const RunConfig& config) {
  j["config"] = to_json(config);
  j["tool_version"] = FODSID_VERSION;
  if (config.timestamp) {
    const auto now = std::chrono::system_clock::now();
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
}

FracSystem require_system(const RunConfig& config) {
  if (config.system.empty()) throw ConfigError("no system description configured (key 'system')");
  return load_system(config.system);
}

Vector initial_state(const std::optional<std::vector<double>>& x0, int n, const char* key) {
  if (!x0) return Vector::Ones(n);
  if (static_cast<int>(x0->size()) != n) {
    throw ConfigError(std::string(key) + " must have n = " + std::to_string(n) + " entries");
  }
  return Eigen::Map<const Vector>(x0->data(), n);
}

std::optional<Degenerate> cmd_simulate(const RunConfig& config, std::ostream& out) {
  const FracSystem system = require_system(config);
  const auto& sc = config.simulate;
  const Vector x0 = initial_state(sc.x0, system.n(), "simulate.x0");
  const Outputs outputs(config, {"trajectory.csv", "trajectory.meta.json"});

  const NoiseSource source{config.master_seed, 0};
  std::optional<Matrix> inputs;
  if (sc.inputs) {
    if (!system.B) throw ConfigError("simulate.inputs is set but the system has no B matrix");
    inputs = draw_inputs(source, sc.K, system.m(), sc.sigma_u);
  }
  Trajectory traj;
  if (sc.generator == "exact") {
    traj = simulate_exact(system, x0, sc.K, source, inputs, config.convention());
  } else {
    traj = simulate_augmented(augment(system, sc.p, config.convention()), x0, sc.K, source,
                              system.sigma, inputs);
  }
  if (inputs) traj.meta.sigma_u = sc.sigma_u;

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  outputs.write("trajectory.csv", csv.str());
  json meta = trajectory_meta_json(traj.meta);
  meta["K"] = traj.K();
  meta["n"] = traj.n();
  add_provenance(meta, config);
  outputs.write_json("trajectory.meta.json", meta);
  out << "wrote " << (outputs.dir / "trajectory.csv").string() << " (" << traj.K()
      << " transitions)\n";
  return std::nullopt;
}

std::optional<Degenerate> cmd_identify(const RunConfig& config, std::ostream& out) {
  const auto& ic = config.identify;
  const std::string path =
      ic.trajectory.empty() ? (fs::path(config.out) / "trajectory.csv").string() : ic.trajectory;
  if (!fs::exists(path)) throw ConfigError("trajectory file '" + path + "' not found", path);
  const Trajectory traj = read_trajectory_csv(path);
  std::optional<FracSystem> system;
  if (!config.system.empty()) system = load_system(config.system);
  if (system && system->n() != traj.n()) {
    throw DataError("trajectory has " + std::to_string(traj.n()) + " states, system has " +
                        std::to_string(system->n()),
                    path);
  }
  const Outputs outputs(config, {"estimate.json"});

  OlsOptions opts;
  opts.discard_initial = ic.discard_initial;
  OlsEstimate est;
  if (ic.mode == "with_inputs") {
    if (!system || !system->B) {
      throw ConfigError("identify.mode with_inputs needs a system description with B");
    }
    est = ols_fit_with_inputs(traj, ic.p, *augment(*system, ic.p, config.convention()).Btilde, opts);
  } else {
    opts.structured = ic.mode == "structured";
    est = ols_fit(traj, ic.p, opts);
  }

  json j;
  j["Atilde_hat"] = matrix_to_json(est.Atilde_hat);
  j["p"] = est.p;
  j["n"] = est.n;
  j["mode"] = std::string(to_string(est.mode));
  j["residual_rss"] = est.residual_rss;
  j["min_singular_value"] = est.regressor_min_singular_value;
  j["degenerate"] = est.degenerate;
  j["rank"] = est.rank;
  j["K_used"] = est.K_used;
  if (system) {
    const AugmentedSystem truth = augment(*system, ic.p, config.convention());
    const SubmatrixErrorReport report = submatrix_error_report(est, truth);
    j["truth"] = {{"operator_norm_error", report.full_error},
                  {"block_errors", report.block_errors}};
  }
  add_provenance(j, config);
  outputs.write_json("estimate.json", j);
  out << "wrote " << (outputs.dir / "estimate.json").string() << '\n';
  if (est.degenerate) {
    return Degenerate{"regressors are rank deficient (rank " + std::to_string(est.rank) + ")"};
  }
  return std::nullopt;
}

std::optional<Degenerate> cmd_certify(const RunConfig& config, std::ostream& out) {
  const FracSystem system = require_system(config);
  const auto& cc = config.certify;
  const double sigma = cc.sigma.value_or(system.sigma);
  int p = cc.p;
  Matrix Atilde;
  std::string source = "truth";
  if (cc.estimate) {
    const json est = load_json_file(*cc.estimate);
    if (!est.contains("Atilde_hat") || !est.contains("p")) {
      throw DataError("estimate file lacks Atilde_hat or p", *cc.estimate);
    }
    Atilde = matrix_from_json(est.at("Atilde_hat"), "Atilde_hat");
    p = est.at("p").get<int>();
    source = "estimate";
  }
  const AugmentedSystem aug = augment(system, p, config.convention());
  if (!cc.estimate) Atilde = aug.Atilde;
  if (Atilde.rows() != aug.d() || Atilde.cols() != aug.d()) {
    throw DataError("estimate dimension does not match the system's augmented dimension");
  }
  const Outputs outputs(config, {"certificate.json"});

  BoundCertificate cert;
  if (cc.variant == "with_inputs") {
    if (!aug.Btilde) throw ConfigError("certify.variant with_inputs needs a system with B");
    cert = evaluate_bound_with_inputs(Atilde, *aug.Btilde, cc.K, cc.k, cc.delta, sigma, cc.sigma_u,
                                      config.constants);
  } else {
    cert = evaluate_bound(Atilde, cc.K, cc.k, cc.delta, sigma, config.constants);
  }
  const SpectralRadius sr = spectral_radius(Atilde);

  json j;
  j["variant"] = std::string(to_string(cert.variant));
  j["source"] = source;
  j["d"] = cert.d;
  j["K"] = cert.K;
  j["k"] = cert.k;
  j["delta"] = cert.delta;
  j["sigma"] = cert.sigma;
  j["sigma_u"] = cert.sigma_u;
  j["C_const"] = cert.constants.C_const;
  j["c_const"] = cert.constants.c_const;
  j["gramian_index"] = std::string(to_string(cert.constants.gramian_index));
  j["sigma_in_C"] = cert.constants.sigma_in_C;
  j["lambda_min_Wk"] = cert.lambda_min_Wk;
  j["logdet_ratio"] = cert.logdet_ratio;
  j["trace_WK"] = cert.trace_WK;
  j["log_term"] = cert.log_term;
  j["bound_value"] = cert.bound_value;  // null when invalid
  j["burn_in_satisfied"] = cert.burn_in_satisfied;
  j["valid"] = cert.valid;
  j["spectral_radius"] = sr.rho;
  j["marginally_stable"] = sr.marginally_stable;
  add_provenance(j, config);
  outputs.write_json("certificate.json", j);
  out << "wrote " << (outputs.dir / "certificate.json").string() << '\n';
  if (!cert.valid) return Degenerate{"small-ball Gramian is singular; certificate invalid"};
  return std::nullopt;
}

std::optional<Degenerate> cmd_montecarlo(const RunConfig& config, std::ostream& out) {
  const auto& mc = config.montecarlo;
  CampaignConfig cc;
  cc.system = require_system(config);
  cc.p = mc.p;
  cc.K_list = mc.K_list;
  cc.trials = mc.trials;
  cc.delta = mc.delta;
  cc.constants = config.constants;
  cc.master_seed = config.master_seed;
  cc.threads = config.threads;
  cc.x0 = initial_state(mc.x0, cc.system.n(), "montecarlo.x0");
  cc.ols.structured = mc.structured;
  cc.convention = config.convention();
  const Outputs outputs(config, {"campaign.csv", "campaign.meta.json"});

  const CampaignResult result = monte_carlo_campaign(cc);
  std::ostringstream csv;
  write_campaign_csv(csv, result);
  outputs.write("campaign.csv", csv.str());

  json meta;
  meta["spectral_radius"] = result.spectral.rho;
  meta["marginally_stable"] = result.spectral.marginally_stable;
  meta["loglog_slope"] = loglog_slope(result.rows);
  json rows = json::array();
  int failed = 0;
  for (const auto& r : result.rows) {
    rows.push_back({{"K", r.K}, {"k", r.k}, {"burn_in", r.burn_in}, {"failures", r.failures}});
    failed += r.failed_trials;
  }
  meta["rows"] = rows;
  add_provenance(meta, config);
  outputs.write_json("campaign.meta.json", meta);
  out << "wrote " << (outputs.dir / "campaign.csv").string() << '\n';
  if (failed > 0) return Degenerate{std::to_string(failed) + " trials failed"};
  return std::nullopt;
}

std::optional<Degenerate> cmd_forecast(const RunConfig& config, std::ostream& out) {
  const auto& fc = config.forecast;
  if (fc.series.empty()) throw ConfigError("no series file configured (key 'forecast.series')");
  SeriesOptions so;
  so.delimiter = fc.delimiter[0];
  so.channel_columns = fc.channel_columns;
  if (fc.max_rows) so.max_rows = static_cast<std::size_t>(*fc.max_rows);
  if (!fs::exists(fc.series)) throw ConfigError("series file '" + fc.series + "' not found", fc.series);
  const Series series = load_series(fc.series, so);
  const int n = series.channels();
  Vector alpha = Vector::Constant(n, 0.5);
  if (fc.alpha) {
    if (static_cast<int>(fc.alpha->size()) != n) {
      throw ConfigError("forecast.alpha needs one order per channel (" + std::to_string(n) + ")");
    }
    alpha = Eigen::Map<const Vector>(fc.alpha->data(), n);
  }
  const Outputs outputs(config, {"predictions.csv", "sweep.csv", "forecast.meta.json"});

  ForecastOptions fo;
  fo.window_size = fc.window_size;
  fo.p = fc.p.value_or(0);
  fo.sliding = fc.sliding;
  fo.zscore = fc.zscore;
  fo.threads = config.threads;
  fo.convention = config.convention();
  const WindowedForecast result = windowed_fit_predict(series, alpha, fo);
  const std::vector<SweepRow> sweep = window_size_sweep(series, alpha, fc.window_sizes, fo);

  std::ostringstream pred;
  write_predictions_csv(pred, series, result);
  outputs.write("predictions.csv", pred.str());
  std::ostringstream sw;
  write_sweep_csv(sw, sweep);
  outputs.write("sweep.csv", sw.str());

  int degenerate = 0;
  json windows = json::array();
  for (std::size_t w = 0; w < result.per_window_estimates.size(); ++w) {
    const auto& est = result.per_window_estimates[w];
    degenerate += est.degenerate ? 1 : 0;
    windows.push_back({{"rank", est.rank},
                       {"degenerate", est.degenerate},
                       {"residual_rss", est.residual_rss},
                       {"A_hat", matrix_to_json(result.per_window_A[w])}});
  }
  json sweep_rows = json::array();
  for (const auto& r : sweep) {
    sweep_rows.push_back({{"window_size", r.window_size},
                          {"p", r.p},
                          {"rmse", r.rmse},
                          {"persistence_rmse", r.persistence_rmse},
                          {"num_windows", r.num_windows},
                          {"error", r.error.empty() ? json(nullptr) : json(r.error)}});
  }
  json meta;
  meta["channels"] = series.names;
  meta["samples"] = series.length();
  meta["window_size"] = result.window_size;
  meta["p"] = result.p;
  meta["num_windows"] = result.metrics.num_windows;
  meta["num_predictions"] = result.metrics.num_predictions;
  meta["rmse_total"] = result.metrics.rmse_total;
  meta["rmse_per_channel"] = result.metrics.rmse_per_channel;
  meta["persistence_rmse_total"] = result.metrics.persistence_rmse_total;
  meta["persistence_rmse_per_channel"] = result.metrics.persistence_rmse_per_channel;
  meta["degenerate_windows"] = degenerate;
  meta["windows"] = windows;
  meta["sweep"] = sweep_rows;
  add_provenance(meta, config);
  outputs.write_json("forecast.meta.json", meta);
  out << "wrote " << (outputs.dir / "predictions.csv").string() << " ("
      << result.metrics.num_windows << " windows)\n";
  if (degenerate > 0) {
    return Degenerate{std::to_string(degenerate) + " window fits are rank deficient"};
  }
  return std::nullopt;
}

int report(std::ostream& err, int code, const char* kind, const std::string& message,
           const std::string& path = {}, std::optional<std::size_t> row = std::nullopt) {
  json e;
  e["code"] = code;
  e["kind"] = kind;
  e["message"] = message;
  if (!path.empty()) e["path"] = path;
  if (row) e["row"] = *row;
  err << json{{"error", e}}.dump() << '\n';
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Fractional-order system identification toolkit", "fodsid"};
  app.set_version_flag("--version", FODSID_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", flags.out, "output directory (overrides config 'out')");
  app.add_option("--seed", flags.seed, "master seed (overrides config 'master_seed')");
  app.add_option("--threads", flags.threads, "worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--force", flags.force, "overwrite existing output files");
  app.add_flag("--strict", flags.strict, "treat numerical degeneracy as fatal (exit 4)");

  using Command = std::optional<Degenerate> (*)(const RunConfig&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands{
      {app.add_subcommand("simulate", "simulate a trajectory"), cmd_simulate},
      {app.add_subcommand("identify", "fit A~ by least squares"), cmd_identify},
      {app.add_subcommand("certify", "evaluate the sample-complexity bound"), cmd_certify},
      {app.add_subcommand("montecarlo", "empirical error versus bound campaign"), cmd_montecarlo},
      {app.add_subcommand("forecast", "windowed OLS forecasting of a CSV series"), cmd_forecast},
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    return report(err, kExitConfig, "config", e.what());
  }

  try {
    RunConfig config = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    if (flags.out) config.out = *flags.out;
    if (flags.seed) config.master_seed = *flags.seed;
    if (flags.threads) config.threads = *flags.threads;
    if (flags.force) config.force = true;
    if (flags.strict) config.strict = true;

    for (const auto& [sub, command] : commands) {
      if (!sub->parsed()) continue;
      const auto degenerate = command(config, out);
      if (degenerate) {
        if (config.strict) return report(err, kExitDegenerate, "degenerate", degenerate->message);
        spdlog::warn("{}", degenerate->message);
      }
      return kExitOk;
    }
    return report(err, kExitConfig, "config", "no subcommand given");
  } catch (const ConfigError& e) {
    return report(err, kExitConfig, "config", e.what(), e.path());
  } catch (const DataError& e) {
    return report(err, kExitData, "data", e.what(), e.path(), e.row());
  } catch (const DomainError& e) {
    return report(err, kExitData, "domain", e.what());
  } catch (const fs::filesystem_error& e) {
    return report(err, kExitConfig, "config", e.what(), e.path1().string());
  } catch (const std::exception& e) {
    return report(err, kExitFailure, "internal", e.what());
  }
}

}  // namespace fodsid
