#ifndef FODSID_CONFIG_HPP
#define FODSID_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fodsid/certify.hpp"
#include "fodsid/core.hpp"
#include "fodsid/io.hpp"

namespace fodsid {

inline constexpr int kConfigFormatVersion = 1;

struct SimulateConfig {
  std::optional<std::vector<double>> x0;  // default: all ones
  int K = 100;
  std::string generator = "exact";        // "exact" | "augmented"
  int p = 2;
  bool inputs = false;
  double sigma_u = 1.0;
};

struct IdentifyConfig {
  std::string trajectory;                 // default: <out>/trajectory.csv
  int p = 2;
  std::string mode = "full";              // "full" | "structured" | "with_inputs"
  bool discard_initial = false;
};

struct CertifyConfig {
  int K = 2000;
  int k = 100;
  double delta = 0.1;
  int p = 2;
  std::string variant = "autonomous";     // "autonomous" | "with_inputs"
  std::optional<double> sigma;            // default: the system's sigma
  double sigma_u = 1.0;
  std::optional<std::string> estimate;    // certify an estimate JSON instead of the truth
};

struct MonteCarloConfig {
  int p = 2;
  std::vector<int> K_list{250, 500, 1000, 2000, 4000};
  int trials = 100;
  double delta = 0.1;
  std::optional<std::vector<double>> x0;
  bool structured = false;
};

struct ForecastConfig {
  std::string series;
  std::string delimiter = ",";
  std::vector<std::string> channel_columns;
  std::optional<int> max_rows;
  std::optional<std::vector<double>> alpha;  // default: 0.5 per channel
  std::optional<int> p;                       // default: window_size - 2
  int window_size = 10;
  std::vector<int> window_sizes{10, 15, 25, 30};
  bool sliding = false;
  bool zscore = false;
};

/// Every subcommand's parameters. Unknown keys are rejected at every level
/// and relative paths are resolved against the config file's directory.
struct RunConfig {
  int format_version = kConfigFormatVersion;
  std::string system;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: available parallelism
  bool strict = false;
  bool force = false;
  bool timestamp = false;
  std::string out = "out";
  std::string a0_convention = "derivation";  // "derivation" | "as_printed"
  BoundConstants constants;
  SimulateConfig simulate;
  IdentifyConfig identify;
  CertifyConfig certify;
  MonteCarloConfig montecarlo;
  ForecastConfig forecast;

  A0Convention convention() const;
};

json to_json(const RunConfig& config);

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig config_from_json(const json& j, const std::string& base_dir = {});

RunConfig load_config(const std::string& path);

}  // namespace fodsid

#endif  // FODSID_CONFIG_HPP
