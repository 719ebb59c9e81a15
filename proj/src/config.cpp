#include "fodsid/config.hpp"

#include <filesystem>
#include <set>
#include <type_traits>

#include "fodsid/error.hpp"

namespace fodsid {
namespace {

template <typename T>
struct is_vector : std::false_type {};
template <typename T>
struct is_vector<std::vector<T>> : std::true_type {};

template <typename T>
struct is_optional : std::false_type {};
template <typename T>
struct is_optional<std::optional<T>> : std::true_type {};

template <typename T>
T convert(const json& v, const std::string& where) {
  auto fail = [&](const char* expected) {
    throw ConfigError(where + ": expected " + expected + ", got " + v.dump());
  };
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail("a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) fail("a non-negative integer");
    return v.get<std::uint64_t>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail("an integer");
    return v.get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail("a number");
    return v.get<T>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail("a string");
    return v.get<std::string>();
  } else if constexpr (is_vector<T>::value) {
    if (!v.is_array()) fail("a list");
    T out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(convert<typename T::value_type>(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
  } else if constexpr (is_optional<T>::value) {
    if (v.is_null()) return std::nullopt;
    return convert<typename T::value_type>(v, where);
  } else {
    static_assert(!sizeof(T), "unsupported config field type");
  }
}

class ObjectReader {
public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_label() + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (j_.contains(key)) out = convert<T>(j_.at(key), qualified(key));
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string qualified(const std::string& key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown config key '" + qualified(key) + "'");
    }
  }

private:
  std::string where_label() const { return where_.empty() ? "config" : where_; }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

A0Convention RunConfig::convention() const {
  return a0_convention == "as_printed" ? A0Convention::as_printed : A0Convention::derivation;
}

json to_json(const RunConfig& c) {
  json j;
  j["format_version"] = c.format_version;
  j["system"] = c.system;
  j["master_seed"] = c.master_seed;
  j["threads"] = c.threads;
  j["strict"] = c.strict;
  j["force"] = c.force;
  j["timestamp"] = c.timestamp;
  j["out"] = c.out;
  j["a0_convention"] = c.a0_convention;
  j["constants"] = {{"C_const", c.constants.C_const},
                    {"c_const", c.constants.c_const},
                    {"gramian_index", std::string(to_string(c.constants.gramian_index))},
                    {"sigma_in_C", c.constants.sigma_in_C}};
  j["simulate"] = {{"x0", opt(c.simulate.x0)},       {"K", c.simulate.K},
                   {"generator", c.simulate.generator}, {"p", c.simulate.p},
                   {"inputs", c.simulate.inputs},      {"sigma_u", c.simulate.sigma_u}};
  j["identify"] = {{"trajectory", c.identify.trajectory},
                   {"p", c.identify.p},
                   {"mode", c.identify.mode},
                   {"discard_initial", c.identify.discard_initial}};
  j["certify"] = {{"K", c.certify.K},         {"k", c.certify.k},
                  {"delta", c.certify.delta}, {"p", c.certify.p},
                  {"variant", c.certify.variant}, {"sigma", opt(c.certify.sigma)},
                  {"sigma_u", c.certify.sigma_u}, {"estimate", opt(c.certify.estimate)}};
  j["montecarlo"] = {{"p", c.montecarlo.p},         {"K_list", c.montecarlo.K_list},
                     {"trials", c.montecarlo.trials}, {"delta", c.montecarlo.delta},
                     {"x0", opt(c.montecarlo.x0)},  {"structured", c.montecarlo.structured}};
  j["forecast"] = {{"series", c.forecast.series},
                   {"delimiter", c.forecast.delimiter},
                   {"channel_columns", c.forecast.channel_columns},
                   {"max_rows", opt(c.forecast.max_rows)},
                   {"alpha", opt(c.forecast.alpha)},
                   {"p", opt(c.forecast.p)},
                   {"window_size", c.forecast.window_size},
                   {"window_sizes", c.forecast.window_sizes},
                   {"sliding", c.forecast.sliding},
                   {"zscore", c.forecast.zscore}};
  return j;
}

RunConfig config_from_json(const json& j, const std::string& base_dir) {
  RunConfig c;
  ObjectReader top(j, "");
  top.get("format_version", c.format_version);
  require(c.format_version == kConfigFormatVersion,
          "unsupported format_version " + std::to_string(c.format_version) + " (expected " +
              std::to_string(kConfigFormatVersion) + ")");
  top.get("system", c.system);
  c.system = resolve(c.system, base_dir);
  top.get("master_seed", c.master_seed);
  top.get("threads", c.threads);
  require(c.threads >= 0, "threads must be >= 0");
  top.get("strict", c.strict);
  top.get("force", c.force);
  top.get("timestamp", c.timestamp);
  if (top.has("out")) {
    top.get("out", c.out);
    c.out = resolve(c.out, base_dir);
  } else {
    top.get("out", c.out);
  }
  top.get("a0_convention", c.a0_convention);
  require(c.a0_convention == "derivation" || c.a0_convention == "as_printed",
          "a0_convention must be \"derivation\" or \"as_printed\"");

  if (const json* cj = top.child("constants")) {
    ObjectReader r(*cj, "constants");
    r.get("C_const", c.constants.C_const);
    r.get("c_const", c.constants.c_const);
    std::string gi(to_string(c.constants.gramian_index));
    r.get("gramian_index", gi);
    c.constants.gramian_index = gramian_index_from_string(gi);
    r.get("sigma_in_C", c.constants.sigma_in_C);
    r.finish();
    require(c.constants.C_const > 0 && c.constants.c_const > 0,
            "constants C_const and c_const must be positive");
  }
  if (const json* sj = top.child("simulate")) {
    ObjectReader r(*sj, "simulate");
    r.get("x0", c.simulate.x0);
    r.get("K", c.simulate.K);
    r.get("generator", c.simulate.generator);
    r.get("p", c.simulate.p);
    r.get("inputs", c.simulate.inputs);
    r.get("sigma_u", c.simulate.sigma_u);
    r.finish();
    require(c.simulate.K >= 1, "simulate.K must be >= 1");
    require(c.simulate.p >= 1, "simulate.p must be >= 1");
    require(c.simulate.generator == "exact" || c.simulate.generator == "augmented",
            "simulate.generator must be \"exact\" or \"augmented\"");
    require(c.simulate.sigma_u >= 0, "simulate.sigma_u must be >= 0");
  }
  if (const json* ij = top.child("identify")) {
    ObjectReader r(*ij, "identify");
    r.get("trajectory", c.identify.trajectory);
    c.identify.trajectory = resolve(c.identify.trajectory, base_dir);
    r.get("p", c.identify.p);
    r.get("mode", c.identify.mode);
    r.get("discard_initial", c.identify.discard_initial);
    r.finish();
    require(c.identify.p >= 1, "identify.p must be >= 1");
    require(c.identify.mode == "full" || c.identify.mode == "structured" ||
                c.identify.mode == "with_inputs",
            "identify.mode must be \"full\", \"structured\" or \"with_inputs\"");
  }
  if (const json* cj = top.child("certify")) {
    ObjectReader r(*cj, "certify");
    r.get("K", c.certify.K);
    r.get("k", c.certify.k);
    r.get("delta", c.certify.delta);
    r.get("p", c.certify.p);
    r.get("variant", c.certify.variant);
    r.get("sigma", c.certify.sigma);
    r.get("sigma_u", c.certify.sigma_u);
    r.get("estimate", c.certify.estimate);
    if (c.certify.estimate) c.certify.estimate = resolve(*c.certify.estimate, base_dir);
    r.finish();
    require(c.certify.k >= 1 && c.certify.k <= c.certify.K, "certify: need 1 <= k <= K");
    require(c.certify.delta > 0 && c.certify.delta < 0.5, "certify.delta must lie in (0, 1/2)");
    require(c.certify.p >= 1, "certify.p must be >= 1");
    require(c.certify.variant == "autonomous" || c.certify.variant == "with_inputs",
            "certify.variant must be \"autonomous\" or \"with_inputs\"");
    require(!c.certify.sigma || *c.certify.sigma >= 0, "certify.sigma must be >= 0");
    require(c.certify.sigma_u >= 0, "certify.sigma_u must be >= 0");
  }
  if (const json* mj = top.child("montecarlo")) {
    ObjectReader r(*mj, "montecarlo");
    r.get("p", c.montecarlo.p);
    r.get("K_list", c.montecarlo.K_list);
    r.get("trials", c.montecarlo.trials);
    r.get("delta", c.montecarlo.delta);
    r.get("x0", c.montecarlo.x0);
    r.get("structured", c.montecarlo.structured);
    r.finish();
    require(c.montecarlo.p >= 1, "montecarlo.p must be >= 1");
    require(!c.montecarlo.K_list.empty(), "montecarlo.K_list must not be empty");
    require(c.montecarlo.trials >= 1, "montecarlo.trials must be >= 1");
    require(c.montecarlo.delta > 0 && c.montecarlo.delta < 0.5,
            "montecarlo.delta must lie in (0, 1/2)");
  }
  if (const json* fj = top.child("forecast")) {
    ObjectReader r(*fj, "forecast");
    r.get("series", c.forecast.series);
    c.forecast.series = resolve(c.forecast.series, base_dir);
    r.get("delimiter", c.forecast.delimiter);
    r.get("channel_columns", c.forecast.channel_columns);
    r.get("max_rows", c.forecast.max_rows);
    r.get("alpha", c.forecast.alpha);
    r.get("p", c.forecast.p);
    r.get("window_size", c.forecast.window_size);
    r.get("window_sizes", c.forecast.window_sizes);
    r.get("sliding", c.forecast.sliding);
    r.get("zscore", c.forecast.zscore);
    r.finish();
    require(c.forecast.delimiter.size() == 1, "forecast.delimiter must be a single character");
    require(!c.forecast.max_rows || *c.forecast.max_rows >= 1, "forecast.max_rows must be >= 1");
    require(!c.forecast.p || *c.forecast.p >= 1, "forecast.p must be >= 1");
    require(c.forecast.window_size >= 3, "forecast.window_size must be >= 3");
  }
  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  const json j = load_json_file(path);
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return config_from_json(j, base);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), path);
  }
}

}  // namespace fodsid
