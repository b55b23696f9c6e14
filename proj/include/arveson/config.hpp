#ifndef ARVESON_CONFIG_HPP
#define ARVESON_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "arveson/classify.hpp"
#include "arveson/common.hpp"

namespace arveson {

inline constexpr const char* kVersion = "arveson-kit 1.0.0";

// Fully parsed and validated experiment configuration.  Every numerical
// experiment is determined by this struct plus the toolkit version; the
// manifest hash of the canonical JSON form is embedded in every report.
struct ExperimentConfig {
  std::string model_kind;  // matrix | lattice | gaussian_flow | cantor_flow | two_vacua

  // matrix
  std::vector<double> eigenvalues;
  // lattice
  double mass = 1.0;
  int n_modes = 256;
  double energy_max = 3.0;
  double mu = 0.5;
  // gaussian_flow
  double mean = 2.0;
  double sigma = 1.0;
  // cantor_flow
  double ratio = 1.0 / 3.0;
  double max_window = 2.5e4;
  // two_vacua
  int max_mode = 2;

  std::vector<CuboidWindow> ladder;

  double tau_rel = 1e-6;
  double gamma_min = 0.4;
  double delta_ac = 0.02;
  double g_min = 1.3;
  double tol_pair = 1e-6;
  double taper_ratio = 0.0;

  std::string suite = "all";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "out";

  std::string canonical;  // canonical serialization (sorted keys)

  ClassifyConfig make_classify() const {
    ClassifyConfig cc;
    cc.ladder = ladder;
    cc.tau_rel = tau_rel;
    cc.gamma_min = gamma_min;
    cc.delta_ac = delta_ac;
    cc.g_min = g_min;
    cc.taper_ratio = taper_ratio;
    return cc;
  }
  std::string manifest_hash() const { return fnv1a_hex(canonical); }
};

namespace detail_config {

using nlohmann::json;

inline const json& require(const json& node, const std::string& pointer,
                           const char* key, json::value_t type,
                           const char* what) {
  const std::string ptr = pointer + "/" + key;
  if (!node.contains(key)) throw ConfigError(ptr, std::string("missing ") + what);
  const json& v = node.at(key);
  const bool num_ok = type == json::value_t::number_float &&
                      (v.is_number_float() || v.is_number_integer() ||
                       v.is_number_unsigned());
  const bool int_ok = type == json::value_t::number_integer && v.is_number_integer();
  if (!num_ok && !int_ok && v.type() != type)
    throw ConfigError(ptr, std::string("wrong type for ") + what);
  return v;
}

inline double require_number(const json& node, const std::string& pointer,
                             const char* key, const char* what) {
  return require(node, pointer, key, json::value_t::number_float, what)
      .get<double>();
}

inline void check_range(bool ok, const std::string& pointer, const char* msg) {
  if (!ok) throw ConfigError(pointer, msg);
}

inline void parse_model(const json& m, ExperimentConfig& out) {
  const std::string kind =
      require(m, "/model", "kind", json::value_t::string, "model kind")
          .get<std::string>();
  out.model_kind = kind;
  if (kind == "matrix") {
    const json& ev =
        require(m, "/model", "eigenvalues", json::value_t::array, "eigenvalue list");
    if (ev.empty()) throw ConfigError("/model/eigenvalues", "empty eigenvalue list");
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (!ev[i].is_number())
        throw ConfigError("/model/eigenvalues/" + std::to_string(i),
                          "eigenvalue must be a number");
      out.eigenvalues.push_back(ev[i].get<double>());
    }
  } else if (kind == "lattice") {
    out.mass = require_number(m, "/model", "mass", "lattice mass");
    check_range(out.mass > 0, "/model/mass", "mass must be positive");
    out.n_modes = static_cast<int>(
        require(m, "/model", "n_modes", json::value_t::number_integer, "torus grid size")
            .get<long>());
    check_range(out.n_modes >= 256 && out.n_modes % 4 == 0, "/model/n_modes",
                "torus grid must be >= 256 and divisible by 4");
    out.energy_max = require_number(m, "/model", "energy_max", "energy bound");
    out.mu = require_number(m, "/model", "mu", "infrared cutoff mu");
    check_range(out.mu > 0 && out.mu < out.mass, "/model/mu",
                "mu must lie in (0, mass)");
    check_range(out.energy_max >= out.mu, "/model/energy_max",
                "energy bound below mu");
  } else if (kind == "gaussian_flow") {
    out.mean = require_number(m, "/model", "mean", "density mean");
    out.sigma = require_number(m, "/model", "sigma", "density width");
    check_range(out.sigma > 0, "/model/sigma", "sigma must be positive");
  } else if (kind == "cantor_flow") {
    out.ratio = require_number(m, "/model", "ratio", "scaling ratio");
    check_range(out.ratio > 0 && out.ratio < 1, "/model/ratio",
                "ratio must lie in (0,1)");
    out.max_window = require_number(m, "/model", "max_window", "largest window");
    check_range(out.max_window > 1, "/model/max_window", "max window too small");
  } else if (kind == "two_vacua") {
    out.max_mode = static_cast<int>(
        require(m, "/model", "max_mode", json::value_t::number_integer, "mode cutoff")
            .get<long>());
    check_range(out.max_mode >= 1, "/model/max_mode", "mode cutoff must be >= 1");
  } else {
    throw ConfigError("/model/kind", "unknown model kind '" + kind + "'");
  }
}

inline void parse_ladder(const json& arr, ExperimentConfig& out) {
  if (!arr.is_array() || arr.size() < 3)
    throw ConfigError("/ladder", "window ladder needs >= 3 entries");
  std::size_t dim = 0;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ptr = "/ladder/" + std::to_string(i);
    const json& w = arr[i];
    if (!w.is_object()) throw ConfigError(ptr, "ladder entry must be an object");
    const json& hl =
        require(w, ptr, "half_lengths", json::value_t::array, "half lengths");
    const json& st = require(w, ptr, "steps", json::value_t::array, "steps");
    if (hl.empty() || hl.size() != st.size())
      throw ConfigError(ptr, "half_lengths and steps must be equal-length, nonempty");
    if (i == 0) dim = hl.size();
    else if (hl.size() != dim)
      throw ConfigError(ptr, "ladder entries must share one dimension");
    CuboidWindow win;
    for (std::size_t a = 0; a < hl.size(); ++a) {
      if (!hl[a].is_number() || !(hl[a].get<double>() > 0))
        throw ConfigError(ptr + "/half_lengths/" + std::to_string(a),
                          "half length must be a positive number");
      if (!st[a].is_number() || !(st[a].get<double>() > 0))
        throw ConfigError(ptr + "/steps/" + std::to_string(a),
                          "step must be a positive number");
      win.half_lengths.push_back(hl[a].get<double>());
      win.steps.push_back(st[a].get<double>());
    }
    out.ladder.push_back(std::move(win));
  }
  for (std::size_t i = 1; i < out.ladder.size(); ++i)
    for (std::size_t a = 0; a < dim; ++a)
      if (out.ladder[i].half_lengths[a] < out.ladder[i - 1].half_lengths[a])
        throw ConfigError("/ladder/" + std::to_string(i),
                          "ladder windows must be non-decreasing");
}

inline void parse_thresholds(const json& t, ExperimentConfig& out) {
  if (!t.is_object()) throw ConfigError("/thresholds", "thresholds must be an object");
  auto take = [&](const char* key, double& slot, double lo, double hi,
                  bool lo_open) {
    if (!t.contains(key)) return;
    const std::string ptr = std::string("/thresholds/") + key;
    if (!t.at(key).is_number()) throw ConfigError(ptr, "threshold must be a number");
    const double v = t.at(key).get<double>();
    const bool above = lo_open ? v > lo : v >= lo;
    if (!above || v > hi)
      throw ConfigError(ptr, "threshold outside its documented range");
    slot = v;
  };
  take("tau_rel", out.tau_rel, 0, 0.5, true);
  take("gamma_min", out.gamma_min, 0, 5, true);
  take("delta_ac", out.delta_ac, 0, 1, true);
  take("g_min", out.g_min, 1, 10, true);
  take("tol_pair", out.tol_pair, 0, 1, true);
  take("taper_ratio", out.taper_ratio, 0, 50, false);
}

}  // namespace detail_config

inline ExperimentConfig parse_config(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  ExperimentConfig out;
  const json& model =
      detail_config::require(doc, "", "model", json::value_t::object, "model block");
  detail_config::parse_model(model, out);
  detail_config::parse_ladder(
      detail_config::require(doc, "", "ladder", json::value_t::array, "window ladder"),
      out);
  if (doc.contains("thresholds")) detail_config::parse_thresholds(doc.at("thresholds"), out);
  if (doc.contains("suite")) {
    if (!doc.at("suite").is_string())
      throw ConfigError("/suite", "suite must be a string");
    out.suite = doc.at("suite").get<std::string>();
  }
  static const char* kSuites[] = {"spectra", "classify", "duality", "gns", "qft", "all"};
  bool suite_ok = false;
  for (const char* s : kSuites)
    if (out.suite == s) suite_ok = true;
  if (!suite_ok) throw ConfigError("/suite", "unknown suite '" + out.suite + "'");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer() || doc.at("seed").get<long long>() < 0)
      throw ConfigError("/seed", "seed must be a non-negative integer");
    out.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    if (!doc.at("threads").is_number_integer() || doc.at("threads").get<long>() < 1)
      throw ConfigError("/threads", "threads must be a positive integer");
    out.threads = static_cast<int>(doc.at("threads").get<long>());
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string())
      throw ConfigError("/out", "output directory must be a string");
    out.out_dir = doc.at("out").get<std::string>();
  }
  out.canonical = doc.dump();  // nlohmann sorts object keys: canonical form
  return out;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace arveson

#endif  // ARVESON_CONFIG_HPP
