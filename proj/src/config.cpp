#include "qsl/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qsl/errors.hpp"

namespace qsl {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment",        "oscillator.mass",    "oscillator.hbar",   "oscillator.omega0",
      "oscillator.omega1", "protocol.taus",      "qbm.gamma",         "qbm.beta",
      "qbm.t_final",       "qbm.betas",          "qbm.sweep_backend", "gaussian.mu_x",
      "gaussian.sigma_x",  "gaussian.mu_p",      "gaussian.sigma_p",  "grid.x_min",
      "grid.x_max",        "grid.p_min",         "grid.p_max",        "grid.n",
      "numerics.steps",    "numerics.ode_substeps", "numerics.qbm_dt", "numerics.quadrature_n",
      "numerics.p_values", "output.dir",         "output.prefix",
  };
  return keys;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig1", "fig1-tau0.1", "fig1-tau1", "fig1-tau5", "fig1-tau10", "constant", "fig2", "beta-sweep",
  };
  return names;
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "fig1") return c;
  if (name == "fig1-tau0.1") { c.taus = {0.1}; return c; }
  if (name == "fig1-tau1") { c.taus = {1.0}; return c; }
  if (name == "fig1-tau5") { c.taus = {5.0}; return c; }
  if (name == "fig1-tau10") { c.taus = {10.0}; return c; }
  if (name == "constant") {
    c.experiment = "custom";
    c.oscillator.omega1 = c.oscillator.omega0;
    c.taus = {1.0};
    return c;
  }
  if (name == "fig2") {
    c.experiment = "fig2";
    return c;
  }
  if (name == "beta-sweep") {
    c.experiment = "beta-sweep";
    return c;
  }
  std::ostringstream os;
  os << "unknown preset '" << name << "' (known:";
  for (const auto& n : preset_names()) os << ' ' << n;
  os << ")";
  throw ConfigError(os.str());
}

std::vector<PNorm> parse_p_list(const std::string& text) {
  std::vector<PNorm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    try {
      out.push_back(PNorm::parse(item));
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("empty p list");
  return out;
}

namespace {

json p_list_json(const std::vector<PNorm>& ps) {
  json arr = json::array();
  for (const auto& p : ps) {
    if (p.is_infinite()) arr.push_back("inf");
    else arr.push_back(p.value());
  }
  return arr;
}

std::vector<PNorm> p_list_from(const json& v) {
  if (!v.is_array()) throw ConfigError("numerics.p_values must be an array");
  std::vector<PNorm> out;
  for (const auto& e : v) {
    try {
      if (e.is_string()) out.push_back(PNorm::parse(e.get<std::string>()));
      else out.push_back(PNorm::finite(e.get<double>()));
    } catch (const ArgumentError& err) {
      throw ConfigError(err.what());
    }
  }
  return out;
}

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  const auto n = v.get<long long>();
  if (n < 0) throw ConfigError("config key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(n);
}

}  // namespace

json RunConfig::to_json() const {
  json j = json::object();
  j["experiment"] = experiment;
  j["oscillator.mass"] = oscillator.mass;
  j["oscillator.hbar"] = oscillator.hbar;
  j["oscillator.omega0"] = oscillator.omega0;
  j["oscillator.omega1"] = oscillator.omega1;
  j["protocol.taus"] = taus;
  j["qbm.gamma"] = qbm_gamma;
  j["qbm.beta"] = qbm_beta;
  j["qbm.t_final"] = qbm_t_final;
  j["qbm.betas"] = qbm_betas;
  j["qbm.sweep_backend"] = sweep_backend;
  j["gaussian.mu_x"] = gaussian.mu_x;
  j["gaussian.sigma_x"] = gaussian.sigma_x;
  j["gaussian.mu_p"] = gaussian.mu_p;
  j["gaussian.sigma_p"] = gaussian.sigma_p;
  j["grid.x_min"] = x_min;
  j["grid.x_max"] = x_max;
  j["grid.p_min"] = p_min;
  j["grid.p_max"] = p_max;
  j["grid.n"] = grid_n;
  j["numerics.steps"] = steps;
  j["numerics.ode_substeps"] = ode_substeps;
  j["numerics.qbm_dt"] = qbm_dt;
  j["numerics.quadrature_n"] = quadrature_n;
  j["numerics.p_values"] = p_list_json(p_values);
  j["output.dir"] = out_dir;
  j["output.prefix"] = prefix;
  return j;
}

void RunConfig::apply_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (key == "experiment") experiment = get_as<std::string>(value, key);
    else if (key == "oscillator.mass") oscillator.mass = get_as<double>(value, key);
    else if (key == "oscillator.hbar") oscillator.hbar = get_as<double>(value, key);
    else if (key == "oscillator.omega0") oscillator.omega0 = get_as<double>(value, key);
    else if (key == "oscillator.omega1") oscillator.omega1 = get_as<double>(value, key);
    else if (key == "protocol.taus") taus = get_as<std::vector<double>>(value, key);
    else if (key == "qbm.gamma") qbm_gamma = get_as<double>(value, key);
    else if (key == "qbm.beta") qbm_beta = get_as<double>(value, key);
    else if (key == "qbm.t_final") qbm_t_final = get_as<double>(value, key);
    else if (key == "qbm.betas") qbm_betas = get_as<std::vector<double>>(value, key);
    else if (key == "qbm.sweep_backend") sweep_backend = get_as<std::string>(value, key);
    else if (key == "gaussian.mu_x") gaussian.mu_x = get_as<double>(value, key);
    else if (key == "gaussian.sigma_x") gaussian.sigma_x = get_as<double>(value, key);
    else if (key == "gaussian.mu_p") gaussian.mu_p = get_as<double>(value, key);
    else if (key == "gaussian.sigma_p") gaussian.sigma_p = get_as<double>(value, key);
    else if (key == "grid.x_min") x_min = get_as<double>(value, key);
    else if (key == "grid.x_max") x_max = get_as<double>(value, key);
    else if (key == "grid.p_min") p_min = get_as<double>(value, key);
    else if (key == "grid.p_max") p_max = get_as<double>(value, key);
    else if (key == "grid.n") grid_n = get_count(value, key);
    else if (key == "numerics.steps") steps = get_count(value, key);
    else if (key == "numerics.ode_substeps") ode_substeps = get_count(value, key);
    else if (key == "numerics.qbm_dt") qbm_dt = get_as<double>(value, key);
    else if (key == "numerics.quadrature_n") quadrature_n = get_count(value, key);
    else if (key == "numerics.p_values") p_values = p_list_from(value);
    else if (key == "output.dir") out_dir = get_as<std::string>(value, key);
    else if (key == "output.prefix") prefix = get_as<std::string>(value, key);
  }
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  static const std::vector<std::string> experiments = {"fig1", "fig2", "beta-sweep", "custom"};
  if (std::find(experiments.begin(), experiments.end(), experiment) == experiments.end()) {
    fail("experiment must be one of fig1, fig2, beta-sweep, custom");
  }
  try {
    oscillator.validate();
    gaussian.validate();
  } catch (const ArgumentError& e) {
    fail(e.what());
  }
  if (taus.empty()) fail("protocol.taus must not be empty");
  for (double t : taus) {
    if (!(t > 0.0)) fail("every protocol tau must be positive");
  }
  if (!(qbm_gamma > 0.0)) fail("qbm.gamma must be positive");
  if (!(qbm_beta > 0.0)) fail("qbm.beta must be positive");
  if (!(qbm_t_final > 0.0)) fail("t_final must be positive");
  if (qbm_betas.empty()) fail("qbm.betas must not be empty");
  for (double b : qbm_betas) {
    if (!(b > 0.0)) fail("every sweep beta must be positive");
  }
  if (sweep_backend != "gaussian" && sweep_backend != "fd") fail("qbm.sweep_backend must be gaussian or fd");
  if (!(x_max > x_min) || !(p_max > p_min)) fail("grid bounds need max > min");
  if (grid_n < 8 || grid_n % 2 != 0) fail("grid.n must be even and at least 8");
  if (grid_n > 1024) fail("grid.n above 1024 is not supported");
  if (steps < 2) fail("numerics.steps must be at least 2");
  if (ode_substeps < 1) fail("numerics.ode_substeps must be at least 1");
  if (steps * ode_substeps < 100) fail("steps * ode_substeps must be at least 100");
  if (qbm_dt < 0.0) fail("numerics.qbm_dt must be >= 0");
  if (quadrature_n < 16) fail("numerics.quadrature_n must be at least 16");
  if (p_values.empty()) fail("numerics.p_values must not be empty");
  if (out_dir.empty()) fail("output.dir must not be empty");
}

QbmParams RunConfig::qbm_params(double beta) const {
  return QbmParams{qbm_gamma, beta, oscillator.mass, oscillator.hbar, oscillator.omega0};
}

PhaseGrid RunConfig::qbm_grid() const {
  return PhaseGrid(UniformGrid1D(x_min, x_max, grid_n), UniformGrid1D(p_min, p_max, grid_n));
}

UniformGrid1D RunConfig::kernel_grid() const { return UniformGrid1D(x_min, x_max, grid_n); }

RunConfig load_config(const std::string& preset_name, const std::string& path) {
  RunConfig c = preset_name.empty() ? RunConfig{} : preset(preset_name);
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("cannot parse config file '" + path + "': " + e.what());
    }
    c.apply_json(j);
  }
  return c;
}

}  // namespace qsl
