#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsl/metrics.hpp"
#include "qsl/qbm.hpp"
#include "qsl/states.hpp"

namespace qsl {

/// Fully resolved run configuration. Serialized as a flat JSON object whose
/// keys are listed in config_keys(); unknown keys are rejected on load.
struct RunConfig {
  std::string experiment = "fig1";  ///< fig1 | fig2 | beta-sweep | custom

  OscillatorParams oscillator{1.0, 1.0, 1.0, 2.0};
  std::vector<double> taus{0.1, 1.0, 5.0, 10.0};

  double qbm_gamma = 2.0;
  double qbm_beta = 1.0;
  double qbm_t_final = 2.0;
  std::vector<double> qbm_betas{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::string sweep_backend = "gaussian";  ///< gaussian | fd

  GaussianSpec gaussian{2.0, 0.5, 0.0, 0.5};

  double x_min = -10.0;
  double x_max = 10.0;
  double p_min = -10.0;
  double p_max = 10.0;
  std::size_t grid_n = 256;

  std::size_t steps = 400;
  std::size_t ode_substeps = 10;
  double qbm_dt = 0.0;  ///< 0 selects the stability bound
  std::size_t quadrature_n = 512;
  std::vector<PNorm> p_values{PNorm::finite(1.0), PNorm::finite(2.0), PNorm::infinity()};

  std::string out_dir = "qsl-out";
  std::string prefix;

  /// Re-checks every parameter constraint; throws ConfigError.
  void validate() const;

  QbmParams qbm_params(double beta) const;
  PhaseGrid qbm_grid() const;
  UniformGrid1D kernel_grid() const;

  nlohmann::json to_json() const;
  /// Overlays the keys present in `j` onto this config.
  void apply_json(const nlohmann::json& j);
};

const std::vector<std::string>& config_keys();
const std::vector<std::string>& preset_names();

/// Compiled-in parameter sets. Throws ConfigError for unknown names.
RunConfig preset(const std::string& name);

/// preset (optional) -> file (optional); the caller applies flag overrides.
RunConfig load_config(const std::string& preset_name, const std::string& path);

std::vector<PNorm> parse_p_list(const std::string& text);

}  // namespace qsl
