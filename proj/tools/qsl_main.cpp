#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsl/config.hpp"
#include "qsl/errors.hpp"
#include "qsl/experiments.hpp"

namespace {

struct CommonFlags {
  std::string preset;
  std::string config;
  std::string out;
  std::size_t grid_n = 0;
  std::size_t steps = 0;
  std::string p_list;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--preset", f.preset, "compiled-in parameter set");
  cmd->add_option("--config", f.config, "flat-key JSON configuration file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--grid-n", f.grid_n, "grid points per axis (even)");
  cmd->add_option("--steps", f.steps, "time steps per run");
  cmd->add_option("--p", f.p_list, "comma separated exponents, e.g. 1,2,inf");
}

qsl::RunConfig resolve(const CommonFlags& f, const std::string& default_preset) {
  qsl::RunConfig c = qsl::load_config(f.preset.empty() && f.config.empty() ? default_preset : f.preset, f.config);
  if (!f.out.empty()) c.out_dir = f.out;
  if (f.grid_n) c.grid_n = f.grid_n;
  if (f.steps) c.steps = f.steps;
  if (!f.p_list.empty()) c.p_values = qsl::parse_p_list(f.p_list);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum speed limits in operator and phase space"};
  app.require_subcommand(1);

  CommonFlags fig1_flags, fig2_flags, sweep_flags;
  auto* fig1 = app.add_subcommand("fig1", "parametric oscillator quench, both representations");
  add_common(fig1, fig1_flags);
  auto* fig2 = app.add_subcommand("fig2", "quantum Brownian motion in phase space");
  add_common(fig2, fig2_flags);
  auto* sweep = app.add_subcommand("sweep-beta", "tau_qsl_w against inverse temperature");
  add_common(sweep, sweep_flags);
  std::string check_dir;
  auto* check = app.add_subcommand("check", "re-run the inequality suite on an output directory");
  check->add_option("dir", check_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  qsl::configure_threads_from_env();

  try {
    qsl::RunOutcome outcome;
    if (fig1->parsed()) outcome = qsl::execute_fig1(resolve(fig1_flags, "fig1"));
    else if (fig2->parsed()) outcome = qsl::execute_fig2(resolve(fig2_flags, "fig2"));
    else if (sweep->parsed()) outcome = qsl::execute_sweep(resolve(sweep_flags, "beta-sweep"));
    else outcome = qsl::execute_check(check_dir);
    std::cout << outcome.summary.dump(2) << '\n';
    return outcome.exit_code;
  } catch (const qsl::Error& e) {
    std::cerr << "error [" << qsl::to_string(e.kind()) << "]: " << e.what() << '\n';
    switch (e.kind()) {
      case qsl::ErrorKind::Config:
      case qsl::ErrorKind::Argument:
      case qsl::ErrorKind::Io:
        return qsl::kExitConfig;
      default:
        return qsl::kExitNumerical;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qsl::kExitNumerical;
  }
}
