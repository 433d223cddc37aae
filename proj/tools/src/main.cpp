#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
};

std::optional<std::filesystem::path> out_flag(const CommonArgs& args) {
  if (args.out_dir.empty()) return std::nullopt;
  return std::filesystem::path(args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state fluorescence of a laser-dressed two-level emitter"};
  app.require_subcommand(1);

  CommonArgs spectrum_args, sweep_args, validate_args, dynamics_args;
  double horizon = 0.0, dt = 0.0;

  auto add_common = [](CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (overrides config and env)");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "emission lines, density and rates");
  add_common(spectrum, spectrum_args);
  CLI::App* sweep = app.add_subcommand("sweep", "one-parameter sweep of the pipeline");
  add_common(sweep, sweep_args);
  CLI::App* validate = app.add_subcommand("validate", "internal consistency suites");
  add_common(validate, validate_args);
  CLI::App* dynamics = app.add_subcommand("dynamics", "brute-force time evolution");
  add_common(dynamics, dynamics_args);
  dynamics->add_option("--horizon", horizon, "integration horizon (units of 1/omega_L)");
  dynamics->add_option("--dt", dt, "integrator step (units of 1/omega_L)");

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace darc::cli;
    if (spectrum->parsed()) {
      const RunConfig config = load_config(spectrum_args.config_path);
      return cmd_spectrum(config, resolve_output_dir(config, out_flag(spectrum_args)));
    }
    if (sweep->parsed()) {
      const RunConfig config = load_config(sweep_args.config_path);
      return cmd_sweep(config, resolve_output_dir(config, out_flag(sweep_args)));
    }
    if (validate->parsed()) {
      const RunConfig config = load_config(validate_args.config_path);
      return cmd_validate(config, resolve_output_dir(config, out_flag(validate_args)));
    }
    if (dynamics->parsed()) {
      const RunConfig config = load_config(dynamics_args.config_path);
      std::optional<double> horizon_opt, dt_opt;
      if (dynamics->count("--horizon") > 0) horizon_opt = horizon;
      if (dynamics->count("--dt") > 0) dt_opt = dt;
      return cmd_dynamics(config, resolve_output_dir(config, out_flag(dynamics_args)),
                          horizon_opt, dt_opt);
    }
  } catch (const darc::SpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const darc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
