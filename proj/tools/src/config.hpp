// config.hpp — structured run configuration for the command-line driver

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "darc/pipeline.hpp"

namespace darc::cli {

// All frequencies in the file are expressed in units of omega_L; omega_L = 1
// internally. The form-factor magnitude gamma_0 is likewise a ratio to
// omega_L.
struct RunConfig {
  HamiltonianSpec spec;
  FormFactor form_factor = FormFactor::flat(1e-4);
  PipelineOptions pipeline;

  struct Grid {
    double omega_min = 0.0;  // 0 means auto
    double omega_max = 0.0;
    int points = 2000;
  } grid;

  struct Sweep {
    std::string parameter;  // dotted path, e.g. "hamiltonian.asym"
    std::vector<double> values;
  };
  std::optional<Sweep> sweep;

  struct Dynamics {
    std::optional<double> horizon;
    std::optional<double> dt;
  } dynamics;

  std::filesystem::path output_directory = "out";
  std::set<std::string> formats = {"csv", "json"};

  nlohmann::json raw;  // source document, kept for sweep-point rebuilding
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Copy of the source document with one dotted-path parameter replaced,
// re-parsed into a RunConfig. Unknown paths raise SpecError.
RunConfig config_with_parameter(const RunConfig& base, const std::string& parameter,
                                double value);

// Resolved output directory: explicit flag, then DARC_OUTPUT_DIR, then the
// config value.
std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::filesystem::path>& flag);

}  // namespace darc::cli
