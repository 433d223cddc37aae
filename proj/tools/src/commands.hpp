// commands.hpp — subcommand implementations shared by the binary and tests

#pragma once

#include <filesystem>
#include <optional>

#include "config.hpp"

namespace darc::cli {

// Each command writes its artifacts into `out_dir` and returns a process exit
// code: 0 success, 1 config error, 2 numerical or hypothesis failure.

int cmd_spectrum(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_validate(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_dynamics(const RunConfig& config, const std::filesystem::path& out_dir,
                 std::optional<double> horizon, std::optional<double> dt);

}  // namespace darc::cli
