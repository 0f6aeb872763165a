#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kvevp/config.hpp"
#include "kvevp/experiments.hpp"

namespace kvevp::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInstability = 2,
  kVerificationFailure = 3,
};

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

/// Loads the config (defaults when `path` is empty) and applies overrides.
Config resolve_config(const std::filesystem::path& path, const Overrides& overrides);

/// Writes diagnostics.csv, snapshot_NNNNN.bin per output step and config.txt into `out_dir`.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, const Overrides& overrides,
            std::ostream& log, std::ostream& err);

/// The property suite behind `verify`. Every check reports its measured value and bound.
std::vector<experiments::Check> verification_suite(const Config& config, std::ostream* progress = nullptr);

int cmd_verify(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& log,
               std::ostream& err);

/// kind is one of epsilon, betadelta, resolution, twin, dtorder. Empty `values` selects the defaults.
int cmd_sweep(const std::string& kind, const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
              const std::vector<double>& values, const Overrides& overrides, std::ostream& log, std::ostream& err);

/// Full argument parsing and dispatch; returns the process exit code.
int main(int argc, char** argv);

}  // namespace kvevp::cli
