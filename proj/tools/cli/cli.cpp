#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "kvevp/dynamics.hpp"
#include "kvevp/io.hpp"

namespace kvevp::cli {

namespace fs = std::filesystem;

Config resolve_config(const fs::path& path, const Overrides& overrides) {
  Config c = path.empty() ? default_config() : load_config(path);
  if (overrides.threads) c.run.threads = *overrides.threads;
  if (overrides.seed) c.run.seed = *overrides.seed;
  c.validate();
  return c;
}

namespace {

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu.bin", index);
  return buf;
}

void open_or_throw(std::ofstream& out, const fs::path& path) {
  out.open(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

// Maps exceptions to the exit-code contract. I/O failures count as configuration errors.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InstabilityError& e) {
    err << e.what() << '\n';
    return kInstability;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int cmd_run(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides, std::ostream& log,
            std::ostream& err) {
  return guarded(err, [&] {
    const Config config = resolve_config(config_path, overrides);
    fs::create_directories(out_dir);
    {
      std::ofstream cfg;
      open_or_throw(cfg, out_dir / "config.txt");
      cfg << serialize_config(config);
    }
    std::ofstream csv;
    open_or_throw(csv, out_dir / "diagnostics.csv");
    csv << diagnostics::csv_header() << '\n';

    const Model model(config);
    std::size_t index = 0;
    RunOptions options;
    options.on_output = [&](const State& s, const DiagnosticsRecord& r) {
      csv << diagnostics::csv_row(r) << '\n';
      io::write_snapshot(out_dir / snapshot_name(index++), io::make_snapshot(s, config));
    };
    try {
      const auto traj = run(model, options);
      log << "run: " << traj.steps << " steps of dt " << traj.dt << ", " << index << " outputs written to "
          << out_dir.string() << '\n';
    } catch (const InstabilityError&) {
      csv.flush();
      throw;
    }
    return int{kOk};
  });
}

int cmd_sweep(const std::string& kind, const fs::path& config_path, const fs::path& out_dir,
              const std::vector<double>& values, const Overrides& overrides, std::ostream& log, std::ostream& err) {
  static const std::vector<std::string> kinds = {"epsilon", "betadelta", "resolution", "twin", "dtorder"};
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    err << "unknown sweep kind '" << kind << "' (expected epsilon, betadelta, resolution, twin or dtorder)\n";
    return kConfigError;
  }
  return guarded(err, [&] {
    const Config config = resolve_config(config_path, overrides);
    fs::create_directories(out_dir);
    std::ofstream csv;
    open_or_throw(csv, out_dir / ("sweep_" + kind + ".csv"));
    std::vector<experiments::Check> checks;

    if (kind == "epsilon") {
      const auto r = experiments::sweep_epsilon(config, values.empty() ? experiments::default_epsilons() : values);
      experiments::write_csv(csv, r);
      checks = r.checks;
    } else if (kind == "betadelta") {
      const auto r = experiments::sweep_beta_delta(config, values.empty() ? experiments::default_betas() : values);
      experiments::write_csv(csv, r);
      checks = r.checks;
    } else if (kind == "resolution") {
      std::vector<int> modes;
      for (double v : values) {
        if (v != std::floor(v) || v < 1) throw std::invalid_argument("resolution values must be positive integers");
        modes.push_back(static_cast<int>(v));
      }
      const auto r = experiments::sweep_resolution(config, modes.empty() ? experiments::default_modes() : modes);
      experiments::write_csv(csv, r);
      checks = r.checks;
    } else if (kind == "twin") {
      const auto r = experiments::twin_run(config, values.empty() ? experiments::default_scales() : values);
      experiments::write_csv(csv, r);
      checks = r.checks;
    } else {
      const auto r = experiments::temporal_order_study(config, values);
      experiments::write_csv(csv, r);
      checks = r.checks;
    }

    std::ofstream summary;
    open_or_throw(summary, out_dir / ("sweep_" + kind + "_summary.txt"));
    experiments::write_summary(summary, "sweep " + kind, checks);
    experiments::write_summary(log, "sweep " + kind, checks);
    return experiments::all_passed(checks) ? int{kOk} : int{kVerificationFailure};
  });
}

int cmd_verify(const fs::path& config_path, const Overrides& overrides, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const Config config = resolve_config(config_path, overrides);
    const auto checks = verification_suite(config, &log);
    experiments::write_summary(log, "verify", checks);
    return experiments::all_passed(checks) ? int{kOk} : int{kVerificationFailure};
  });
}

int main(int argc, char** argv) {
  CLI::App app{"Kelvin-Voigt EVP sea-ice simulator"};
  app.require_subcommand(1);
  Overrides overrides;
  int threads = 0;
  std::uint64_t seed = 0;
  auto* threads_opt = app.add_option("--threads", threads, "worker threads for independent runs")
                          ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "random seed for initial data and forcing");

  std::string config_path;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
  run_cmd->add_option("--config", config_path, "config file");
  run_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  verify_cmd->add_option("--config", config_path, "config file");

  std::string kind;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps, twin runs and the step-size study");
  sweep_cmd->add_option("--kind", kind, "epsilon|betadelta|resolution|twin|dtorder")->required();
  sweep_cmd->add_option("--config", config_path, "config file");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--values", values, "parameter values (defaults per kind)");

  // Global options are accepted after the subcommand too.
  for (auto* sub : {run_cmd, verify_cmd, sweep_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  if (*threads_opt) overrides.threads = threads;
  if (*seed_opt) overrides.seed = seed;

  if (*run_cmd) return cmd_run(config_path, out_dir, overrides, std::cout, std::cerr);
  if (*verify_cmd) return cmd_verify(config_path, overrides, std::cout, std::cerr);
  return cmd_sweep(kind, config_path, out_dir, values, overrides, std::cout, std::cerr);
}

}  // namespace kvevp::cli
