#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kvevp/config.hpp"
#include "kvevp/diagnostics.hpp"

namespace kvevp::experiments {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
};

bool all_passed(const std::vector<Check>& checks);

/// Invariants re-verified on one constituent run.
struct RunSummary {
  double parameter = 0.0;
  DiagnosticsRecord initial;
  DiagnosticsRecord terminal;
  std::size_t steps = 0;
  double dt = 0.0;
  double min_linf_slack = 0.0;
  bool energy_checked = false;   ///< only non-advective, unforced runs
  double max_energy_rate = 0.0;  ///< largest (E_{k+1} - E_k) / dt_k between outputs
  double top_third = 0.0;        ///< spectral energy fraction of the terminal velocity in the top third
  bool underresolved = false;    ///< top_third above 1e-6
};

struct SweepResult {
  std::string kind;
  std::string parameter_name;
  std::vector<double> parameters;
  std::vector<RunSummary> runs;
  /// Successive-run distances, max over output times: u in H1, sigma in L2, and their sum.
  std::vector<double> diff_u;
  std::vector<double> diff_sigma;
  std::vector<double> diff;
  /// log(d_j / d_{j+1}) / log(p_j / p_{j+1}) for consecutive differences.
  std::vector<double> rates;
  /// beta/delta sweep only: distance of each run to the beta = delta = 0 target, and of its initial data.
  std::vector<double> target_diff;
  std::vector<double> target_ic_diff;
  std::vector<Check> checks;

  bool passed() const { return all_passed(checks); }
};

SweepResult sweep_epsilon(const Config& config, const std::vector<double>& epsilons);
/// delta is tied to beta; the comparison target is the beta = delta = 0 run.
SweepResult sweep_beta_delta(const Config& config, const std::vector<double>& betas);
/// Grid sizes keep the M/N ratio of `config`; initial data is built once on the finest grid.
SweepResult sweep_resolution(const Config& config, const std::vector<int>& modes);

struct TwinReport {
  std::vector<double> scales;
  std::vector<double> times;
  std::vector<std::vector<double>> metric;  ///< [scale][output]
  std::vector<double> c_hat_per_scale;
  double c_hat = 0.0;
  std::vector<double> terminal_ratios;      ///< sqrt(metric_s(T) / metric_{s+1}(T))
  std::vector<Check> checks;

  bool passed() const { return all_passed(checks); }
};

/// Perturbs the initial data along a fixed seeded direction at each scale.
TwinReport twin_run(const Config& config, const std::vector<double>& scales);

struct OrderReport {
  std::vector<double> dts;
  std::vector<double> differences;  ///< |y(dt_j) - y(dt_{j+1})| at T
  std::vector<double> orders;       ///< log2(diff_j / diff_{j+1})
  std::vector<Check> checks;

  bool passed() const { return all_passed(checks); }
};

/// dts must halve; an empty list uses {h, h/2, h/4} with h about half the stable step.
OrderReport temporal_order_study(const Config& config, std::vector<double> dts);

std::vector<double> default_epsilons();
std::vector<double> default_betas();
std::vector<int> default_modes();
std::vector<double> default_scales();

void write_csv(std::ostream& out, const SweepResult& result);
void write_csv(std::ostream& out, const TwinReport& report);
void write_csv(std::ostream& out, const OrderReport& report);
void write_summary(std::ostream& out, const std::string& title, const std::vector<Check>& checks);

}  // namespace kvevp::experiments
