#include "kvevp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "kvevp/dynamics.hpp"

namespace kvevp::experiments {

namespace {

constexpr double kSlackTolerance = -1e-3;
constexpr double kEnergyTolerance = 1e-8;  // per unit time

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Runs fn(0..n-1) on up to `threads` workers. The first exception wins.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

bool is_unforced(const Config& c) {
  return c.forcing.wind.kind == FieldSpec::Kind::zero && c.forcing.current.kind == FieldSpec::Kind::zero &&
         c.forcing.surface_height.kind == FieldSpec::Kind::zero;
}

bool energy_applies(const Config& c) {
  return !c.variant.advection && is_unforced(c) && std::abs(c.physical.theta) < std::numbers::pi / 2;
}

// A prepared constituent run: model plus its initial state.
struct Job {
  double parameter = 0.0;
  Config config;
  std::optional<State> initial;  // empty: model's own initial state
};

struct Outcome {
  RunSummary summary;
  std::vector<State> snapshots;
};

RunSummary summarise(double parameter, const Config& config, const Trajectory& traj) {
  RunSummary s;
  s.parameter = parameter;
  s.initial = traj.records.front();
  s.terminal = traj.records.back();
  s.steps = traj.steps;
  s.dt = traj.dt;
  s.min_linf_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.records) s.min_linf_slack = std::min(s.min_linf_slack, r.Linf_bound_slack);
  s.energy_checked = energy_applies(config);
  s.max_energy_rate = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const double span = traj.records[k].t - traj.records[k - 1].t;
    if (span > 0.0)
      s.max_energy_rate =
          std::max(s.max_energy_rate, (traj.records[k].energy_L2 - traj.records[k - 1].energy_L2) / span);
  }
  if (!traj.snapshots.empty()) s.top_third = diagnostics::top_third_fraction(traj.snapshots.back().u);
  s.underresolved = s.top_third > 1e-6;
  return s;
}

// Runs all jobs with a shared step size (the smallest stable step among them).
std::vector<Outcome> run_jobs(const std::vector<Job>& jobs, int threads, double forced_dt = 0.0) {
  std::vector<std::unique_ptr<Model>> models(jobs.size());
  std::vector<State> initials;
  initials.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    models[i] = std::make_unique<Model>(jobs[i].config);
    initials.push_back(jobs[i].initial ? *jobs[i].initial : models[i]->initial_state());
  }
  double dt = forced_dt;
  if (!(dt > 0.0)) {
    dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < jobs.size(); ++i) dt = std::min(dt, resolve_dt(*models[i], initials[i]));
  }
  std::vector<Outcome> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    RunOptions opts;
    opts.keep_snapshots = true;
    opts.dt = dt;
    auto traj = run(*models[i], initials[i], opts);
    out[i].summary = summarise(jobs[i].parameter, jobs[i].config, traj);
    out[i].snapshots = std::move(traj.snapshots);
  });
  return out;
}

struct Distance {
  double u = 0.0;
  double sigma = 0.0;
  double total() const { return u + sigma; }
};

// max over output times of |u_a - u_b|_H1 and |sigma_a - sigma_b|_L2, compared on the coarser grid.
Distance trajectory_distance(const std::vector<State>& a, const std::vector<State>& b) {
  if (a.size() != b.size()) throw std::logic_error("trajectory_distance: output times do not match");
  Distance d;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-12 * std::max(1.0, std::abs(a[k].t)))
      throw std::logic_error("trajectory_distance: output times do not match");
    const bool a_coarse = a[k].grid().modes() <= b[k].grid().modes();
    const auto& g = a_coarse ? a[k].grid() : b[k].grid();
    const auto du = spectral::transfer(a[k].u, g) - spectral::transfer(b[k].u, g);
    const auto ds = spectral::transfer(a[k].sigma, g) - spectral::transfer(b[k].sigma, g);
    d.u = std::max(d.u, std::sqrt(spectral::sobolev_norm_sq(du, 1)));
    d.sigma = std::max(d.sigma, spectral::l2_norm(ds));
  }
  return d;
}

std::string label(const std::string& name, double value) { return name + "=" + num(value); }

void invariant_checks(std::vector<Check>& checks, const std::string& name, const RunSummary& r) {
  checks.push_back({label(name, r.parameter) + " Linf slack", r.min_linf_slack >= kSlackTolerance, r.min_linf_slack,
                    kSlackTolerance});
  if (r.energy_checked)
    checks.push_back({label(name, r.parameter) + " energy nonincreasing", r.max_energy_rate <= kEnergyTolerance,
                      r.max_energy_rate, kEnergyTolerance});
}

// Strictly decreasing, except that a run of exact zeros (trivial dynamics) also passes.
bool strictly_decreasing(const std::vector<double>& v) {
  constexpr double kZero = 1e-14;
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j - 1] <= kZero && v[j] <= kZero) continue;
    if (!(v[j] < v[j - 1])) return false;
  }
  return true;
}

void fill_distances(SweepResult& r, const std::vector<Outcome>& outcomes) {
  for (std::size_t j = 0; j + 1 < outcomes.size(); ++j) {
    const auto d = trajectory_distance(outcomes[j].snapshots, outcomes[j + 1].snapshots);
    r.diff_u.push_back(d.u);
    r.diff_sigma.push_back(d.sigma);
    r.diff.push_back(d.total());
  }
  for (std::size_t j = 0; j + 1 < r.diff.size(); ++j) {
    const double ratio = std::log(r.parameters[j] / r.parameters[j + 1]);
    r.rates.push_back(r.diff[j + 1] > 0.0 && r.diff[j] > 0.0 ? std::log(r.diff[j] / r.diff[j + 1]) / ratio
                                                              : std::numeric_limits<double>::quiet_NaN());
  }
}

void require_monotone(const std::vector<double>& v, bool decreasing, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty parameter list");
  for (std::size_t j = 1; j < v.size(); ++j)
    if (decreasing ? !(v[j] < v[j - 1]) : !(v[j] > v[j - 1]))
      throw std::invalid_argument(std::string(what) + ": parameter list must be strictly " +
                                  (decreasing ? "decreasing" : "increasing"));
}

int threads_of(const Config& c) { return std::max(1, c.run.threads); }

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<double> default_epsilons() { return {0.1, 0.05, 0.025, 0.0125}; }
std::vector<double> default_betas() { return {0.2, 0.1, 0.05}; }
std::vector<int> default_modes() { return {16, 24, 32, 48}; }
std::vector<double> default_scales() { return {1e-2, 1e-3, 1e-4}; }

SweepResult sweep_epsilon(const Config& config, const std::vector<double>& epsilons) {
  require_monotone(epsilons, true, "sweep_epsilon");
  if (epsilons.back() <= 0.0) throw std::invalid_argument("sweep_epsilon: epsilon values must be positive");
  SweepResult r;
  r.kind = "epsilon";
  r.parameter_name = "epsilon";
  r.parameters = epsilons;
  std::vector<Job> jobs;
  for (double e : epsilons) {
    Job j{e, config, std::nullopt};
    j.config.regularization.epsilon = e;
    jobs.push_back(std::move(j));
  }
  const auto outcomes = run_jobs(jobs, threads_of(config));
  for (const auto& o : outcomes) {
    r.runs.push_back(o.summary);
    invariant_checks(r.checks, r.parameter_name, o.summary);
  }
  fill_distances(r, outcomes);
  r.checks.push_back({"Cauchy differences strictly decreasing", strictly_decreasing(r.diff),
                      r.diff.empty() ? 0.0 : r.diff.back(), 0.0});
  return r;
}

SweepResult sweep_beta_delta(const Config& config, const std::vector<double>& betas) {
  require_monotone(betas, true, "sweep_beta_delta");
  if (betas.back() <= 0.0) throw std::invalid_argument("sweep_beta_delta: beta values must be positive");
  SweepResult r;
  r.kind = "betadelta";
  r.parameter_name = "beta";
  r.parameters = betas;
  std::vector<Job> jobs;
  for (double b : betas) {
    Job j{b, config, std::nullopt};
    j.config.variant.voigt_biharmonic = true;
    j.config.regularization.beta = b;
    j.config.regularization.delta = b;
    jobs.push_back(std::move(j));
  }
  Job target{0.0, config, std::nullopt};
  target.config.variant.voigt_biharmonic = false;
  target.config.regularization.beta = 0.0;
  target.config.regularization.delta = 0.0;
  jobs.push_back(std::move(target));

  auto outcomes = run_jobs(jobs, threads_of(config));
  const Outcome reference = std::move(outcomes.back());
  outcomes.pop_back();
  for (const auto& o : outcomes) {
    r.runs.push_back(o.summary);
    invariant_checks(r.checks, r.parameter_name, o.summary);
  }
  invariant_checks(r.checks, "target beta", reference.summary);
  fill_distances(r, outcomes);
  for (const auto& o : outcomes) {
    r.target_diff.push_back(trajectory_distance(o.snapshots, reference.snapshots).total());
    r.target_ic_diff.push_back(trajectory_distance({o.snapshots.front()}, {reference.snapshots.front()}).total());
  }
  r.checks.push_back({"difference to beta=delta=0 strictly decreasing", strictly_decreasing(r.target_diff),
                      r.target_diff.back(), 0.0});
  return r;
}

SweepResult sweep_resolution(const Config& config, const std::vector<int>& modes) {
  std::vector<double> as_double(modes.begin(), modes.end());
  require_monotone(as_double, false, "sweep_resolution");
  SweepResult r;
  r.kind = "resolution";
  r.parameter_name = "N";
  r.parameters = as_double;

  const double ratio = static_cast<double>(config.run.points) / config.run.modes;
  auto points_for = [&](int n) {
    int m = static_cast<int>(std::lround(ratio * n));
    m += m % 2;
    return std::max(m, 2 * n + 2);
  };

  std::vector<Job> jobs;
  for (int n : modes) {
    Job j{static_cast<double>(n), config, std::nullopt};
    j.config.run.modes = n;
    j.config.run.points = points_for(n);
    jobs.push_back(std::move(j));
  }
  // Initial data lives on the finest grid; coarser runs receive its low modes.
  const Model finest(jobs.back().config);
  const State fine_ic = finest.initial_state();
  for (auto& j : jobs) {
    const TorusGrid g(j.config.run.modes, j.config.run.points);
    j.initial = State{spectral::transfer(fine_ic.u, g), spectral::transfer(fine_ic.sigma, g), 0.0};
  }

  const auto outcomes = run_jobs(jobs, threads_of(config));
  for (const auto& o : outcomes) {
    r.runs.push_back(o.summary);
    invariant_checks(r.checks, r.parameter_name, o.summary);
  }
  fill_distances(r, outcomes);
  // Rates here are reported as decay exponents in N.
  for (auto& rate : r.rates) rate = -rate;
  r.checks.push_back({"self-convergence differences strictly decreasing", strictly_decreasing(r.diff),
                      r.diff.empty() ? 0.0 : r.diff.back(), 0.0});
  // Differences of a smooth run should fall faster than N^-2. Exact zeros count as converged.
  double slowest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < r.rates.size(); ++j)
    if (r.diff[j] > 1e-14 && r.diff[j + 1] > 1e-14) slowest = std::min(slowest, r.rates[j]);
  if (std::isfinite(slowest)) r.checks.push_back({"self-convergence faster than N^-2", slowest > 2.0, slowest, 2.0});
  return r;
}

TwinReport twin_run(const Config& config, const std::vector<double>& scales) {
  require_monotone(scales, true, "twin_run");
  TwinReport rep;
  rep.scales = scales;

  const Model base(config);
  const State ic = base.initial_state();
  // Perturbation direction: seeded random fields of unit grid max, projected like the data.
  const auto& g = base.grid();
  const std::uint64_t dseed = config.run.seed ^ 0x7F11u;
  const auto dir_u = forcing::synthesize(FieldSpec::random(1.0, std::min(4, g.modes())), g, Rank::vector, dseed);
  const auto dir_s =
      forcing::synthesize(FieldSpec::random(1.0, std::min(4, g.modes())), g, ic.sigma.rank, dseed + 1);

  std::vector<Job> jobs;
  jobs.push_back({0.0, config, ic});
  for (double s : scales) {
    State p = ic;
    axpy(p.u, s, dir_u);
    axpy(p.sigma, s, dir_s);
    jobs.push_back({s, config, std::move(p)});
  }
  const auto outcomes = run_jobs(jobs, threads_of(config));
  const auto& ref = outcomes.front().snapshots;
  for (const auto& s : ref) rep.times.push_back(s.t);

  const auto& ph = config.physical;
  const double alpha = config.regularization.alpha;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    std::vector<double> series;
    for (std::size_t k = 0; k < ref.size(); ++k)
      series.push_back(diagnostics::continuous_dependence_metric(outcomes[i].snapshots[k], ref[k], ph, alpha));
    double c = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < series.size(); ++k)
      if (series[0] > 0.0 && series[k] > 0.0) c = std::max(c, std::log(series[k] / series[0]) / rep.times[k]);
    rep.c_hat_per_scale.push_back(std::isfinite(c) ? c : 0.0);
    rep.metric.push_back(std::move(series));
  }
  rep.c_hat = *std::max_element(rep.c_hat_per_scale.begin(), rep.c_hat_per_scale.end());

  // Envelope with the shared constant.
  double worst = 0.0;
  for (const auto& series : rep.metric)
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double env = series[0] * std::exp(rep.c_hat * rep.times[k]) * (1.0 + 1e-3);
      worst = std::max(worst, env > 0.0 ? series[k] / env : (series[k] > 0.0 ? 2.0 : 0.0));
    }
  rep.checks.push_back({"shared exponential envelope covers all scales", worst <= 1.0, worst, 1.0});

  // Constant stability across scales.
  const auto [lo, hi] = std::minmax_element(rep.c_hat_per_scale.begin(), rep.c_hat_per_scale.end());
  const double spread = *hi - *lo;
  const double scale = std::max(std::abs(*hi), std::abs(*lo));
  rep.checks.push_back({"fitted envelope constant stable within 20%", spread <= 0.2 * scale, spread, 0.2 * scale});

  for (std::size_t i = 0; i + 1 < rep.metric.size(); ++i) {
    const double a = rep.metric[i].back();
    const double b = rep.metric[i + 1].back();
    const double ratio = b > 0.0 ? std::sqrt(a / b) : std::numeric_limits<double>::infinity();
    rep.terminal_ratios.push_back(ratio);
    const double expected = scales[i] / scales[i + 1];
    rep.checks.push_back({"terminal sqrt-metric ratio " + num(scales[i]) + "/" + num(scales[i + 1]),
                          std::abs(ratio / expected - 1.0) <= 0.15, ratio, expected});
  }
  for (const auto& o : outcomes) invariant_checks(rep.checks, "scale", o.summary);
  return rep;
}

OrderReport temporal_order_study(const Config& config, std::vector<double> dts) {
  if (dts.empty()) {
    const Model m(config);
    const double stable = m.stable_dt(m.initial_state());
    // Start at half the stable step: at the limit itself the stiff elastic modes are pre-asymptotic.
    const double h = config.run.t_final / std::ceil(2.0 * config.run.t_final / stable);
    dts = {h, h / 2, h / 4};
  }
  if (dts.size() < 3) throw std::invalid_argument("temporal_order_study: needs at least three step sizes");
  for (std::size_t j = 1; j < dts.size(); ++j)
    if (std::abs(dts[j - 1] / dts[j] - 2.0) > 1e-9)
      throw std::invalid_argument("temporal_order_study: step sizes must halve");
  for (double h : dts) {
    const double steps = config.run.t_final / h;
    if (std::abs(steps - std::round(steps)) > 1e-6)
      throw std::invalid_argument("temporal_order_study: t_final must be a whole number of steps " + num(h));
  }

  OrderReport rep;
  rep.dts = dts;
  std::vector<std::optional<State>> finals(dts.size());
  parallel_for(dts.size(), threads_of(config), [&](std::size_t j) {
    Config c = config;
    c.run.dt = dts[j];
    c.run.output_every = std::numeric_limits<int>::max();
    const Model m(c);
    finals[j].emplace(std::move(run(m, RunOptions{true, dts[j], {}}).snapshots.back()));
  });
  for (std::size_t j = 0; j + 1 < finals.size(); ++j) {
    const auto du = finals[j]->u - finals[j + 1]->u;
    const auto ds = finals[j]->sigma - finals[j + 1]->sigma;
    rep.differences.push_back(std::sqrt(spectral::sobolev_norm_sq(du, 1) + spectral::seminorm_sq(ds, 0)));
  }
  for (std::size_t j = 0; j + 1 < rep.differences.size(); ++j)
    rep.orders.push_back(std::log2(rep.differences[j] / rep.differences[j + 1]));
  for (std::size_t j = 0; j < rep.orders.size(); ++j)
    rep.checks.push_back({"Richardson order dt=" + num(dts[j]), std::abs(rep.orders[j] - 4.0) <= 0.2, rep.orders[j],
                          4.0});
  return rep;
}

void write_csv(std::ostream& out, const SweepResult& r) {
  out << r.parameter_name
      << ",steps,dt,min_Linf_slack,max_energy_rate,top_third,underresolved,L2_u_T,H1_u_T,L2_sigma_T,diff_u,diff_sigma,diff,rate";
  if (!r.target_diff.empty()) out << ",target_diff,target_ic_diff";
  out << '\n';
  for (std::size_t j = 0; j < r.runs.size(); ++j) {
    const auto& s = r.runs[j];
    auto at = [&](const std::vector<double>& v) { return j < v.size() ? num(v[j]) : std::string(); };
    out << num(s.parameter) << ',' << s.steps << ',' << num(s.dt) << ',' << num(s.min_linf_slack) << ','
        << (s.energy_checked ? num(s.max_energy_rate) : std::string()) << ',' << num(s.top_third) << ',' << (s.underresolved ? 1 : 0) << ','
        << num(s.terminal.L2_u) << ',' << num(s.terminal.H1_u) << ',' << num(s.terminal.L2_sigma) << ','
        << at(r.diff_u) << ',' << at(r.diff_sigma) << ',' << at(r.diff) << ',' << at(r.rates);
    if (!r.target_diff.empty()) out << ',' << at(r.target_diff) << ',' << at(r.target_ic_diff);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const TwinReport& r) {
  out << "t";
  for (double s : r.scales) out << ",metric_" << num(s);
  out << '\n';
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out << num(r.times[k]);
    for (const auto& series : r.metric) out << ',' << num(series[k]);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const OrderReport& r) {
  out << "dt,difference,order\n";
  for (std::size_t j = 0; j < r.dts.size(); ++j) {
    out << num(r.dts[j]) << ',' << (j < r.differences.size() ? num(r.differences[j]) : std::string()) << ','
        << (j < r.orders.size() ? num(r.orders[j]) : std::string()) << '\n';
  }
}

void write_summary(std::ostream& out, const std::string& title, const std::vector<Check>& checks) {
  out << title << '\n';
  for (const auto& c : checks)
    out << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << "  measured " << num(c.measured) << "  bound "
        << num(c.bound) << '\n';
  out << (all_passed(checks) ? "all checks passed" : "some checks FAILED") << '\n';
}

}  // namespace kvevp::experiments
