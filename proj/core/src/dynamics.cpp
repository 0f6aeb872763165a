#include "kvevp/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kvevp/rheology.hpp"

namespace kvevp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool all_finite(const SpectralField& f) {
  for (const auto& comp : f.comps)
    for (const auto& v : comp)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

GridField inverse_each(const SpectralField& f) {
  GridField out(f.grid, f.rank);
  for (int c = 0; c < f.components(); ++c) spectral::inverse_component(f.grid, f.comp(c), out.comp(c));
  return out;
}

SpectralField forward_projected(const GridField& g, int order) {
  SpectralField out(g.grid, g.rank);
  for (int c = 0; c < g.components(); ++c) spectral::forward_component(g.grid, g.comp(c), out.comp(c));
  spectral::project_in_place(out, order);
  return out;
}

// Grid samples of d_j u_i, returned as [d1 u, d2 u] (each a vector field).
std::array<GridField, 2> velocity_gradient(const SpectralField& u) {
  return {inverse_each(spectral::partial(u, 0)), inverse_each(spectral::partial(u, 1))};
}

GridField deformation_from_gradient(const std::array<GridField, 2>& grad) {
  GridField d(grad[0].grid, Rank::sym_tensor);
  for (std::size_t p = 0; p < d.grid.size(); ++p) {
    d.comps[0][p] = grad[0].comps[0][p];
    d.comps[1][p] = 0.5 * (grad[1].comps[0][p] + grad[0].comps[1][p]);
    d.comps[2][p] = grad[1].comps[1][p];
  }
  return d;
}

void subtract_advection(GridField& acc, const GridField& u, const std::array<GridField, 2>& grad) {
  for (int i = 0; i < 2; ++i) {
    auto a = acc.comp(i);
    for (std::size_t p = 0; p < a.size(); ++p)
      a[p] -= u.comps[0][p] * grad[0].comps[static_cast<std::size_t>(i)][p] +
              u.comps[1][p] * grad[1].comps[static_cast<std::size_t>(i)][p];
  }
}

State combine(const State& base, double dt, const Model::Rates& rates) {
  State out = base;
  axpy(out.u, dt, rates.du);
  axpy(out.sigma, dt, rates.dsigma);
  out.t = base.t + dt;
  return out;
}

}  // namespace

InstabilityError::InstabilityError(double t, double norm)
    : std::runtime_error("instability: non-finite state at t = " + std::to_string(t) +
                         " (last finite L2 norm " + std::to_string(norm) + ")"),
      t_(t),
      norm_(norm) {}

State prepare_ic(const InitialSpec& spec, double delta, const TorusGrid& grid, double P, std::uint64_t seed,
                 bool full_stress) {
  const int n = grid.modes();
  auto u = forcing::synthesize(spec.velocity, grid, Rank::vector, seed, P);
  const auto sym = forcing::synthesize(spec.stress, grid, Rank::sym_tensor, seed + 1, P);
  const auto anti = forcing::synthesize(spec.antisym, grid, Rank::scalar, seed + 2, P);

  // Full 2x2 data: sigma_12 = s + a, sigma_21 = s - a.
  SpectralField full(grid, Rank::full_tensor);
  full.comps[0] = sym.comps[0];
  full.comps[3] = sym.comps[2];
  for (std::size_t f = 0; f < grid.size(); ++f) {
    full.comps[1][f] = sym.comps[1][f] + anti.comps[0][f];
    full.comps[2][f] = sym.comps[1][f] - anti.comps[0][f];
  }

  SpectralField sigma(grid, full_stress ? Rank::full_tensor : Rank::sym_tensor);
  if (full_stress) {
    sigma = std::move(full);
  } else {
    sigma.comps[0] = full.comps[0];
    sigma.comps[2] = full.comps[3];
    for (std::size_t f = 0; f < grid.size(); ++f) sigma.comps[1][f] = 0.5 * (full.comps[1][f] + full.comps[2][f]);
  }

  u = spectral::project_modes(spectral::mollify(u, delta), n);
  sigma = spectral::project_modes(spectral::mollify(sigma, delta), n);
  return State{std::move(u), std::move(sigma), 0.0};
}

Model::Model(Config config)
    : config_((config.validate(), std::move(config))),
      grid_(config_.run.modes, config_.run.points),
      forcing_(config_.forcing, grid_, config_.run.seed) {}

State Model::initial_state() const {
  return prepare_ic(config_.initial, config_.regularization.delta, grid_, config_.physical.P, config_.run.seed,
                    config_.variant.full_stress);
}

SpectralField Model::advection_term(const SpectralField& u) const {
  const auto ug = inverse_each(u);
  const auto grad = velocity_gradient(u);
  GridField acc(grid_, Rank::vector);
  subtract_advection(acc, ug, grad);
  return (-1.0) * forward_projected(acc, grid_.modes());
}

Model::Rates Model::rates(const State& s) const {
  const auto& ph = config_.physical;
  const auto& reg = config_.regularization;
  const int n = grid_.modes();

  const auto ug = inverse_each(s.u);
  GridField d(grid_, Rank::sym_tensor);
  std::array<GridField, 2> grad{GridField(grid_, Rank::vector), GridField(grid_, Rank::vector)};
  if (config_.variant.advection) {
    grad = velocity_gradient(s.u);
    d = deformation_from_gradient(grad);
  } else {
    d = inverse_each(rheology::deformation_coefficients(s.u));
  }
  const auto de = rheology::strain_rate(d, reg.epsilon);

  // Stress equation.
  const auto sg = inverse_each(s.sigma);
  auto dsigma = forward_projected(rheology::constitutive_rhs(sg, d, de, ph), n);

  // Momentum balance.
  auto pointwise = forcing::drag(ug, forcing_, ph, config_.variant.fault, s.t);
  if (config_.variant.advection) subtract_advection(pointwise, ug, grad);
  auto mom = forward_projected(pointwise, n);
  axpy(mom, 1.0, spectral::divergence(s.sigma));
  axpy(mom, 1.0, forcing::linear_forcing(s.u, forcing_, ph, s.t));
  spectral::project_in_place(mom, n);
  auto du = spectral::invert_voigt(mom, reg.alpha, config_.effective_beta());
  return Rates{std::move(du), std::move(dsigma)};
}

SpectralField Model::momentum_rhs(const State& state) const { return rates(state).du; }

SpectralField Model::stress_rhs(const State& state) const { return rates(state).dsigma; }

State Model::step(const State& s, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  const auto k1 = rates(s);
  const auto k2 = rates(combine(s, 0.5 * dt, k1));
  const auto k3 = rates(combine(s, 0.5 * dt, k2));
  const auto k4 = rates(combine(s, dt, k3));

  State out = s;
  const double w1 = dt / 6.0;
  const double w2 = dt / 3.0;
  axpy(out.u, w1, k1.du);
  axpy(out.u, w2, k2.du);
  axpy(out.u, w2, k3.du);
  axpy(out.u, w1, k4.du);
  axpy(out.sigma, w1, k1.dsigma);
  axpy(out.sigma, w2, k2.dsigma);
  axpy(out.sigma, w2, k3.dsigma);
  axpy(out.sigma, w1, k4.dsigma);
  out.t = s.t + dt;
  if (!all_finite(out.u) || !all_finite(out.sigma))
    throw InstabilityError(out.t, std::hypot(spectral::l2_norm(s.u), spectral::l2_norm(s.sigma)));
  return out;
}

double Model::stable_dt(const State& state) const {
  const auto& ph = config_.physical;
  const auto& reg = config_.regularization;
  const double beta = config_.effective_beta();
  const int n = grid_.modes();
  const double kn = kTwoPi * n;

  const auto ug = spectral::inverse(state.u);
  const double max_u = spectral::grid_max_norm(ug);
  const auto de = rheology::strain_rate(rheology::deformation(state.u), reg.epsilon);
  const double max_de = *std::max_element(de.comps[0].begin(), de.comps[0].end());

  double rate = max_de * ph.E * std::max(1.0, 4.0 / ph.P) + kn * max_u + kn / (1.0 + reg.alpha * reg.alpha * kn * kn);

  // Elastic wave frequency sqrt(E) 2 pi |k| / sqrt(m(k)) over retained modes.
  double wave = 0.0;
  for (int k1 = 0; k1 <= n; ++k1)
    for (int k2 = 0; k2 <= n; ++k2) {
      const double q = kTwoPi * std::hypot(k1, k2);
      wave = std::max(wave, std::sqrt(ph.E) * q / std::sqrt(spectral::voigt_multiplier(k1, k2, reg.alpha, beta)));
    }
  rate += wave;

  // Linearised quadratic drag.
  double max_rel = max_u;
  if (forcing_.has_current()) {
    const auto current = forcing_.current(state.t);
    max_rel = 0.0;
    for (std::size_t p = 0; p < grid_.size(); ++p)
      max_rel = std::max(max_rel, std::hypot(current.comps[0][p] - ug.comps[0][p], current.comps[1][p] - ug.comps[1][p]));
  }
  rate += 2.0 * ph.c_w * ph.rho_w * max_rel;

  return 0.5 / rate;
}

diagnostics::Context Model::diagnostics_context(double sigma0_linf) const {
  diagnostics::Context ctx;
  ctx.physical = config_.physical;
  ctx.alpha = config_.regularization.alpha;
  ctx.beta = config_.effective_beta();
  ctx.epsilon = config_.regularization.epsilon;
  ctx.fault = config_.variant.fault;
  ctx.sigma0_linf = sigma0_linf;
  return ctx;
}

DiagnosticsRecord Model::diagnose(const State& state, double sigma0_linf) const {
  return diagnostics::evaluate(state, diagnostics_context(sigma0_linf), forcing_);
}

double resolve_dt(const Model& model, const State& initial, double override_dt) {
  if (override_dt > 0.0) return override_dt;
  if (model.config().run.dt > 0.0) return model.config().run.dt;
  return model.stable_dt(initial);
}

Trajectory run(const Model& model, const State& initial, const RunOptions& options) {
  const auto& rc = model.config().run;
  Trajectory traj;
  const double sigma0_linf = spectral::grid_max_norm(spectral::inverse(initial.sigma));
  const double nominal = resolve_dt(model, initial, options.dt);
  std::size_t steps = 0;
  if (rc.t_final > 0.0) steps = static_cast<std::size_t>(std::ceil(rc.t_final / nominal * (1.0 - 1e-12)));
  steps = std::max<std::size_t>(steps, rc.t_final > 0.0 ? 1 : 0);
  const double dt = steps ? rc.t_final / static_cast<double>(steps) : nominal;
  traj.steps = steps;
  traj.dt = dt;

  auto record = [&](const State& s) {
    auto r = model.diagnose(s, sigma0_linf);
    if (options.on_output) options.on_output(s, r);
    traj.records.push_back(r);
    if (options.keep_snapshots) traj.snapshots.push_back(s);
  };

  State state = initial;
  record(state);
  const auto every = static_cast<std::size_t>(rc.output_every);
  for (std::size_t i = 1; i <= steps; ++i) {
    state = model.step(state, dt);
    if (i == steps) state.t = rc.t_final;
    if (i % every == 0 || i == steps) record(state);
  }
  return traj;
}

Trajectory run(const Model& model, const RunOptions& options) { return run(model, model.initial_state(), options); }

Trajectory run(const Config& config, const RunOptions& options) {
  const Model model(config);
  return run(model, options);
}

}  // namespace kvevp
