#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "kvevp/dynamics.hpp"
#include "kvevp/rheology.hpp"

namespace kvevp::cli {

namespace {

using experiments::Check;

double grid_gradient_norm(const SpectralField& v) {
  const auto d1 = spectral::inverse(spectral::partial(v, 0));
  const auto d2 = spectral::inverse(spectral::partial(v, 1));
  double s = 0.0;
  for (const auto* g : {&d1, &d2})
    for (const auto& comp : g->comps)
      for (double x : comp) s += x * x;
  return std::sqrt(s / static_cast<double>(v.grid.size()));
}

double grid_difference_norm(const GridField& a, const GridField& b) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.grid.size(); ++p) {
    const double d = a.comps[0][p] - b.comps[0][p];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.grid.size()));
}

FieldSpec random_spec(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> amp(0.05, 2.0);
  std::uniform_int_distribution<int> kmax(1, modes);
  return FieldSpec::random(amp(rng), kmax(rng));
}

// Strain-rate Lipschitz estimate over random velocity pairs.
Check strain_rate_lipschitz(const Config& c, int pairs) {
  const TorusGrid grid(c.run.modes, c.run.points);
  std::mt19937_64 rng(c.run.seed);
  const double epsilons[] = {0.0, 1e-3, 1.0};
  int violations = 0;
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const auto v1 = forcing::synthesize(random_spec(rng, grid.modes()), grid, Rank::vector, rng());
    const auto v2 = forcing::synthesize(random_spec(rng, grid.modes()), grid, Rank::vector, rng());
    const double bound = grid_gradient_norm(v1 - v2);
    const auto d1 = rheology::deformation(v1);
    const auto d2 = rheology::deformation(v2);
    for (double e : epsilons) {
      const double lhs = grid_difference_norm(rheology::strain_rate(d1, e), rheology::strain_rate(d2, e));
      worst = std::max(worst, lhs / bound);
      if (lhs > bound * (1.0 + 1e-12)) ++violations;
    }
  }
  return {"strain-rate Lipschitz, violations over " + std::to_string(pairs) + " pairs x 3 epsilons (worst ratio " +
              std::to_string(worst) + ")",
          violations == 0, static_cast<double>(violations), 0.0};
}

Check antisymmetric_decay(const Config& base) {
  Config c = base;
  c.variant.full_stress = true;
  if (c.initial.antisym.kind == FieldSpec::Kind::zero) c.initial.antisym = FieldSpec::random(0.2, std::min(4, c.run.modes));
  const auto traj = run(c);
  const double a0 = traj.records.front().antisym_norm;
  const double rate = 4.0 * c.physical.E * c.regularization.epsilon / c.physical.P;
  double worst = 0.0;
  for (const auto& r : traj.records) {
    const double bound = std::exp(-rate * r.t) * a0 * (1.0 + 1e-6);
    worst = std::max(worst, bound > 0.0 ? r.antisym_norm / bound : (r.antisym_norm > 0.0 ? 2.0 : 0.0));
  }
  return {"antisymmetric stress decays at rate 4 E eps / P (ratio to envelope)", worst <= 1.0, worst, 1.0};
}

Config unforced(Config c) {
  c.forcing = ForcingSpec{};
  return c;
}

std::vector<Check> run_checks(const Config& c) {
  std::vector<Check> out;
  const auto traj = run(c);
  double slack = traj.records.front().Linf_bound_slack;
  double i11 = traj.records.front().dissipation_I11;
  for (const auto& r : traj.records) {
    slack = std::min(slack, r.Linf_bound_slack);
    i11 = std::max(i11, r.dissipation_I11);
  }
  out.push_back({"stress L-infinity bound slack", slack >= -1e-3, slack, -1e-3});
  out.push_back({"coercive dissipation term sign", i11 <= 1e-12, i11, 1e-12});
  return out;
}

Check energy_monotone(const Config& base) {
  Config c = unforced(base);
  c.variant.advection = false;
  const auto traj = run(c);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const auto& a = traj.records[k - 1];
    const auto& b = traj.records[k];
    worst = std::max(worst, (b.energy_L2 - a.energy_L2) / (b.t - a.t));
  }
  return {"L2 energy nonincreasing without forcing or advection (max rate)", worst <= 1e-8, worst, 1e-8};
}

Check divergence_pairing(const Config& c, int states) {
  const TorusGrid grid(c.run.modes, c.run.points);
  std::mt19937_64 rng(c.run.seed ^ 0x19u);
  double worst = 0.0;
  for (int s = 0; s < states; ++s) {
    const auto u = forcing::synthesize(random_spec(rng, grid.modes()), grid, Rank::vector, rng());
    const auto sigma = forcing::synthesize(random_spec(rng, grid.modes()), grid, Rank::sym_tensor, rng());
    const double scale = spectral::l2_norm(spectral::divergence(sigma)) * spectral::l2_norm(u) +
                         spectral::l2_norm(rheology::deformation_coefficients(u)) * spectral::l2_norm(sigma);
    worst = std::max(worst, std::abs(diagnostics::divergence_pairing(u, sigma)) / scale);
  }
  return {"divergence pairing vanishes (relative)", worst <= 1e-12, worst, 1e-12};
}

Check steady_state(const Config& base, bool advection) {
  Config c = unforced(base);
  c.variant.advection = advection;
  c.variant.full_stress = false;
  c.initial.velocity = FieldSpec{};
  c.initial.stress.kind = FieldSpec::Kind::steady;
  c.initial.stress.values.clear();
  c.initial.stress.terms.clear();
  const Model model(c);
  const State s0 = model.initial_state();
  double worst = 0.0;
  RunOptions opts;
  opts.on_output = [&](const State& s, const DiagnosticsRecord&) {
    for (const auto* pair : {&s.u, &s.sigma}) {
      const auto& ref = pair == &s.u ? s0.u : s0.sigma;
      for (std::size_t c2 = 0; c2 < pair->comps.size(); ++c2)
        for (std::size_t f = 0; f < pair->comps[c2].size(); ++f)
          worst = std::max(worst, std::abs(pair->comps[c2][f] - ref.comps[c2][f]));
    }
  };
  run(model, s0, opts);
  return {std::string("steady state invariant (") + (advection ? "advective" : "non-advective") + ")",
          worst <= 1e-12, worst, 1e-12};
}

}  // namespace

std::vector<Check> verification_suite(const Config& config, std::ostream* progress) {
  std::vector<Check> checks;
  auto add = [&](Check c) {
    if (progress) *progress << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << '\n';
    checks.push_back(std::move(c));
  };
  add(strain_rate_lipschitz(config, 1000));
  add(antisymmetric_decay(config));
  for (auto& c : run_checks(config)) add(std::move(c));
  add(energy_monotone(config));
  add(divergence_pairing(config, 100));
  add(steady_state(config, false));
  add(steady_state(config, true));
  return checks;
}

}  // namespace kvevp::cli
