#include "kvevp/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "kvevp/rheology.hpp"

namespace kvevp::diagnostics {

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  return out;
}

std::string csv_row(const DiagnosticsRecord& r) {
  const double values[] = {r.t,          r.L2_u,      r.H1_u,         r.H2_u,           r.L2_sigma,
                           r.H1_sigma,   r.Linf_sigma, r.Linf_bound_slack, r.energy_L2, r.energy_H1,
                           r.antisym_norm, r.dissipation_I11, r.forcing_work};
  std::string out;
  for (std::size_t i = 0; i < std::size(values); ++i) {
    if (i) out += ',';
    append_number(out, values[i]);
  }
  return out;
}

Norms norms(const State& state) {
  Norms n;
  n.L2_u = spectral::l2_norm(state.u);
  n.H1_u = std::sqrt(spectral::sobolev_norm_sq(state.u, 1));
  n.H2_u = std::sqrt(spectral::sobolev_norm_sq(state.u, 2));
  n.Linf_u = spectral::grid_max_norm(spectral::inverse(state.u));
  n.L2_sigma = spectral::l2_norm(state.sigma);
  n.H1_sigma = std::sqrt(spectral::sobolev_norm_sq(state.sigma, 1));
  n.H2_sigma = std::sqrt(spectral::sobolev_norm_sq(state.sigma, 2));
  n.Linf_sigma = spectral::grid_max_norm(spectral::inverse(state.sigma));
  return n;
}

double energy_L2(const State& state, const PhysicalParams& params, double alpha, double beta) {
  const auto tau = rheology::tau_shift(state.sigma, params.P);
  const double b4 = beta * beta * beta * beta;
  return 0.5 * (spectral::seminorm_sq(state.u, 0) + spectral::seminorm_sq(tau, 0) / params.E +
                alpha * alpha * spectral::seminorm_sq(state.u, 1) + b4 * spectral::seminorm_sq(state.u, 2));
}

double energy_H1(const State& state, const PhysicalParams& params, double alpha, double beta) {
  const double b4 = beta * beta * beta * beta;
  return 0.5 * (spectral::seminorm_sq(state.u, 1) + spectral::seminorm_sq(state.sigma, 1) / params.E +
                alpha * alpha * spectral::seminorm_sq(state.u, 2) + b4 * spectral::seminorm_sq(state.u, 3));
}

double linf_bound_check(const State& state, double sigma0_linf, double P) {
  return sigma0_linf + 2.0 * P - spectral::grid_max_norm(spectral::inverse(state.sigma));
}

double antisym_norm(const SpectralField& sigma) {
  if (sigma.rank != Rank::full_tensor) return 0.0;
  // A_12 = (s12 - s21)/2 and A_21 = -A_12, so |A|^2 = 2 |A_12|^2.
  double s = 0.0;
  const auto a = sigma.comp(1);
  const auto b = sigma.comp(2);
  for (std::size_t f = 0; f < a.size(); ++f) s += std::norm(0.5 * (a[f] - b[f]));
  return std::sqrt(2.0 * s);
}

DissipationBalance dissipation_balance(const State& state, const PhysicalParams& params, double epsilon,
                                       const forcing::ForcingFields& fields, Fault fault) {
  const auto de = rheology::strain_rate(rheology::deformation(state.u), epsilon);
  const auto tau = rheology::tau_shift(spectral::inverse(state.sigma), params.P);
  const auto split = rheology::deviatoric_split(tau);
  const auto& dev = split.deviator;
  double acc = 0.0;
  for (std::size_t p = 0; p < tau.grid.size(); ++p) {
    double dev_sq = 0.0;
    for (int c = 0; c < dev.components(); ++c) {
      const double v = dev.comps[static_cast<std::size_t>(c)][p];
      dev_sq += frobenius_weight(dev.rank, c) * v * v;
    }
    const double tr = split.trace.comps[0][p];
    const double rate = de.comps[0][p];
    acc += 4.0 * rate / params.P * dev_sq + rate / (2.0 * params.P) * tr * tr;
  }
  DissipationBalance out;
  out.coercive = -acc / static_cast<double>(tau.grid.size());
  out.forcing_work = spectral::inner(forcing::total_forcing(state.u, fields, params, fault, state.t), state.u);
  return out;
}

double divergence_pairing(const SpectralField& u, const SpectralField& sigma) {
  if (sigma.rank != Rank::sym_tensor) throw std::invalid_argument("divergence_pairing: expects a symmetric stress");
  return spectral::inner(spectral::divergence(sigma), u) + spectral::inner(rheology::deformation_coefficients(u), sigma);
}

double continuous_dependence_metric(const State& a, const State& b, const PhysicalParams& params, double alpha) {
  if (!(a.grid() == b.grid()) || a.sigma.rank != b.sigma.rank)
    throw std::invalid_argument("continuous_dependence_metric: states live on different grids");
  if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
    throw std::invalid_argument("continuous_dependence_metric: states are at different times");
  const auto du = a.u - b.u;
  const auto ds = a.sigma - b.sigma;
  return spectral::seminorm_sq(du, 0) + alpha * alpha * spectral::seminorm_sq(du, 1) +
         spectral::seminorm_sq(ds, 0) / params.E;
}

double top_third_fraction(const SpectralField& field) {
  const auto& g = field.grid;
  const int m = g.points();
  const int n = g.modes();
  double top = 0.0;
  double total = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const int k = std::max(std::abs(g.wavenumber(i)), std::abs(g.wavenumber(j)));
        if (k == 0 || k > n) continue;
        const double e = std::norm(a[g.flat(i, j)]);
        total += e;
        if (3 * k > 2 * n) top += e;
      }
  }
  return total > 0.0 ? top / total : 0.0;
}

DiagnosticsRecord evaluate(const State& state, const Context& ctx, const forcing::ForcingFields& fields) {
  const auto n = norms(state);
  DiagnosticsRecord r;
  r.t = state.t;
  r.L2_u = n.L2_u;
  r.H1_u = n.H1_u;
  r.H2_u = n.H2_u;
  r.L2_sigma = n.L2_sigma;
  r.H1_sigma = n.H1_sigma;
  r.Linf_sigma = n.Linf_sigma;
  r.Linf_bound_slack = ctx.sigma0_linf + 2.0 * ctx.physical.P - n.Linf_sigma;
  r.energy_L2 = energy_L2(state, ctx.physical, ctx.alpha, ctx.beta);
  r.energy_H1 = energy_H1(state, ctx.physical, ctx.alpha, ctx.beta);
  r.antisym_norm = antisym_norm(state.sigma);
  const auto balance = dissipation_balance(state, ctx.physical, ctx.epsilon, fields, ctx.fault);
  r.dissipation_I11 = balance.coercive;
  r.forcing_work = balance.forcing_work;
  return r;
}

}  // namespace kvevp::diagnostics
