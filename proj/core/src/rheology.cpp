#include "kvevp/rheology.hpp"

#include <cmath>
#include <stdexcept>

namespace kvevp::rheology {

namespace {

struct Layout {
  int s11, s12, s21, s22;
};

Layout layout_of(Rank r) {
  if (r == Rank::sym_tensor) return {0, 1, 1, 2};
  if (r == Rank::full_tensor) return {0, 1, 2, 3};
  throw std::invalid_argument("expected a tensor field");
}

}  // namespace

SpectralField deformation_coefficients(const SpectralField& u) {
  if (u.rank != Rank::vector) throw std::invalid_argument("deformation: expects a vector field");
  const auto d1 = spectral::partial(u, 0);
  const auto d2 = spectral::partial(u, 1);
  SpectralField out(u.grid, Rank::sym_tensor);
  auto o11 = out.comp(0);
  auto o12 = out.comp(1);
  auto o22 = out.comp(2);
  for (std::size_t f = 0; f < u.grid.size(); ++f) {
    o11[f] = d1.comps[0][f];
    o12[f] = 0.5 * (d2.comps[0][f] + d1.comps[1][f]);
    o22[f] = d2.comps[1][f];
  }
  return out;
}

GridField deformation(const SpectralField& u) { return spectral::inverse(deformation_coefficients(u)); }

GridField strain_rate(const GridField& d, double epsilon) {
  if (d.rank != Rank::sym_tensor) throw std::invalid_argument("strain_rate: expects a symmetric tensor");
  GridField out(d.grid, Rank::scalar);
  const double e2 = epsilon * epsilon;
  const auto d11 = d.comp(0);
  const auto d12 = d.comp(1);
  const auto d22 = d.comp(2);
  auto o = out.comp(0);
  for (std::size_t p = 0; p < o.size(); ++p)
    o[p] = std::sqrt(d11[p] * d11[p] + 2.0 * d12[p] * d12[p] + d22[p] * d22[p] + e2);
  return out;
}

GridField constitutive_rhs(const GridField& sigma, const GridField& d, const GridField& strain,
                           const PhysicalParams& params) {
  const auto lay = layout_of(sigma.rank);
  const bool full = sigma.rank == Rank::full_tensor;
  GridField out(sigma.grid, sigma.rank);
  const double E = params.E;
  const double P = params.P;
  const auto s11 = sigma.comp(lay.s11);
  const auto s12 = sigma.comp(lay.s12);
  const auto s21 = sigma.comp(lay.s21);
  const auto s22 = sigma.comp(lay.s22);
  const auto d11 = d.comp(0);
  const auto d12 = d.comp(1);
  const auto d22 = d.comp(2);
  const auto de = strain.comp(0);
  auto r11 = out.comp(lay.s11);
  auto r12 = out.comp(lay.s12);
  auto r22 = out.comp(lay.s22);
  for (std::size_t p = 0; p < r11.size(); ++p) {
    const double damp = 4.0 * de[p] / P;
    const double half_diff = 0.5 * (s11[p] - s22[p]);
    // The trace term and the constant -De/2 I combine into -(De/2P) tr(tau) I,
    // which vanishes exactly at sigma = -(P/2) I.
    const double iso = de[p] / (2.0 * P) * (s11[p] + s22[p] + P);
    r11[p] = E * (d11[p] - damp * half_diff - iso);
    r22[p] = E * (d22[p] + damp * half_diff - iso);
    r12[p] = E * (d12[p] - damp * s12[p]);
  }
  if (full) {
    auto r21 = out.comp(lay.s21);
    for (std::size_t p = 0; p < r21.size(); ++p) r21[p] = E * (d12[p] - 4.0 * de[p] / P * s21[p]);
  }
  return out;
}

GridField constitutive_rhs(const GridField& sigma, const SpectralField& u, const PhysicalParams& params,
                           double epsilon) {
  const auto d = deformation(u);
  return constitutive_rhs(sigma, d, strain_rate(d, epsilon), params);
}

GridField tau_shift(const GridField& sigma, double P) {
  const auto lay = layout_of(sigma.rank);
  GridField out = sigma;
  for (double& v : out.comps[static_cast<std::size_t>(lay.s11)]) v += 0.5 * P;
  for (double& v : out.comps[static_cast<std::size_t>(lay.s22)]) v += 0.5 * P;
  return out;
}

GridField sigma_unshift(const GridField& tau, double P) {
  const auto lay = layout_of(tau.rank);
  GridField out = tau;
  for (double& v : out.comps[static_cast<std::size_t>(lay.s11)]) v -= 0.5 * P;
  for (double& v : out.comps[static_cast<std::size_t>(lay.s22)]) v -= 0.5 * P;
  return out;
}

SpectralField tau_shift(const SpectralField& sigma, double P) {
  const auto lay = layout_of(sigma.rank);
  SpectralField out = sigma;
  out.comps[static_cast<std::size_t>(lay.s11)][0] += 0.5 * P;
  out.comps[static_cast<std::size_t>(lay.s22)][0] += 0.5 * P;
  return out;
}

SpectralField sigma_unshift(const SpectralField& tau, double P) {
  const auto lay = layout_of(tau.rank);
  SpectralField out = tau;
  out.comps[static_cast<std::size_t>(lay.s11)][0] -= 0.5 * P;
  out.comps[static_cast<std::size_t>(lay.s22)][0] -= 0.5 * P;
  return out;
}

DeviatoricSplit deviatoric_split(const GridField& sigma) {
  const auto lay = layout_of(sigma.rank);
  DeviatoricSplit split{sigma, GridField(sigma.grid, Rank::scalar)};
  auto tr = split.trace.comp(0);
  auto dev11 = split.deviator.comp(lay.s11);
  auto dev22 = split.deviator.comp(lay.s22);
  const auto s11 = sigma.comp(lay.s11);
  const auto s22 = sigma.comp(lay.s22);
  for (std::size_t p = 0; p < tr.size(); ++p) {
    tr[p] = s11[p] + s22[p];
    dev11[p] = 0.5 * (s11[p] - s22[p]);
    dev22[p] = -dev11[p];
  }
  return split;
}

GridField strain_rate_gradient(const SpectralField& u, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("strain_rate_gradient: epsilon must be > 0");
  const auto d_hat = deformation_coefficients(u);
  const auto d = spectral::inverse(d_hat);
  const auto de = strain_rate(d, epsilon);
  GridField out(u.grid, Rank::vector);
  for (int m = 0; m < 2; ++m) {
    const auto dd = spectral::inverse(spectral::partial(d_hat, m));
    auto o = out.comp(m);
    for (std::size_t p = 0; p < o.size(); ++p) {
      const double contraction =
          d.comps[0][p] * dd.comps[0][p] + 2.0 * d.comps[1][p] * dd.comps[1][p] + d.comps[2][p] * dd.comps[2][p];
      o[p] = contraction / de.comps[0][p];
    }
  }
  return out;
}

}  // namespace kvevp::rheology
