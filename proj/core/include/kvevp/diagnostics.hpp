#pragma once

#include <array>
#include <string>
#include <string_view>

#include "kvevp/config.hpp"
#include "kvevp/forcing.hpp"
#include "kvevp/state.hpp"

namespace kvevp {

/// One row of the diagnostics time series.
struct DiagnosticsRecord {
  double t = 0.0;
  double L2_u = 0.0;
  double H1_u = 0.0;
  double H2_u = 0.0;
  double L2_sigma = 0.0;
  double H1_sigma = 0.0;
  double Linf_sigma = 0.0;
  double Linf_bound_slack = 0.0;
  double energy_L2 = 0.0;
  double energy_H1 = 0.0;
  double antisym_norm = 0.0;
  double dissipation_I11 = 0.0;
  double forcing_work = 0.0;

  bool operator==(const DiagnosticsRecord&) const = default;
};

namespace diagnostics {

/// CSV column order of DiagnosticsRecord.
inline constexpr std::array<std::string_view, 13> kColumns = {
    "t",          "L2_u",     "H1_u",      "H2_u",         "L2_sigma",        "H1_sigma",    "Linf_sigma",
    "Linf_bound_slack", "energy_L2", "energy_H1", "antisym_norm", "dissipation_I11", "forcing_work"};

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& record);

struct Norms {
  double L2_u = 0.0;
  double H1_u = 0.0;
  double H2_u = 0.0;
  double Linf_u = 0.0;
  double L2_sigma = 0.0;
  double H1_sigma = 0.0;
  double H2_sigma = 0.0;
  double Linf_sigma = 0.0;
};

/// Sobolev norms use the multiplier (1 + (2 pi |k|)^2)^(s/2); L-infinity is the
/// grid maximum of the pointwise Euclidean/Frobenius magnitude.
Norms norms(const State& state);

/// (1/2)[|u|^2 + |tau|^2 / E + alpha^2 |grad u|^2 + beta^4 |lap u|^2], tau = sigma + (P/2) I.
double energy_L2(const State& state, const PhysicalParams& params, double alpha, double beta);
/// (1/2)[|grad u|^2 + |grad sigma|^2 / E + alpha^2 |lap u|^2 + beta^4 |grad lap u|^2].
double energy_H1(const State& state, const PhysicalParams& params, double alpha, double beta);

/// (|sigma_0|_inf + 2P) - |sigma|_inf.
double linf_bound_check(const State& state, double sigma0_linf, double P);

/// |A(sigma)|_{L2}, A = (sigma - sigma^T)/2; zero for symmetric storage.
double antisym_norm(const SpectralField& sigma);

struct DissipationBalance {
  double coercive = 0.0;     ///< -<(4De/P)|dev tau|^2 + (De/2P)(tr tau)^2>, never positive
  double forcing_work = 0.0; ///< <forcing, u>
};
DissipationBalance dissipation_balance(const State& state, const PhysicalParams& params, double epsilon,
                                       const forcing::ForcingFields& fields, Fault fault);

/// <div sigma, u> + <D(u), sigma>; vanishes for matching truncations.
double divergence_pairing(const SpectralField& u, const SpectralField& sigma);

/// |du|^2 + alpha^2 |grad du|^2 + |dsigma|^2 / E. Throws std::invalid_argument
/// when the states differ in grid or time.
double continuous_dependence_metric(const State& a, const State& b, const PhysicalParams& params, double alpha);

/// Fraction of the (mean-free) spectral energy held by modes with 2N/3 < |k|_inf <= N.
double top_third_fraction(const SpectralField& field);

struct Context {
  PhysicalParams physical;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  Fault fault = Fault::none;
  double sigma0_linf = 0.0;
};

DiagnosticsRecord evaluate(const State& state, const Context& context, const forcing::ForcingFields& fields);

}  // namespace diagnostics
}  // namespace kvevp
