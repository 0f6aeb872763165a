#pragma once

#include "kvevp/config.hpp"
#include "kvevp/spectral.hpp"

namespace kvevp::rheology {

/// Spectral coefficients of D(u) = (grad u + grad u^T) / 2 as a symmetric tensor.
SpectralField deformation_coefficients(const SpectralField& u);
/// D(u) sampled on the grid.
GridField deformation(const SpectralField& u);

/// sqrt(|D|^2 + epsilon^2) pointwise, |D|^2 = D11^2 + 2 D12^2 + D22^2.
GridField strain_rate(const GridField& deformation, double epsilon);

/// Pointwise right-hand side of the stress equation,
///   d sigma/dt = E [ D - (4 De/P) dev(sigma) - (De / 2P) tr(sigma) I - (De/2) I ],
/// for a symmetric (3 components) or full (4 components) stress.
GridField constitutive_rhs(const GridField& sigma, const GridField& deformation, const GridField& strain_rate,
                           const PhysicalParams& params);
GridField constitutive_rhs(const GridField& sigma, const SpectralField& u, const PhysicalParams& params,
                           double epsilon);

/// tau = sigma + (P/2) I and its inverse.
GridField tau_shift(const GridField& sigma, double P);
GridField sigma_unshift(const GridField& tau, double P);
SpectralField tau_shift(const SpectralField& sigma, double P);
SpectralField sigma_unshift(const SpectralField& tau, double P);

struct DeviatoricSplit {
  GridField deviator; ///< sigma - (tr sigma / 2) I, same rank as the input
  GridField trace;    ///< scalar
};
DeviatoricSplit deviatoric_split(const GridField& sigma);

/// grad De = D : grad D / De, evaluated on the grid. Requires epsilon > 0.
GridField strain_rate_gradient(const SpectralField& u, double epsilon);

}  // namespace kvevp::rheology
