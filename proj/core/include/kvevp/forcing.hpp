#pragma once

#include <cstdint>

#include "kvevp/config.hpp"
#include "kvevp/spectral.hpp"

namespace kvevp::forcing {

/// v^perp = (-v2, v1).
GridField perp(const GridField& v);
SpectralField perp(const SpectralField& v);

/// c_a rho_a |U_a| (U_a cos phi + U_a^perp sin phi), pointwise.
GridField atmospheric_drag(const GridField& wind, const PhysicalParams& params);
/// c_w rho_w |U_w - u| [(U_w - u) cos theta + (U_w - u)^perp sin theta], pointwise.
GridField oceanic_drag(const GridField& current, const GridField& u, const PhysicalParams& params);
/// Omega u^perp.
SpectralField coriolis(const SpectralField& u, double Omega);
/// -g grad H0.
SpectralField tilt(const SpectralField& surface_height, double g);

/// Band-limited field described by `spec`. Random fields are drawn from
/// `seed` and rescaled so that their grid maximum (Frobenius) equals the
/// requested amplitude. `P` is used by the `steady` stress.
SpectralField synthesize(const FieldSpec& spec, const TorusGrid& grid, Rank rank, std::uint64_t seed,
                         double P = 1.0);

/// U_a, U_w and H0 prepared once on a grid; time modulation applied on access.
class ForcingFields {
 public:
  ForcingFields(const ForcingSpec& spec, const TorusGrid& grid, std::uint64_t seed);

  GridField wind(double t) const;
  GridField current(double t) const;
  SpectralField surface_height(double t) const;

  bool has_wind() const noexcept { return has_wind_; }
  bool has_current() const noexcept { return has_current_; }
  bool has_surface_height() const noexcept { return has_height_; }
  const TorusGrid& grid() const noexcept { return grid_; }

 private:
  TorusGrid grid_;
  ForcingSpec spec_;
  GridField wind_;
  GridField current_;
  SpectralField height_;
  bool has_wind_ = false;
  bool has_current_ = false;
  bool has_height_ = false;
};

/// Pointwise drag T_a + T_w on the grid. Fault::drag_sign flips T_w.
GridField drag(const GridField& u, const ForcingFields& fields, const PhysicalParams& params, Fault fault, double t);
/// Spectral part Omega u^perp - g grad H0.
SpectralField linear_forcing(const SpectralField& u, const ForcingFields& fields, const PhysicalParams& params,
                             double t);
/// P_N [T_a + T_w + Omega u^perp - g grad H0] at time t.
SpectralField total_forcing(const SpectralField& u, const ForcingFields& fields, const PhysicalParams& params,
                            Fault fault, double t);

}  // namespace kvevp::forcing
