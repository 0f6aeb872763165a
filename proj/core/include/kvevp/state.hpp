#pragma once

#include "kvevp/spectral.hpp"

namespace kvevp {

/// Galerkin state: velocity (vector) and stress (symmetric or, in the
/// symmetry debug mode, full tensor), both truncated at the grid's order N.
struct State {
  SpectralField u;
  SpectralField sigma;
  double t = 0.0;

  const TorusGrid& grid() const noexcept { return u.grid; }
  bool operator==(const State&) const = default;
};

}  // namespace kvevp
