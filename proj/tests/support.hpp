#pragma once

#include <cstdint>
#include <random>

#include "kvevp/config.hpp"
#include "kvevp/forcing.hpp"
#include "kvevp/spectral.hpp"

namespace kvevp::testing {

// Small desk-scale setup so unit tests stay fast.
inline Config small_config() {
  Config c = default_config();
  c.run.modes = 8;
  c.run.points = 32;
  c.run.t_final = 0.2;
  c.run.output_every = 5;
  return c;
}

inline SpectralField random_field(const TorusGrid& g, Rank rank, std::mt19937_64& rng, double amp = 1.0,
                                  int kmax = 0) {
  std::uniform_int_distribution<int> k(1, g.modes());
  return forcing::synthesize(FieldSpec::random(amp, kmax > 0 ? kmax : k(rng)), g, rank, rng());
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.comps.size(); ++c)
    for (std::size_t f = 0; f < a.comps[c].size(); ++f) m = std::max(m, std::abs(a.comps[c][f] - b.comps[c][f]));
  return m;
}

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.comps.size(); ++c)
    for (std::size_t f = 0; f < a.comps[c].size(); ++f) m = std::max(m, std::abs(a.comps[c][f] - b.comps[c][f]));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& comp : a.comps)
    for (const auto& v : comp) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kvevp::testing
