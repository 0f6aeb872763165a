#include "kvevp/forcing.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kvevp::forcing {

GridField perp(const GridField& v) {
  if (v.rank != Rank::vector) throw std::invalid_argument("perp: expects a vector field");
  GridField out(v.grid, Rank::vector);
  for (std::size_t p = 0; p < v.grid.size(); ++p) {
    out.comps[0][p] = -v.comps[1][p];
    out.comps[1][p] = v.comps[0][p];
  }
  return out;
}

SpectralField perp(const SpectralField& v) {
  if (v.rank != Rank::vector) throw std::invalid_argument("perp: expects a vector field");
  SpectralField out(v.grid, Rank::vector);
  for (std::size_t p = 0; p < v.grid.size(); ++p) {
    out.comps[0][p] = -v.comps[1][p];
    out.comps[1][p] = v.comps[0][p];
  }
  return out;
}

namespace {

// c rho |w| (w cos a + w^perp sin a) at every point, accumulated into `out`.
void add_turned_quadratic(GridField& out, std::span<const double> w1, std::span<const double> w2, double coeff,
                          double angle) {
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);
  auto o1 = out.comp(0);
  auto o2 = out.comp(1);
  for (std::size_t p = 0; p < o1.size(); ++p) {
    const double s = coeff * std::hypot(w1[p], w2[p]);
    o1[p] += s * (w1[p] * ca - w2[p] * sa);
    o2[p] += s * (w2[p] * ca + w1[p] * sa);
  }
}

}  // namespace

GridField atmospheric_drag(const GridField& wind, const PhysicalParams& params) {
  GridField out(wind.grid, Rank::vector);
  add_turned_quadratic(out, wind.comp(0), wind.comp(1), params.c_a * params.rho_a, params.phi);
  return out;
}

GridField oceanic_drag(const GridField& current, const GridField& u, const PhysicalParams& params) {
  if (!(current.grid == u.grid)) throw std::invalid_argument("oceanic_drag: grid mismatch");
  std::vector<double> r1(u.grid.size()), r2(u.grid.size());
  for (std::size_t p = 0; p < r1.size(); ++p) {
    r1[p] = current.comps[0][p] - u.comps[0][p];
    r2[p] = current.comps[1][p] - u.comps[1][p];
  }
  GridField out(u.grid, Rank::vector);
  add_turned_quadratic(out, r1, r2, params.c_w * params.rho_w, params.theta);
  return out;
}

SpectralField coriolis(const SpectralField& u, double Omega) { return Omega * perp(u); }

SpectralField tilt(const SpectralField& surface_height, double g) {
  return (-g) * spectral::gradient(surface_height);
}

SpectralField synthesize(const FieldSpec& spec, const TorusGrid& grid, Rank rank, std::uint64_t seed, double P) {
  SpectralField out(grid, rank);
  const int n = out.components();
  switch (spec.kind) {
    case FieldSpec::Kind::zero: break;
    case FieldSpec::Kind::steady:
      if (rank != Rank::sym_tensor) throw std::invalid_argument("steady: only defined for the stress");
      out.comps[0][0] = -0.5 * P;
      out.comps[2][0] = -0.5 * P;
      break;
    case FieldSpec::Kind::constant:
      if (static_cast<int>(spec.values.size()) != n) throw std::invalid_argument("constant: wrong value count");
      for (int c = 0; c < n; ++c) out.comps[static_cast<std::size_t>(c)][0] = spec.values[static_cast<std::size_t>(c)];
      break;
    case FieldSpec::Kind::fourier:
      for (const auto& term : spec.terms) {
        if (term.component < 0 || term.component >= n) throw std::invalid_argument("fourier: bad component");
        if (std::abs(term.k1) > grid.modes() || std::abs(term.k2) > grid.modes())
          throw std::invalid_argument("fourier: wavenumber beyond the truncation order");
        auto a = out.comp(term.component);
        if (term.k1 == 0 && term.k2 == 0) {
          a[0] += term.amplitude * std::cos(term.phase);
          continue;
        }
        const Complex c = 0.5 * term.amplitude * std::polar(1.0, term.phase);
        a[grid.flat(grid.index_of(term.k1), grid.index_of(term.k2))] += c;
        a[grid.flat(grid.index_of(-term.k1), grid.index_of(-term.k2))] += std::conj(c);
      }
      break;
    case FieldSpec::Kind::random: {
      if (spec.max_mode < 1 || spec.max_mode > grid.modes())
        throw std::invalid_argument("random: max_mode must lie in [1, N]");
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(rank)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal;
      const int kmax = spec.max_mode;
      for (int c = 0; c < n; ++c) {
        auto a = out.comp(c);
        for (int k1 = 0; k1 <= kmax; ++k1) {
          for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;  // one representative per conjugate pair
            const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
            const double re = normal(rng);
            const double im = normal(rng);
            const Complex v = decay * Complex(re, im);
            a[grid.flat(grid.index_of(k1), grid.index_of(k2))] = v;
            a[grid.flat(grid.index_of(-k1), grid.index_of(-k2))] = std::conj(v);
          }
        }
      }
      const double peak = spectral::grid_max_norm(spectral::inverse(out));
      if (peak > 0.0) out = (spec.amplitude / peak) * std::move(out);
      break;
    }
  }
  return out;
}

ForcingFields::ForcingFields(const ForcingSpec& spec, const TorusGrid& grid, std::uint64_t seed)
    : grid_(grid),
      spec_(spec),
      wind_(grid, Rank::vector),
      current_(grid, Rank::vector),
      height_(grid, Rank::scalar) {
  has_wind_ = spec.wind.kind != FieldSpec::Kind::zero;
  has_current_ = spec.current.kind != FieldSpec::Kind::zero;
  has_height_ = spec.surface_height.kind != FieldSpec::Kind::zero;
  if (has_wind_) wind_ = spectral::inverse(synthesize(spec.wind, grid, Rank::vector, seed ^ 0xA11u));
  if (has_current_) current_ = spectral::inverse(synthesize(spec.current, grid, Rank::vector, seed ^ 0xC0Au));
  if (has_height_) height_ = synthesize(spec.surface_height, grid, Rank::scalar, seed ^ 0x4E1u);
}

namespace {

double modulation(const FieldSpec& spec, double t) { return spec.omega ? std::cos(*spec.omega * t) : 1.0; }

}  // namespace

GridField ForcingFields::wind(double t) const {
  const double s = modulation(spec_.wind, t);
  if (s == 1.0) return wind_;
  GridField out = wind_;
  for (auto& comp : out.comps)
    for (double& v : comp) v *= s;
  return out;
}

GridField ForcingFields::current(double t) const {
  const double s = modulation(spec_.current, t);
  if (s == 1.0) return current_;
  GridField out = current_;
  for (auto& comp : out.comps)
    for (double& v : comp) v *= s;
  return out;
}

SpectralField ForcingFields::surface_height(double t) const {
  const double s = modulation(spec_.surface_height, t);
  if (s == 1.0) return height_;
  return s * height_;
}

GridField drag(const GridField& u, const ForcingFields& fields, const PhysicalParams& params, Fault fault, double t) {
  GridField out = oceanic_drag(fields.current(t), u, params);
  if (fault == Fault::drag_sign)
    for (auto& comp : out.comps)
      for (double& v : comp) v = -v;
  if (fields.has_wind()) {
    const auto wind = fields.wind(t);
    add_turned_quadratic(out, wind.comp(0), wind.comp(1), params.c_a * params.rho_a, params.phi);
  }
  return out;
}

SpectralField linear_forcing(const SpectralField& u, const ForcingFields& fields, const PhysicalParams& params,
                             double t) {
  SpectralField out = coriolis(u, params.Omega);
  if (fields.has_surface_height()) axpy(out, 1.0, tilt(fields.surface_height(t), params.g));
  return out;
}

SpectralField total_forcing(const SpectralField& u, const ForcingFields& fields, const PhysicalParams& params,
                            Fault fault, double t) {
  auto out = spectral::forward(drag(spectral::inverse(u), fields, params, fault, t));
  axpy(out, 1.0, linear_forcing(u, fields, params, t));
  spectral::project_in_place(out, u.grid.modes());
  return out;
}

}  // namespace kvevp::forcing
