#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kvevp/forcing.hpp"
#include "support.hpp"

using namespace kvevp;
using kvevp::testing::max_abs;
using kvevp::testing::max_abs_diff;
using kvevp::testing::random_field;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridField constant_vector(const TorusGrid& g, double a, double b) {
  GridField v(g, Rank::vector);
  for (auto& x : v.comps[0]) x = a;
  for (auto& x : v.comps[1]) x = b;
  return v;
}

}  // namespace

TEST(Perp, Examples) {
  const TorusGrid g(4, 10);
  const auto p = forcing::perp(constant_vector(g, 1.0, 2.0));
  EXPECT_EQ(p, constant_vector(g, -2.0, 1.0));
  EXPECT_EQ(forcing::perp(constant_vector(g, 0.0, 0.0)), constant_vector(g, 0.0, 0.0));
  std::mt19937_64 rng(31);
  const auto v = random_field(g, Rank::vector, rng);
  EXPECT_EQ(forcing::perp(forcing::perp(v)), -1.0 * v);
}

TEST(AtmosphericDrag, Examples) {
  const TorusGrid g(4, 10);
  PhysicalParams p;
  EXPECT_EQ(forcing::atmospheric_drag(constant_vector(g, 0, 0), p), constant_vector(g, 0, 0));
  p.phi = 0.0;
  const auto t = forcing::atmospheric_drag(constant_vector(g, 1, 0), p);
  EXPECT_NEAR(t.comps[0][3], 1.56e-3, 1e-18);
  EXPECT_NEAR(t.comps[1][3], 0.0, 1e-18);
  p.phi = std::numbers::pi / 2;
  const auto r = forcing::atmospheric_drag(constant_vector(g, 1, 0), p);
  EXPECT_NEAR(r.comps[0][0], 0.0, 1e-18);
  EXPECT_NEAR(r.comps[1][0], p.c_a * p.rho_a, 1e-18);
}

TEST(OceanicDrag, VanishesAtCurrentAndIsQuadratic) {
  std::mt19937_64 rng(32);
  const TorusGrid g(8, 32);
  PhysicalParams p;
  const auto current = spectral::inverse(random_field(g, Rank::vector, rng));
  EXPECT_LT(kvevp::testing::max_abs_diff(forcing::oceanic_drag(current, current, p), GridField(g, Rank::vector)), 1e-300);

  const auto u = spectral::inverse(random_field(g, Rank::vector, rng));
  const GridField zero(g, Rank::vector);
  GridField twice = u;
  for (auto& c : twice.comps)
    for (double& v : c) v *= 2.0;
  const auto a = forcing::oceanic_drag(zero, u, p);
  const auto b = forcing::oceanic_drag(zero, twice, p);
  for (std::size_t q = 0; q < g.size(); ++q) {
    ASSERT_NEAR(std::hypot(b.comps[0][q], b.comps[1][q]), 4.0 * std::hypot(a.comps[0][q], a.comps[1][q]), 1e-12);
  }
  // Depends on u only through U_w - u.
  GridField shifted_u = u;
  GridField shifted_w = zero;
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < g.size(); ++q) {
      shifted_u.comps[c][q] += 0.25;
      shifted_w.comps[c][q] += 0.25;
    }
  EXPECT_LT(max_abs_diff(forcing::oceanic_drag(shifted_w, shifted_u, p), a), 1e-12);
}

// Property: with no current the ocean drag only removes energy, exactly -c rho cos(theta) |u|^3.
TEST(OceanicDrag, DissipativeWithoutCurrent) {
  std::mt19937_64 rng(33);
  const TorusGrid g(8, 32);
  PhysicalParams p;
  const GridField zero(g, Rank::vector);
  for (int t = 0; t < 100; ++t) {
    const auto u = spectral::inverse(random_field(g, Rank::vector, rng));
    const auto drag = forcing::oceanic_drag(zero, u, p);
    const double work = spectral::grid_inner(drag, u);
    double cube = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) cube += std::pow(std::hypot(u.comps[0][q], u.comps[1][q]), 3);
    cube /= static_cast<double>(g.size());
    ASSERT_LE(work, 0.0);
    ASSERT_NEAR(work, -p.c_w * p.rho_w * std::cos(p.theta) * cube, 1e-12 * std::max(1.0, cube));
  }
}

TEST(Coriolis, ExamplesAndOrthogonality) {
  const TorusGrid g(4, 10);
  SpectralField u(g, Rank::vector);
  u.comps[0][0] = 1.0;
  const auto c = forcing::coriolis(u, 1.46e-4);
  EXPECT_NEAR(c.comps[0][0].real(), 0.0, 1e-20);
  EXPECT_NEAR(c.comps[1][0].real(), 1.46e-4, 1e-20);
  EXPECT_EQ(max_abs(forcing::coriolis(u, 0.0)), 0.0);

  std::mt19937_64 rng(34);
  const TorusGrid big(16, 64);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_field(big, Rank::vector, rng);
    ASSERT_LE(std::abs(spectral::inner(forcing::coriolis(v, 1.46e-4), v)), 1e-13);
  }
}

TEST(Tilt, Examples) {
  const TorusGrid g(8, 32);
  SpectralField h(g, Rank::scalar);
  h.comps[0][0] = 5.0;
  EXPECT_EQ(max_abs(forcing::tilt(h, 9.81)), 0.0);

  GridField s(g, Rank::scalar);
  for (int i = 0; i < g.points(); ++i)
    for (int j = 0; j < g.points(); ++j) s.comps[0][g.flat(i, j)] = std::sin(kTwoPi * g.coordinate(i));
  const auto t = spectral::inverse(forcing::tilt(spectral::forward(s), 9.81));
  for (int i = 0; i < g.points(); ++i) {
    ASSERT_NEAR(t.comps[0][g.flat(i, 5)], -9.81 * kTwoPi * std::cos(kTwoPi * g.coordinate(i)), 1e-12);
    ASSERT_NEAR(t.comps[1][g.flat(i, 5)], 0.0, 1e-12);
  }
  std::mt19937_64 rng(35);
  const auto tr = forcing::tilt(random_field(g, Rank::scalar, rng), 9.81);
  EXPECT_EQ(tr.comps[0][0], Complex{});
  EXPECT_EQ(tr.comps[1][0], Complex{});
}

TEST(Synthesize, FourierTermsAreCosines) {
  const TorusGrid g(8, 32);
  FieldSpec spec;
  spec.kind = FieldSpec::Kind::fourier;
  spec.terms = {{1, 2, -1, 0.3, 0.4}, {0, 0, 0, 0.5, 0.0}};
  const auto f = spectral::inverse(forcing::synthesize(spec, g, Rank::vector, 1));
  for (int i = 0; i < g.points(); i += 5)
    for (int j = 0; j < g.points(); j += 3) {
      const double x = g.coordinate(i);
      const double y = g.coordinate(j);
      ASSERT_NEAR(f.comps[0][g.flat(i, j)], 0.5, 1e-14);
      ASSERT_NEAR(f.comps[1][g.flat(i, j)], 0.3 * std::cos(kTwoPi * (2 * x - y) + 0.4), 1e-14);
    }
  spec.terms = {{0, 9, 0, 1.0, 0.0}};
  EXPECT_THROW(forcing::synthesize(spec, g, Rank::vector, 1), std::invalid_argument);
}

TEST(Synthesize, RandomIsBandLimitedScaledAndSeeded) {
  const TorusGrid g(8, 32);
  const auto spec = FieldSpec::random(0.7, 3);
  const auto a = forcing::synthesize(spec, g, Rank::vector, 5);
  EXPECT_NEAR(spectral::grid_max_norm(spectral::inverse(a)), 0.7, 1e-14);
  EXPECT_EQ(spectral::project_modes(a, 3), a);
  EXPECT_EQ(a.comps[0][0], Complex{});
  EXPECT_EQ(forcing::synthesize(spec, g, Rank::vector, 5), a);
  EXPECT_NE(forcing::synthesize(spec, g, Rank::vector, 6), a);
  EXPECT_LE(spectral::hermitian_defect(a), 1e-15);
}

TEST(Synthesize, SteadyIsMinusHalfPIdentity) {
  const TorusGrid g(4, 10);
  FieldSpec spec;
  spec.kind = FieldSpec::Kind::steady;
  const auto s = spectral::inverse(forcing::synthesize(spec, g, Rank::sym_tensor, 1, 3.0));
  for (std::size_t q = 0; q < g.size(); ++q) {
    ASSERT_EQ(s.comps[0][q], -1.5);
    ASSERT_EQ(s.comps[1][q], 0.0);
    ASSERT_EQ(s.comps[2][q], -1.5);
  }
  EXPECT_THROW(forcing::synthesize(spec, g, Rank::vector, 1), std::invalid_argument);
}

TEST(ForcingFields, ModulationAndTotal) {
  const TorusGrid g(8, 32);
  ForcingSpec spec;
  spec.wind = FieldSpec::constant({1.0, 0.0});
  spec.wind.omega = 2.0;
  spec.surface_height.kind = FieldSpec::Kind::fourier;
  spec.surface_height.terms = {{0, 1, 0, 0.01, 0.0}};
  const forcing::ForcingFields fields(spec, g, 1);
  EXPECT_TRUE(fields.has_wind());
  EXPECT_FALSE(fields.has_current());
  EXPECT_NEAR(fields.wind(0.3).comps[0][7], std::cos(0.6), 1e-15);

  PhysicalParams p;
  std::mt19937_64 rng(36);
  const auto u = random_field(g, Rank::vector, rng, 0.2, 3);
  const double t = 0.3;
  // Superposition of individually computed terms.
  auto sum = spectral::forward(forcing::atmospheric_drag(fields.wind(t), p));
  axpy(sum, 1.0, spectral::forward(forcing::oceanic_drag(GridField(g, Rank::vector), spectral::inverse(u), p)));
  axpy(sum, 1.0, forcing::coriolis(u, p.Omega));
  axpy(sum, 1.0, forcing::tilt(fields.surface_height(t), p.g));
  spectral::project_in_place(sum, g.modes());
  EXPECT_LT(max_abs_diff(forcing::total_forcing(u, fields, p, Fault::none, t), sum), 1e-14);

  // Only Coriolis active.
  const forcing::ForcingFields none(ForcingSpec{}, g, 1);
  PhysicalParams no_drag = p;
  no_drag.c_w = 0.0;
  EXPECT_LT(max_abs_diff(forcing::total_forcing(u, none, no_drag, Fault::none, 0.0), forcing::coriolis(u, p.Omega)),
            1e-18);
  // All zero.
  EXPECT_EQ(max_abs(forcing::total_forcing(SpectralField(g, Rank::vector), none, p, Fault::none, 0.0)), 0.0);
}

TEST(ForcingFields, DragSignFaultFlipsOceanDrag) {
  const TorusGrid g(8, 32);
  std::mt19937_64 rng(37);
  const forcing::ForcingFields none(ForcingSpec{}, g, 1);
  PhysicalParams p;
  const auto u = spectral::inverse(random_field(g, Rank::vector, rng));
  const auto good = forcing::drag(u, none, p, Fault::none, 0.0);
  const auto bad = forcing::drag(u, none, p, Fault::drag_sign, 0.0);
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < g.size(); ++q) ASSERT_EQ(bad.comps[c][q], -good.comps[c][q]);
  EXPECT_GT(spectral::grid_inner(bad, u), 0.0);
}
