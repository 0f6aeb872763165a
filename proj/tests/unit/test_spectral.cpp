#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kvevp/spectral.hpp"
#include "support.hpp"

using namespace kvevp;
using kvevp::testing::max_abs;
using kvevp::testing::max_abs_diff;
using kvevp::testing::random_field;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples f(x1, x2) for every component on the grid.
template <class F>
GridField sample(const TorusGrid& g, Rank rank, F f) {
  GridField out(g, rank);
  for (int c = 0; c < out.components(); ++c)
    for (int i = 0; i < g.points(); ++i)
      for (int j = 0; j < g.points(); ++j) out.comps[c][g.flat(i, j)] = f(c, g.coordinate(i), g.coordinate(j));
  return out;
}

}  // namespace

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(TorusGrid(0, 8), SpectralError);
  EXPECT_THROW(TorusGrid(4, 9), SpectralError);
  EXPECT_THROW(TorusGrid(4, 8), SpectralError);
  EXPECT_NO_THROW(TorusGrid(4, 10));
}

TEST(Grid, WavenumberIndexing) {
  const TorusGrid g(4, 10);
  EXPECT_EQ(g.wavenumber(0), 0);
  EXPECT_EQ(g.wavenumber(4), 4);
  EXPECT_EQ(g.wavenumber(5), -5);
  EXPECT_EQ(g.wavenumber(9), -1);
  for (int k = -4; k <= 4; ++k) EXPECT_EQ(g.wavenumber(g.index_of(k)), k);
  EXPECT_DOUBLE_EQ(g.coordinate(5), 0.5);
}

TEST(Spectral, ZeroFieldRoundTripsToZero) {
  const TorusGrid g(8, 32);
  const GridField z(g, Rank::vector);
  EXPECT_EQ(spectral::inverse(spectral::forward(z)), z);
}

TEST(Spectral, ConstantSamplesGiveMeanCoefficient) {
  const TorusGrid g(8, 32);
  const auto f = sample(g, Rank::scalar, [](int, double, double) { return 3.25; });
  const auto a = spectral::forward(f);
  EXPECT_NEAR(a.comps[0][0].real(), 3.25, 1e-15);
  auto rest = a;
  rest.comps[0][0] = 0.0;
  EXPECT_LT(max_abs(rest), 1e-15);
}

TEST(Spectral, SingleCosineHasHalfAmplitudeCoefficients) {
  const TorusGrid g(8, 32);
  const auto f = sample(g, Rank::scalar, [](int, double x, double y) { return std::cos(kTwoPi * (2 * x - 3 * y)); });
  const auto a = spectral::forward(f);
  EXPECT_NEAR(std::abs(a.comps[0][g.flat(g.index_of(2), g.index_of(-3))] - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a.comps[0][g.flat(g.index_of(-2), g.index_of(3))] - 0.5), 0.0, 1e-14);
}

TEST(Spectral, InverseRejectsNonHermitianInput) {
  const TorusGrid g(4, 10);
  SpectralField a(g, Rank::scalar);
  a.comps[0][g.flat(1, 0)] = Complex(1.0, 0.0);  // partner (-1, 0) missing
  EXPECT_GT(spectral::hermitian_defect(a), 0.5);
  EXPECT_THROW(spectral::inverse(a), SpectralError);
}

TEST(Spectral, ForwardOutputIsExactlyHermitian) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  const TorusGrid g(8, 32);
  GridField f(g, Rank::sym_tensor);
  for (auto& c : f.comps)
    for (auto& v : c) v = n(rng);
  EXPECT_EQ(spectral::hermitian_defect(spectral::forward(f)), 0.0);
}

// Property: forward/inverse round trip over 100 random grid fields.
TEST(Spectral, RoundTripRandomSamples) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  const TorusGrid g(32, 128);
  for (int trial = 0; trial < 100; ++trial) {
    GridField f(g, Rank::scalar);
    for (auto& v : f.comps[0]) v = n(rng);
    const auto back = spectral::inverse(spectral::forward(f));
    ASSERT_LT(max_abs_diff(back, f), 1e-12);
  }
}

// Property: Parseval, grid mean of squares equals the coefficient sum.
TEST(Spectral, ParsevalRandomFields) {
  std::mt19937_64 rng(12);
  const TorusGrid g(32, 128);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_field(g, trial % 2 ? Rank::sym_tensor : Rank::vector, rng);
    const double grid = spectral::grid_l2_norm(spectral::inverse(a));
    ASSERT_NEAR(grid, spectral::l2_norm(a), 1e-12 * spectral::l2_norm(a));
  }
}

TEST(Spectral, DerivativeExactOnSingleModes) {
  const TorusGrid g(8, 32);
  for (int k1 = -8; k1 <= 8; k1 += 3)
    for (int k2 = -8; k2 <= 8; k2 += 2) {
      const auto f = sample(g, Rank::scalar, [&](int, double x, double y) { return std::sin(kTwoPi * (k1 * x + k2 * y)); });
      const auto d = spectral::inverse(spectral::gradient(spectral::forward(f)));
      const auto want = sample(g, Rank::vector, [&](int c, double x, double y) {
        return kTwoPi * (c == 0 ? k1 : k2) * std::cos(kTwoPi * (k1 * x + k2 * y));
      });
      ASSERT_LT(max_abs_diff(d, want), 1e-11 * kTwoPi * 8) << k1 << ' ' << k2;
    }
}

TEST(Spectral, NyquistDerivativeIsZero) {
  const TorusGrid g(4, 10);
  const auto f = sample(g, Rank::scalar, [](int, double x, double) { return std::cos(kTwoPi * 5 * x); });
  EXPECT_LT(max_abs(spectral::partial(spectral::forward(f), 0)), 1e-12);
}

TEST(Spectral, LaplacianAndDivergenceOfSingleModes) {
  const TorusGrid g(8, 32);
  const auto f = sample(g, Rank::scalar, [](int, double x, double y) { return std::cos(kTwoPi * (x + 2 * y)); });
  const auto lap = spectral::inverse(spectral::laplacian(spectral::forward(f)));
  const double q2 = kTwoPi * kTwoPi * 5.0;
  for (std::size_t p = 0; p < g.size(); ++p) ASSERT_NEAR(lap.comps[0][p], -q2 * f.comps[0][p], 1e-10);

  // div of (s11, s12, s22) = (cos 2pi x, 0, sin 2pi y): (-2pi sin 2pi x, 2pi cos 2pi y)
  const auto s = sample(g, Rank::sym_tensor, [](int c, double x, double y) {
    return c == 0 ? std::cos(kTwoPi * x) : c == 2 ? std::sin(kTwoPi * y) : 0.0;
  });
  const auto div = spectral::inverse(spectral::divergence(spectral::forward(s)));
  const auto want = sample(g, Rank::vector, [](int c, double x, double y) {
    return c == 0 ? -kTwoPi * std::sin(kTwoPi * x) : kTwoPi * std::cos(kTwoPi * y);
  });
  EXPECT_LT(max_abs_diff(div, want), 1e-12);
}

// Property: invert_voigt undoes apply_voigt.
TEST(Spectral, VoigtInverseRoundTrip) {
  std::mt19937_64 rng(13);
  const TorusGrid g(32, 128);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_field(g, Rank::vector, rng);
    const double beta = trial % 2 ? 0.05 : 0.0;
    const auto back = spectral::invert_voigt(spectral::apply_voigt(a, 0.1, beta), 0.1, beta);
    ASSERT_LT(max_abs_diff(back, a), 1e-13 * std::max(1.0, max_abs(a)));
  }
}

TEST(Spectral, VoigtMultiplierValues) {
  EXPECT_DOUBLE_EQ(spectral::voigt_multiplier(0, 0, 0.3, 0.2), 1.0);
  const double q = kTwoPi * 5.0;
  EXPECT_NEAR(spectral::voigt_multiplier(3, 4, 0.1, 0.0), 1.0 + 0.01 * q * q, 1e-12);
  EXPECT_NEAR(spectral::voigt_multiplier(3, 4, 0.1, 0.1), 1.0 + 0.01 * q * q + 1e-4 * q * q * q * q, 1e-9);
}

TEST(Spectral, ProjectionKeepsLowModesOnly) {
  std::mt19937_64 rng(14);
  const TorusGrid g(8, 32);
  GridField f(g, Rank::scalar);
  std::normal_distribution<double> n;
  for (auto& v : f.comps[0]) v = n(rng);
  const auto a = spectral::forward(f);
  const auto p = spectral::project_modes(a, 3);
  for (int i = 0; i < g.points(); ++i)
    for (int j = 0; j < g.points(); ++j) {
      const bool kept = std::abs(g.wavenumber(i)) <= 3 && std::abs(g.wavenumber(j)) <= 3;
      ASSERT_EQ(p.comps[0][g.flat(i, j)], kept ? a.comps[0][g.flat(i, j)] : Complex{});
    }
  EXPECT_EQ(spectral::project_modes(p, 3), p);  // idempotent
}

TEST(Spectral, TransferBetweenGridsPreservesSharedModes) {
  std::mt19937_64 rng(15);
  const TorusGrid coarse(8, 32);
  const TorusGrid fine(16, 48);
  const auto a = random_field(coarse, Rank::vector, rng);
  const auto up = spectral::transfer(a, fine);
  EXPECT_EQ(spectral::transfer(up, coarse), a);
  EXPECT_NEAR(spectral::l2_norm(up), spectral::l2_norm(a), 1e-15);
  // Samples agree where the grids share points: i/32 = (3i/2)/48 for even i.
  const auto gc = spectral::inverse(a);
  const auto gf = spectral::inverse(up);
  for (int i = 0; i < 32; i += 2)
    for (int j = 0; j < 32; j += 2)
      ASSERT_NEAR(gc.comps[0][coarse.flat(i, j)], gf.comps[0][fine.flat(3 * i / 2, 3 * j / 2)], 1e-13);
}

TEST(Spectral, MollifierPreservesMeanAndContractsMaximum) {
  std::mt19937_64 rng(16);
  const TorusGrid g(16, 64);
  for (double delta : {0.0, 0.005, 0.02, 0.1}) {
    const auto f = random_field(g, Rank::sym_tensor, rng, 1.0, 16);
    const auto m = spectral::mollify(f, delta);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(m.comps[c][0] - f.comps[c][0]), 0.0, 1e-15);
    EXPECT_LE(spectral::grid_max_norm(spectral::inverse(m)), spectral::grid_max_norm(spectral::inverse(f)) + 1e-14);
  }
  EXPECT_EQ(spectral::mollify(random_field(g, Rank::scalar, rng), 0.0).rank, Rank::scalar);
  EXPECT_THROW(spectral::mollify(random_field(g, Rank::scalar, rng), -1.0), SpectralError);
}

TEST(Spectral, MollifierFactorsMatchGaussianAwayFromAliasing) {
  const TorusGrid g(32, 128);
  const double delta = 0.03;
  const auto s = spectral::mollifier_factors(g, delta);
  for (int k = 0; k <= 10; ++k) {
    const double q = kTwoPi * k * delta;
    EXPECT_NEAR(s[static_cast<std::size_t>(g.index_of(k))], std::exp(-0.5 * q * q), 1e-6) << k;
  }
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i], 1.0 + 1e-15);
}

TEST(Spectral, SobolevNormsOfSingleMode) {
  const TorusGrid g(8, 32);
  const auto f = spectral::forward(sample(g, Rank::scalar, [](int, double x, double) { return std::cos(kTwoPi * 2 * x); }));
  const double q2 = kTwoPi * kTwoPi * 4.0;
  EXPECT_NEAR(spectral::seminorm_sq(f, 0), 0.5, 1e-14);
  EXPECT_NEAR(spectral::seminorm_sq(f, 1), 0.5 * q2, 1e-10);
  EXPECT_NEAR(spectral::sobolev_norm_sq(f, 1), 0.5 * (1 + q2), 1e-10);
  EXPECT_NEAR(spectral::sobolev_norm_sq(f, 2), 0.5 * (1 + q2) * (1 + q2), 1e-7);
}

TEST(Spectral, FrobeniusWeightsInNorms) {
  const TorusGrid g(4, 10);
  SpectralField s(g, Rank::sym_tensor);
  s.comps[1][0] = 1.0;  // s12 = s21 = 1
  EXPECT_NEAR(spectral::l2_norm(s), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(spectral::grid_max_norm(spectral::inverse(s)), std::sqrt(2.0), 1e-15);
}

TEST(Spectral, GridMismatchThrows) {
  const TorusGrid a(4, 10);
  const TorusGrid b(4, 12);
  SpectralField x(a, Rank::scalar);
  const SpectralField y(b, Rank::scalar);
  EXPECT_THROW(axpy(x, 1.0, y), SpectralError);
}
