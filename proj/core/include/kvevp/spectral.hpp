#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace kvevp {

using Complex = std::complex<double>;

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform M x M grid on the unit torus with Fourier truncation order N.
///
/// Physical sample (i, j) sits at x = (i / M, j / M) and is stored at flat
/// index i * M + j. Spectral coefficients use the same layout in FFT order:
/// index i maps to wavenumber i for i < M / 2 and to i - M otherwise.
class TorusGrid {
 public:
  TorusGrid(int modes, int points);

  int modes() const noexcept { return modes_; }
  int points() const noexcept { return points_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(points_) * points_; }

  int wavenumber(int index) const noexcept { return index < points_ / 2 ? index : index - points_; }
  /// Storage index of wavenumber k (any integer, reduced modulo M).
  int index_of(int k) const noexcept { return ((k % points_) + points_) % points_; }
  std::size_t flat(int i, int j) const noexcept { return static_cast<std::size_t>(i) * points_ + j; }
  double coordinate(int index) const noexcept { return static_cast<double>(index) / points_; }

  bool operator==(const TorusGrid&) const = default;

 private:
  int modes_;
  int points_;
};

/// Number of stored components: scalar 1, vector 2, symmetric tensor 3
/// (11, 12, 22) and full tensor 4 (11, 12, 21, 22).
enum class Rank : int { scalar = 1, vector = 2, sym_tensor = 3, full_tensor = 4 };

constexpr int component_count(Rank r) noexcept { return static_cast<int>(r); }
constexpr bool is_tensor(Rank r) noexcept { return r == Rank::sym_tensor || r == Rank::full_tensor; }

/// Weight of each stored component in the Frobenius norm (the off-diagonal of
/// a symmetric tensor counts twice).
double frobenius_weight(Rank r, int component) noexcept;

/// A multi-component field sampled on the grid (T = double) or stored as
/// Fourier coefficients (T = Complex).
template <class T>
struct Field {
  TorusGrid grid;
  Rank rank;
  std::vector<std::vector<T>> comps;

  Field(const TorusGrid& g, Rank r)
      : grid(g), rank(r), comps(component_count(r), std::vector<T>(g.size(), T{})) {}

  std::span<T> comp(int c) { return comps[static_cast<std::size_t>(c)]; }
  std::span<const T> comp(int c) const { return comps[static_cast<std::size_t>(c)]; }
  int components() const noexcept { return component_count(rank); }

  bool operator==(const Field&) const = default;
};

using GridField = Field<double>;
using SpectralField = Field<Complex>;

namespace spectral {

/// Coefficients with the k = 0 coefficient equal to the grid mean.
SpectralField forward(const GridField& samples);
/// Real samples. Throws SpectralError when Hermitian symmetry is violated
/// by more than 1e-10 relative to the largest coefficient.
GridField inverse(const SpectralField& field);

/// Single-component kernels used by the solver's hot loop.
void forward_component(const TorusGrid& grid, std::span<const double> in, std::span<Complex> out);
void inverse_component(const TorusGrid& grid, std::span<const Complex> in, std::span<double> out);

/// max_k |a_k - conj(a_{-k})| over all components.
double hermitian_defect(const SpectralField& field);

/// Component-wise derivative along direction 0 (x1) or 1 (x2).
SpectralField partial(const SpectralField& field, int direction);
SpectralField gradient(const SpectralField& scalar);
/// Vector -> scalar; tensor -> vector with (div s)_i = sum_j d_j s_ij.
SpectralField divergence(const SpectralField& field);
SpectralField laplacian(const SpectralField& field);

/// Zeroes every coefficient with |k|_inf > order.
SpectralField project_modes(const SpectralField& field, int order);
void project_in_place(SpectralField& field, int order);

/// Copies the modes |k|_inf <= min(N_from, N_to) onto `grid`; all others are zero.
SpectralField transfer(const SpectralField& field, const TorusGrid& grid);

/// m(k) = 1 + alpha^2 (2 pi |k|)^2 + beta^4 (2 pi |k|)^4.
double voigt_multiplier(int k1, int k2, double alpha, double beta) noexcept;
SpectralField invert_voigt(const SpectralField& rhs, double alpha, double beta);
SpectralField apply_voigt(const SpectralField& field, double alpha, double beta);

/// Convolution with a Gaussian of standard deviation delta, realised as the
/// multiplier of the periodised, sampled, unit-mass kernel. The discrete
/// kernel is positive, so the operation never increases the grid maximum.
/// Throws SpectralError for delta < 0.
SpectralField mollify(const SpectralField& field, double delta);
/// Per-wavenumber 1D factor of the mollifier (index order as the grid).
std::vector<double> mollifier_factors(const TorusGrid& grid, double delta);

/// Coefficient-space inner product sum_c w_c sum_k Re(a conj b); w_c is the
/// Frobenius weight of the component.
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& f);
/// sum_k (2 pi |k|)^(2s) |a_k|^2, homogeneous seminorm squared.
double seminorm_sq(const SpectralField& f, int s);
/// sum_k (1 + (2 pi |k|)^2)^s |a_k|^2, inhomogeneous Sobolev norm squared.
double sobolev_norm_sq(const SpectralField& f, int s);

/// Grid mean of the weighted pointwise product.
double grid_inner(const GridField& a, const GridField& b);
double grid_l2_norm(const GridField& f);
/// Max over grid points of the pointwise (Frobenius) magnitude.
double grid_max_norm(const GridField& f);

}  // namespace spectral

/// Elementwise helpers on spectral fields (same grid and rank).
void axpy(SpectralField& y, double a, const SpectralField& x);
SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

}  // namespace kvevp
