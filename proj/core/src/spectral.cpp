#include "kvevp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace kvevp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plans for one grid size. Plans are created once under a lock (the
// planner is not thread-safe) with FFTW_ESTIMATE, so the chosen algorithm and
// hence every result is reproducible across runs; execution through the
// new-array interface is thread-safe.
class FftPlans {
 public:
  explicit FftPlans(int m) : m_(m) {
    const std::size_t half = static_cast<std::size_t>(m) * (m / 2 + 1);
    std::vector<double> real(static_cast<std::size_t>(m) * m);
    auto* cplx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_ = fftw_plan_dft_r2c_2d(m, m, real.data(), cplx, flags);
    c2r_ = fftw_plan_dft_c2r_2d(m, m, cplx, real.data(), flags);
    fftw_free(cplx);
    if (!r2c_ || !c2r_) throw SpectralError("FFTW planning failed for M = " + std::to_string(m));
  }
  ~FftPlans() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void r2c(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(r2c_, in, out); }
  void c2r(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(c2r_, in, out); }

 private:
  int m_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

const FftPlans& plans_for(int m) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<FftPlans>(m);
  return *slot;
}

std::vector<Complex>& half_buffer(std::size_t n) {
  thread_local std::vector<Complex> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return buffer;
}

std::vector<double>& real_buffer(std::size_t n) {
  thread_local std::vector<double> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return buffer;
}

void require_same(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw SpectralError(std::string(what) + ": grid mismatch");
}

}  // namespace

TorusGrid::TorusGrid(int modes, int points) : modes_(modes), points_(points) {
  if (modes < 1) throw SpectralError("mode order N must be >= 1");
  if (points % 2 != 0) throw SpectralError("grid size M must be even");
  if (points < 2 * modes + 2) throw SpectralError("grid size M must be >= 2N + 2");
}

double frobenius_weight(Rank r, int component) noexcept {
  return (r == Rank::sym_tensor && component == 1) ? 2.0 : 1.0;
}

namespace spectral {

void forward_component(const TorusGrid& grid, std::span<const double> in, std::span<Complex> out) {
  const int m = grid.points();
  const int h = m / 2 + 1;
  if (in.size() != grid.size() || out.size() != grid.size()) throw SpectralError("forward: dimension mismatch");
  auto& real = real_buffer(grid.size());
  std::copy(in.begin(), in.end(), real.begin());
  auto& half = half_buffer(static_cast<std::size_t>(m) * h);
  plans_for(m).r2c(real.data(), reinterpret_cast<fftw_complex*>(half.data()));

  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int i = 0; i < m; ++i) {
    const Complex* row = half.data() + static_cast<std::size_t>(i) * h;
    Complex* dst = out.data() + grid.flat(i, 0);
    for (int j = 0; j < h; ++j) dst[j] = row[j] * scale;
  }
  // Columns j = 0 and j = M/2 are their own mirror; make them exactly Hermitian.
  for (int j : {0, m / 2}) {
    for (int i = m / 2 + 1; i < m; ++i) out[grid.flat(i, j)] = std::conj(out[grid.flat(m - i, j)]);
    for (int i : {0, m / 2}) out[grid.flat(i, j)] = Complex(out[grid.flat(i, j)].real(), 0.0);
  }
  for (int i = 0; i < m; ++i) {
    const int mi = (m - i) % m;
    for (int j = h; j < m; ++j) out[grid.flat(i, j)] = std::conj(out[grid.flat(mi, m - j)]);
  }
}

void inverse_component(const TorusGrid& grid, std::span<const Complex> in, std::span<double> out) {
  const int m = grid.points();
  const int h = m / 2 + 1;
  if (in.size() != grid.size() || out.size() != grid.size()) throw SpectralError("inverse: dimension mismatch");
  auto& half = half_buffer(static_cast<std::size_t>(m) * h);
  for (int i = 0; i < m; ++i) {
    const Complex* src = in.data() + grid.flat(i, 0);
    std::copy(src, src + h, half.data() + static_cast<std::size_t>(i) * h);
  }
  plans_for(m).c2r(reinterpret_cast<fftw_complex*>(half.data()), out.data());
}

SpectralField forward(const GridField& samples) {
  SpectralField out(samples.grid, samples.rank);
  for (int c = 0; c < samples.components(); ++c) forward_component(samples.grid, samples.comp(c), out.comp(c));
  return out;
}

double hermitian_defect(const SpectralField& field) {
  const auto& g = field.grid;
  const int m = g.points();
  double defect = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    for (int i = 0; i < m; ++i) {
      const int mi = (m - i) % m;
      for (int j = 0; j < m; ++j) {
        const int mj = (m - j) % m;
        defect = std::max(defect, std::abs(a[g.flat(i, j)] - std::conj(a[g.flat(mi, mj)])));
      }
    }
  }
  return defect;
}

GridField inverse(const SpectralField& field) {
  double scale = 0.0;
  for (const auto& comp : field.comps)
    for (const auto& a : comp) scale = std::max(scale, std::abs(a));
  if (!(hermitian_defect(field) <= 1e-10 * std::max(scale, 1e-300)) && scale > 0.0)
    throw SpectralError("inverse: coefficients are not Hermitian-symmetric (field is not real)");
  GridField out(field.grid, field.rank);
  for (int c = 0; c < field.components(); ++c) inverse_component(field.grid, field.comp(c), out.comp(c));
  return out;
}

SpectralField partial(const SpectralField& field, int direction) {
  const auto& g = field.grid;
  const int m = g.points();
  SpectralField out(g, field.rank);
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    auto b = out.comp(c);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const int idx = direction == 0 ? i : j;
        if (2 * idx == m) continue;  // Nyquist: derivative of the real cosine vanishes on the grid
        const double k = kTwoPi * g.wavenumber(idx);
        const auto f = g.flat(i, j);
        b[f] = Complex(-k * a[f].imag(), k * a[f].real());
      }
    }
  }
  return out;
}

SpectralField gradient(const SpectralField& scalar) {
  if (scalar.rank != Rank::scalar) throw SpectralError("gradient: expects a scalar field");
  const auto d1 = partial(scalar, 0);
  const auto d2 = partial(scalar, 1);
  SpectralField out(scalar.grid, Rank::vector);
  out.comps[0] = d1.comps[0];
  out.comps[1] = d2.comps[0];
  return out;
}

SpectralField divergence(const SpectralField& field) {
  const auto d1 = partial(field, 0);
  const auto d2 = partial(field, 1);
  switch (field.rank) {
    case Rank::vector: {
      SpectralField out(field.grid, Rank::scalar);
      auto o = out.comp(0);
      for (std::size_t f = 0; f < field.grid.size(); ++f) o[f] = d1.comps[0][f] + d2.comps[1][f];
      return out;
    }
    case Rank::sym_tensor:
    case Rank::full_tensor: {
      // Row i of the tensor: (s_i1, s_i2).
      const bool full = field.rank == Rank::full_tensor;
      const int s11 = 0, s12 = 1, s21 = full ? 2 : 1, s22 = full ? 3 : 2;
      SpectralField out(field.grid, Rank::vector);
      auto o1 = out.comp(0);
      auto o2 = out.comp(1);
      for (std::size_t f = 0; f < field.grid.size(); ++f) {
        o1[f] = d1.comps[s11][f] + d2.comps[s12][f];
        o2[f] = d1.comps[s21][f] + d2.comps[s22][f];
      }
      return out;
    }
    case Rank::scalar: break;
  }
  throw SpectralError("divergence: expects a vector or tensor field");
}

SpectralField laplacian(const SpectralField& field) {
  const auto& g = field.grid;
  const int m = g.points();
  SpectralField out(g, field.rank);
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    auto b = out.comp(c);
    for (int i = 0; i < m; ++i) {
      const double k1 = g.wavenumber(i);
      for (int j = 0; j < m; ++j) {
        const double k2 = g.wavenumber(j);
        const auto f = g.flat(i, j);
        b[f] = -(kTwoPi * kTwoPi) * (k1 * k1 + k2 * k2) * a[f];
      }
    }
  }
  return out;
}

void project_in_place(SpectralField& field, int order) {
  const auto& g = field.grid;
  const int m = g.points();
  for (int c = 0; c < field.components(); ++c) {
    auto a = field.comp(c);
    for (int i = 0; i < m; ++i) {
      const bool row_out = std::abs(g.wavenumber(i)) > order;
      for (int j = 0; j < m; ++j)
        if (row_out || std::abs(g.wavenumber(j)) > order) a[g.flat(i, j)] = Complex{};
    }
  }
}

SpectralField project_modes(const SpectralField& field, int order) {
  SpectralField out = field;
  project_in_place(out, order);
  return out;
}

SpectralField transfer(const SpectralField& field, const TorusGrid& grid) {
  const auto& src = field.grid;
  const int order = std::min(src.modes(), grid.modes());
  SpectralField out(grid, field.rank);
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    auto b = out.comp(c);
    for (int k1 = -order; k1 <= order; ++k1)
      for (int k2 = -order; k2 <= order; ++k2)
        b[grid.flat(grid.index_of(k1), grid.index_of(k2))] = a[src.flat(src.index_of(k1), src.index_of(k2))];
  }
  return out;
}

double voigt_multiplier(int k1, int k2, double alpha, double beta) noexcept {
  const double q2 = kTwoPi * kTwoPi * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  const double a2 = alpha * alpha;
  const double b4 = beta * beta * beta * beta;
  return 1.0 + a2 * q2 + b4 * q2 * q2;
}

namespace {

template <class Op>
SpectralField apply_radial(const SpectralField& field, Op op) {
  const auto& g = field.grid;
  const int m = g.points();
  SpectralField out(g, field.rank);
  for (int c = 0; c < field.components(); ++c) {
    const auto a = field.comp(c);
    auto b = out.comp(c);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const auto f = g.flat(i, j);
        b[f] = op(a[f], g.wavenumber(i), g.wavenumber(j));
      }
  }
  return out;
}

}  // namespace

SpectralField invert_voigt(const SpectralField& rhs, double alpha, double beta) {
  return apply_radial(rhs, [&](Complex a, int k1, int k2) { return a / voigt_multiplier(k1, k2, alpha, beta); });
}

SpectralField apply_voigt(const SpectralField& field, double alpha, double beta) {
  return apply_radial(field, [&](Complex a, int k1, int k2) { return a * voigt_multiplier(k1, k2, alpha, beta); });
}

std::vector<double> mollifier_factors(const TorusGrid& grid, double delta) {
  if (!(delta >= 0.0)) throw SpectralError("mollify: delta must be >= 0");
  const int m = grid.points();
  std::vector<double> factors(static_cast<std::size_t>(m), 1.0);
  if (delta == 0.0) return factors;

  // Sampled periodised Gaussian, normalised to unit mass.
  const int images = static_cast<int>(std::ceil(6.0 * delta)) + 1;
  std::vector<double> kernel(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    const double x = grid.coordinate(j) - (2 * j >= m ? 1.0 : 0.0);
    double sum = 0.0;
    for (int r = -images; r <= images; ++r) {
      const double d = x + r;
      sum += std::exp(-d * d / (2.0 * delta * delta));
    }
    kernel[static_cast<std::size_t>(j)] = sum;
  }
  double mass = 0.0;
  for (double w : kernel) mass += w;
  for (double& w : kernel) w /= mass;

  for (int i = 0; i < m; ++i) {
    const int k = grid.wavenumber(i);
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      const long long phase = (static_cast<long long>(k) * j) % m;
      s += kernel[static_cast<std::size_t>(j)] * std::cos(kTwoPi * static_cast<double>(phase) / m);
    }
    factors[static_cast<std::size_t>(i)] = s;
  }
  factors[0] = 1.0;
  return factors;
}

SpectralField mollify(const SpectralField& field, double delta) {
  if (!(delta >= 0.0)) throw SpectralError("mollify: delta must be >= 0");
  if (delta == 0.0) return field;
  const auto factors = mollifier_factors(field.grid, delta);
  const auto& g = field.grid;
  return apply_radial(field, [&](Complex a, int k1, int k2) {
    return a * (factors[static_cast<std::size_t>(g.index_of(k1))] * factors[static_cast<std::size_t>(g.index_of(k2))]);
  });
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same(a.grid, b.grid, "inner");
  if (a.rank != b.rank) throw SpectralError("inner: rank mismatch");
  double total = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    const auto x = a.comp(c);
    const auto y = b.comp(c);
    double s = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f) s += x[f].real() * y[f].real() + x[f].imag() * y[f].imag();
    total += frobenius_weight(a.rank, c) * s;
  }
  return total;
}

double l2_norm(const SpectralField& f) { return std::sqrt(inner(f, f)); }

namespace {

template <class Weight>
double weighted_sq(const SpectralField& f, Weight weight) {
  const auto& g = f.grid;
  const int m = g.points();
  double total = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const auto a = f.comp(c);
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      const double k1 = g.wavenumber(i);
      for (int j = 0; j < m; ++j) {
        const double k2 = g.wavenumber(j);
        s += weight(kTwoPi * kTwoPi * (k1 * k1 + k2 * k2)) * std::norm(a[g.flat(i, j)]);
      }
    }
    total += frobenius_weight(f.rank, c) * s;
  }
  return total;
}

}  // namespace

double seminorm_sq(const SpectralField& f, int s) {
  return weighted_sq(f, [s](double q2) { return std::pow(q2, s); });
}

double sobolev_norm_sq(const SpectralField& f, int s) {
  return weighted_sq(f, [s](double q2) { return std::pow(1.0 + q2, s); });
}

double grid_inner(const GridField& a, const GridField& b) {
  require_same(a.grid, b.grid, "grid_inner");
  if (a.rank != b.rank) throw SpectralError("grid_inner: rank mismatch");
  double total = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    const auto x = a.comp(c);
    const auto y = b.comp(c);
    double s = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f) s += x[f] * y[f];
    total += frobenius_weight(a.rank, c) * s;
  }
  return total / static_cast<double>(a.grid.size());
}

double grid_l2_norm(const GridField& f) { return std::sqrt(grid_inner(f, f)); }

double grid_max_norm(const GridField& f) {
  double best = 0.0;
  for (std::size_t p = 0; p < f.grid.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) {
      const double v = f.comps[static_cast<std::size_t>(c)][p];
      s += frobenius_weight(f.rank, c) * v * v;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace spectral

void axpy(SpectralField& y, double a, const SpectralField& x) {
  if (!(y.grid == x.grid) || y.rank != x.rank) throw SpectralError("axpy: shape mismatch");
  for (int c = 0; c < y.components(); ++c) {
    auto dst = y.comp(c);
    const auto src = x.comp(c);
    for (std::size_t f = 0; f < dst.size(); ++f) dst[f] += a * src[f];
  }
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  axpy(a, 1.0, b);
  return a;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  axpy(a, -1.0, b);
  return a;
}

SpectralField operator*(double s, SpectralField a) {
  for (auto& comp : a.comps)
    for (auto& v : comp) v *= s;
  return a;
}

}  // namespace kvevp
