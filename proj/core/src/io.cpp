#include "kvevp/io.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace kvevp::io {

namespace {

template <class U>
void put_le(std::ostream& out, U value) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes, sizeof(U));
}

template <class U>
U get_le(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw FormatError("snapshot: truncated file");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

Snapshot make_snapshot(const State& state, const Config& config) {
  const auto& g = state.grid();
  Snapshot s;
  s.points = g.points();
  s.modes = g.modes();
  s.t = state.t;
  s.flags = (config.variant.advection ? kAdvection : 0u) | (config.variant.voigt_biharmonic ? kBiharmonic : 0u) |
            (state.sigma.rank == Rank::full_tensor ? kFullStress : 0u);
  const auto& ph = config.physical;
  const auto& reg = config.regularization;
  s.params = {ph.P,     ph.E,   ph.c_a,    ph.c_w,    ph.rho_a,   ph.rho_w,   ph.phi,
              ph.theta, ph.Omega, ph.g,    reg.alpha, reg.beta, reg.delta, reg.epsilon};

  const auto u = spectral::inverse(state.u);
  const auto sigma = spectral::inverse(state.sigma);
  s.samples.reserve(5 * g.size());
  auto append = [&](std::span<const double> c) { s.samples.insert(s.samples.end(), c.begin(), c.end()); };
  append(u.comp(0));
  append(u.comp(1));
  if (sigma.rank == Rank::full_tensor) {
    append(sigma.comp(0));
    std::vector<double> sym(g.size());
    for (std::size_t p = 0; p < sym.size(); ++p) sym[p] = 0.5 * (sigma.comps[1][p] + sigma.comps[2][p]);
    append(sym);
    append(sigma.comp(3));
  } else {
    append(sigma.comp(0));
    append(sigma.comp(1));
    append(sigma.comp(2));
  }
  return s;
}

void write_snapshot(std::ostream& out, const Snapshot& s) {
  const auto expected = 5ull * static_cast<unsigned long long>(s.points) * static_cast<unsigned long long>(s.points);
  if (s.samples.size() != expected) throw FormatError("snapshot: payload must hold 5 M^2 values");
  out.write(kSnapshotMagic.data(), static_cast<std::streamsize>(kSnapshotMagic.size()));
  put_le(out, static_cast<std::uint32_t>(s.points));
  put_le(out, static_cast<std::uint32_t>(s.modes));
  put_f64(out, s.t);
  put_le(out, s.flags);
  put_le(out, static_cast<std::uint32_t>(s.params.size()));
  for (double v : s.params) put_f64(out, v);
  put_le(out, static_cast<std::uint64_t>(s.samples.size()));
  for (double v : s.samples) put_f64(out, v);
  if (!out) throw FormatError("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
  char magic[6];
  if (!in.read(magic, sizeof magic) || std::string_view(magic, sizeof magic) != kSnapshotMagic)
    throw FormatError("snapshot: bad magic");
  Snapshot s;
  s.points = static_cast<std::int32_t>(get_le<std::uint32_t>(in));
  s.modes = static_cast<std::int32_t>(get_le<std::uint32_t>(in));
  s.t = get_f64(in);
  s.flags = get_le<std::uint32_t>(in);
  const auto n_params = get_le<std::uint32_t>(in);
  if (n_params > 1024) throw FormatError("snapshot: implausible parameter count");
  s.params.resize(n_params);
  for (auto& v : s.params) v = get_f64(in);
  const auto n_values = get_le<std::uint64_t>(in);
  if (s.modes < 0 || s.points < 2 * s.modes + 2)
    throw FormatError("snapshot: grid of " + std::to_string(s.points) + " points cannot hold order " +
                      std::to_string(s.modes));
  if (s.points <= 0 || n_values != 5ull * static_cast<std::uint64_t>(s.points) * static_cast<std::uint64_t>(s.points))
    throw FormatError("snapshot: payload length does not match 5 M^2");
  s.samples.resize(n_values);
  for (auto& v : s.samples) v = get_f64(in);
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("snapshot: cannot open '" + path.string() + "' for writing");
  write_snapshot(out, snapshot);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("snapshot: cannot open '" + path.string() + "'");
  return read_snapshot(in);
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << diagnostics::csv_header() << '\n';
  for (const auto& r : records) out << diagnostics::csv_row(r) << '\n';
}

}  // namespace kvevp::io
