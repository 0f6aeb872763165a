#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "kvevp/config.hpp"
#include "kvevp/diagnostics.hpp"
#include "kvevp/state.hpp"

namespace kvevp::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSnapshotMagic = "EVPKV1";

/// Variant flag bits stored in the snapshot header.
enum SnapshotFlag : std::uint32_t {
  kAdvection = 1u << 0,
  kBiharmonic = 1u << 1,
  kFullStress = 1u << 2,
};

/// Order of the parameter block.
inline constexpr std::array<std::string_view, 14> kSnapshotParams = {
    "P", "E", "c_a", "c_w", "rho_a", "rho_w", "phi", "theta", "Omega", "g", "alpha", "beta", "delta", "epsilon"};

/// Physical samples of one state. Layout on disk (all little-endian):
///   "EVPKV1" | i32 M | i32 N | f64 t | u32 flags | u32 n_params | n_params x f64
///   | u64 n_values | n_values x f64 (u1, u2, s11, s12, s22; each M*M row-major)
struct Snapshot {
  std::int32_t points = 0;
  std::int32_t modes = 0;
  double t = 0.0;
  std::uint32_t flags = 0;
  std::vector<double> params;
  std::vector<double> samples;

  bool operator==(const Snapshot&) const = default;
};

/// Samples the state on its grid. A full-tensor stress is written through
/// its symmetric part.
Snapshot make_snapshot(const State& state, const Config& config);

void write_snapshot(std::ostream& out, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& in);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot read_snapshot(const std::filesystem::path& path);

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);

}  // namespace kvevp::io
