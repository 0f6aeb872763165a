#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kvevp {

/// Raised for malformed configuration text (bad syntax, bad numbers, unknown keys).
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a parsed value violates a parameter invariant. `key()` names it.
class ConfigValidationError : public std::runtime_error {
 public:
  ConfigValidationError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Physical constants of the momentum balance and the constitutive law.
/// Angles are stored in radians.
struct PhysicalParams {
  double P = 1.0;         ///< internal ice strength
  double E = 0.25;        ///< elastic modulus
  double c_a = 1.2e-3;    ///< air drag coefficient
  double c_w = 5.5e-3;    ///< ocean drag coefficient
  double rho_a = 1.3;     ///< air density, kg/m^3
  double rho_w = 1026.0;  ///< ocean water density, kg/m^3
  double phi = 25.0 * std::numbers::pi / 180.0;   ///< air turning angle
  double theta = 25.0 * std::numbers::pi / 180.0; ///< water turning angle
  double Omega = 1.46e-4; ///< rotation parameter, 1/s
  double g = 9.81;        ///< gravitational constant

  void validate() const;
  bool operator==(const PhysicalParams&) const = default;
};

/// Typical values of the model constants; turning angles are 25 degrees.
PhysicalParams default_params();

struct RegularizationParams {
  double alpha = 0.1;    ///< Kelvin-Voigt length, > 0
  double beta = 0.0;     ///< bi-harmonic length, 0 disables the term
  double delta = 0.0;    ///< mollification radius of the initial data
  double epsilon = 0.01; ///< strain-rate regularisation

  void validate() const;
  bool operator==(const RegularizationParams&) const = default;
};

/// Fault injection used to check that the verification suite detects errors.
enum class Fault { none, drag_sign };

struct ModelVariant {
  bool advection = false;
  bool voigt_biharmonic = false;
  /// Evolve all four stress components instead of three (symmetry debug mode).
  bool full_stress = false;
  Fault fault = Fault::none;

  bool operator==(const ModelVariant&) const = default;
};

/// One term a * cos(2 pi k.x + phase) acting on a single field component.
struct FourierTerm {
  int component = 0;
  int k1 = 0;
  int k2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;

  bool operator==(const FourierTerm&) const = default;
};

/// Parametric description of a synthetic field (forcing or initial data).
struct FieldSpec {
  enum class Kind { zero, constant, fourier, random, steady };

  Kind kind = Kind::zero;
  std::vector<double> values;     ///< constant: one value per component
  std::vector<FourierTerm> terms; ///< fourier
  double amplitude = 0.0;         ///< random: grid max-abs of the generated field
  int max_mode = 0;               ///< random: largest |k|_inf excited
  std::optional<double> omega;    ///< forcing only: multiply by cos(omega t)

  bool operator==(const FieldSpec&) const = default;

  static FieldSpec zero() { return {}; }
  static FieldSpec constant(std::vector<double> v);
  static FieldSpec random(double amplitude, int max_mode);
};

struct ForcingSpec {
  FieldSpec wind;           ///< U_a, vector
  FieldSpec current;        ///< U_w, vector
  FieldSpec surface_height; ///< H_0, scalar

  bool operator==(const ForcingSpec&) const = default;
};

struct InitialSpec {
  FieldSpec velocity; ///< u_0, vector
  FieldSpec stress;   ///< sigma_0, components (11, 12, 22)
  FieldSpec antisym;  ///< scalar a with sigma_12 += a, sigma_21 -= a before symmetrisation

  bool operator==(const InitialSpec&) const = default;
};

struct RunConfig {
  int modes = 32;          ///< Fourier truncation order N
  int points = 128;        ///< physical grid points per dimension M
  double t_final = 1.0;
  double dt = 0.0;         ///< 0 selects the stability heuristic
  int output_every = 10;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

struct Config {
  PhysicalParams physical = default_params();
  RegularizationParams regularization;
  ModelVariant variant;
  RunConfig run;
  ForcingSpec forcing;
  InitialSpec initial;

  /// Checks every invariant; throws ConfigValidationError naming the key.
  void validate() const;
  /// beta when the bi-harmonic term is active, else 0.
  double effective_beta() const { return variant.voigt_biharmonic ? regularization.beta : 0.0; }

  bool operator==(const Config&) const = default;
};

/// Default configuration used when a key is omitted.
Config default_config();

/// Parses `key = value` text. Throws ConfigParseError or ConfigValidationError.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Writes every key; parse_config(serialize_config(c)) == c bit for bit.
std::string serialize_config(const Config& config);

}  // namespace kvevp
