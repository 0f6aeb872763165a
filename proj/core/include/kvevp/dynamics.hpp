#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kvevp/config.hpp"
#include "kvevp/diagnostics.hpp"
#include "kvevp/forcing.hpp"
#include "kvevp/state.hpp"

namespace kvevp {

/// A run produced a non-finite coefficient.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(double t, double norm);
  double time() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }

 private:
  double t_;
  double norm_;
};

struct Trajectory {
  std::vector<State> snapshots;           ///< empty unless requested
  std::vector<DiagnosticsRecord> records; ///< one per output step, increasing t
  std::size_t steps = 0;
  double dt = 0.0;
};

/// Initial data: synthesised from `spec`, mollified with `delta`, projected
/// to order N. The stress is symmetrised unless `full_stress` is set.
State prepare_ic(const InitialSpec& spec, double delta, const TorusGrid& grid, double P, std::uint64_t seed,
                 bool full_stress = false);

/// The Galerkin system for one configuration. Immutable after construction.
class Model {
 public:
  explicit Model(Config config);

  const Config& config() const noexcept { return config_; }
  const TorusGrid& grid() const noexcept { return grid_; }
  const forcing::ForcingFields& forcing() const noexcept { return forcing_; }

  State initial_state() const;

  /// P_N (u . grad u) by pseudospectral product on the M-point grid.
  SpectralField advection_term(const SpectralField& u) const;
  /// du/dt = (1 - a^2 lap + b^4 lap^2)^-1 P_N [div sigma + forcing - (u . grad u)].
  SpectralField momentum_rhs(const State& state) const;
  /// dsigma/dt = Q_N [E (D - ...)].
  SpectralField stress_rhs(const State& state) const;

  struct Rates {
    SpectralField du;
    SpectralField dsigma;
  };
  Rates rates(const State& state) const;

  /// One classical RK4 step. Throws InstabilityError on non-finite output.
  State step(const State& state, double dt) const;

  /// dt = 0.5 / [max(De) E max(1, 4/P) + 2 pi N max|u| + 2 pi N / (1 + a^2 (2 pi N)^2)
  ///             + wave frequency + drag rate].
  double stable_dt(const State& state) const;

  diagnostics::Context diagnostics_context(double sigma0_linf) const;
  DiagnosticsRecord diagnose(const State& state, double sigma0_linf) const;

 private:
  Config config_;
  TorusGrid grid_;
  forcing::ForcingFields forcing_;
};

struct RunOptions {
  bool keep_snapshots = false;
  /// Time step override; 0 uses config dt, and config dt = 0 uses stable_dt of the initial state.
  double dt = 0.0;
  std::function<void(const State&, const DiagnosticsRecord&)> on_output;
};

/// Integrates from the configured initial state to t_final.
Trajectory run(const Model& model, const RunOptions& options = {});
Trajectory run(const Model& model, const State& initial, const RunOptions& options);
Trajectory run(const Config& config, const RunOptions& options = {});

/// Step size used by run() for the given model and initial state.
double resolve_dt(const Model& model, const State& initial, double override_dt = 0.0);

}  // namespace kvevp
