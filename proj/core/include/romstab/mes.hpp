#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "romstab/integrate.hpp"
#include "romstab/linalg.hpp"
#include "romstab/rom.hpp"

namespace romstab::mes {

/// Multi-parametric extremum-seeking configuration. Internal parameter and
/// dither units are kept O(1); physical values are scale_i * internal. The
/// frequencies must be pairwise distinct and resolved by the learning step
/// (omega_i * dt < pi).
struct MesConfig {
  Vector amplitudes;            // a_i > 0, internal units
  Vector frequencies;           // omega_i, rad/s
  Vector scales;                // physical = scale_i * internal
  double dt = 0.1;              // learning step
  std::size_t k_max = 200;
  double q_penalty = 1e12;      // cost assigned to unstable evaluations
};

struct TracePoint {
  std::size_t k;
  Vector mu_hat;  // internal units, as evaluated at iteration k
  double q;
};

/// Discrete extremum-seeking state
///   y_i(k+1)      = y_i(k) + a_i dt sin(omega_i k dt + pi/2) Q
///   mu_hat_i(k+1) = y_i(k+1) + a_i sin(omega_i k dt - pi/2)
/// with y(0) = 0. The initial estimate mu_hat(0) is zero (undithered), so the
/// first cost evaluation probes the unmodified configuration.
class MesState {
 public:
  explicit MesState(MesConfig cfg);

  std::size_t parameter_count() const { return y_.size(); }
  std::size_t iteration() const { return k_; }
  const MesConfig& config() const { return cfg_; }

  const Vector& mu_hat() const { return mu_hat_; }
  Vector mu_hat_physical() const;
  const Vector& integrator() const { return y_; }

  /// One update of the discrete scheme; appends (k, mu_hat(k), Q) to the trace.
  void step(double q);

  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  MesConfig cfg_;
  Vector y_;
  Vector mu_hat_;
  std::size_t k_ = 0;
  std::vector<TracePoint> trace_;
};

/// First p members of a non-resonant frequency family: no omega matches any
/// other, any pairwise sum/difference, or any doubled frequency.
Vector suggest_frequencies(std::size_t p, double base);

/// Squared-error learning cost between two coefficient trajectories on the
/// same time grid, integrated by the composite trapezoid rule. By mode
/// orthonormality this equals the field-space error energy.
double cost_q(const Trajectory& truth_coeffs, const Trajectory& rom_coeffs);

/// Penalized variant: an unstable ROM integration is charged q_penalty so the
/// optimizer can escape unstable regions.
double cost_q(const Trajectory& truth_coeffs, const rom::RomTrajectory& rom_result,
              double q_penalty = 1e12);

/// Lagrange stability flag: finite everywhere and sup ||q|| below the blow-up
/// threshold.
bool lagrange_stability_check(const Trajectory& traj, double bound = kBlowupNorm);

struct CostSample {
  double q = 0.0;
  bool stable = true;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  Vector mu_evaluated;  // optional: actual (clamped) physical values used
};

struct CostRecord {
  std::size_t k;
  Vector mu_physical;  // values the cost was evaluated at
  double q;
  bool stable;
  double blowup_time;
};
using CostTrace = std::vector<CostRecord>;

struct StopRule {
  std::size_t window = 50;   // plateau detection window (iterations)
  double rel_tol = 1e-4;     // relative change of the windowed mean
};

struct TuneResult {
  Vector best_mu;            // physical units
  double best_q = 0.0;
  std::size_t best_iteration = 0;
  CostTrace trace;
  std::size_t iterations = 0;
  std::string stop_reason;   // "k_max" or "plateau"
};

using CostFn = std::function<CostSample(const Vector& mu_physical)>;

/// Generic feedback loop: evaluate the cost at the current physical estimate,
/// record it, update the MES state; stop at k_max or when the mean cost over
/// the last `window` iterations changes by less than rel_tol relative to the
/// preceding window.
TuneResult run_loop(MesState& state, const CostFn& cost, std::size_t k_max,
                    const StopRule& stop);

/// Closure-template and integration parameters for ROM tuning.
struct TuneSetup {
  double c_max = 10.0;
  double l_max = 0.0;
  rom::BoundKind bound_kind = rom::BoundKind::QuadraticOnly;
  double rom_dt = 0.0;        // ROM integration step
  double mu_cl_floor = 1e-3;  // clamp: mu + mu_e >= floor * mu
};

/// Builds the closure the tuner would evaluate at the given physical
/// estimates: mu_e clamped so the damping stays positive, mu_nl clamped at 0.
rom::ClosureConfig clamped_closure(const rom::QuadraticRom& rom, const TuneSetup& setup,
                                   const Vector& mu_physical);

/// Tunes (mu_e, mu_nl) against the projected truth trajectory: every
/// iteration integrates the closed ROM from the first truth coefficient
/// state, charges the (penalized) cost on the truth time grid, and feeds it
/// back to the MES update. Returns the best-observed estimate and the full
/// trace. Throws if every evaluation was unstable.
TuneResult tune(const rom::QuadraticRom& rom, const Trajectory& truth_coeffs,
                const MesConfig& mes_cfg, const TuneSetup& setup, const StopRule& stop = {});

}  // namespace romstab::mes
