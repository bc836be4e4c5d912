#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "romstab/integrate.hpp"
#include "romstab/linalg.hpp"

namespace romstab::truth {

enum class ModelKind { Burgers1D, SyntheticQuadratic };

/// Contiguous variable block inside a state vector (velocity/temperature).
struct Block {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

/// Desk-scale full-order system used to generate snapshots and reference
/// trajectories. Either a 1D periodic viscous Burgers solver on [0,1) with
/// uniform spacing h = 1/n, or a dense quadratic ODE
///   z' = e + L z + mu D z + [C z] z
/// with symmetric negative definite D, energy-conserving convection tensor C
/// (antisymmetric in its first two indices) and skew linear coupling L.
struct TruthModel {
  ModelKind kind = ModelKind::Burgers1D;
  std::size_t n = 0;
  double viscosity = 0.0;  // nominal mu; 1/Re for Burgers

  // SyntheticQuadratic coefficients; empty for Burgers.
  Vector e;
  Matrix L;
  Matrix D;
  Tensor3 C;

  double grid_spacing() const;        // Burgers only: h = 1/n
  Vector quadrature_weights() const;  // Burgers: h per point; synthetic: 1 per entry
  std::vector<Block> state_blocks() const;
  Vector rhs(const Vector& z, double mu) const;
};

/// Time snapshots of a trajectory together with the quadrature weights that
/// define the discrete inner product <f,g> = sum_k W_k f_k g_k.
struct SnapshotSet {
  std::vector<Vector> states;  // s vectors of length n
  std::vector<double> times;   // strictly increasing, in [0, t_f]
  Vector weights;              // n positive reals
  std::vector<Block> blocks;   // optional variable layout

  std::size_t size() const { return states.size(); }
  std::size_t dim() const { return states.empty() ? weights.size() : states.front().size(); }
  void validate() const;  // throws std::invalid_argument on any broken invariant
};

/// Thrown when an integration leaves the finite/bounded regime; carries the
/// first failure time.
class BlowupError : public std::runtime_error {
 public:
  explicit BlowupError(double time);
  double time() const { return time_; }

 private:
  double time_;
};

TruthModel make_burgers(std::size_t n, double viscosity);

/// Right-hand side of periodic viscous Burgers with 2nd-order central
/// differences. The convection term uses the energy-conserving skew split
/// conv = (u u_x + (u^2)_x) / 3, whose discrete form contributes exactly zero
/// to d/dt of the quadrature energy.
Vector burgers_rhs(const Vector& u, double viscosity);

/// Seeded dense quadratic system with D = -diag(spectrum), skew L scaled to
/// unit Frobenius norm, antisymmetrized unit-norm C, e = 0. Deterministic
/// (bitwise) for a fixed seed. The spectrum must be strictly decreasing and
/// positive.
TruthModel make_synthetic(std::size_t n, std::uint64_t seed, const Vector& spectrum);

/// Fixed-step RK4. For Burgers the step must satisfy the explicit-stability
/// heuristic dt <= min(0.5 h^2 / mu, 0.5 h / max|u0|). Throws BlowupError if
/// the state turns non-finite or leaves the norm bound.
Trajectory simulate(const TruthModel& model, const Vector& z0, double mu, double t_f,
                    double dt);

/// Every stride-th state of a trajectory, keeping times and attaching the
/// model's quadrature weights and block layout.
SnapshotSet collect_snapshots(const Trajectory& traj, std::size_t stride,
                              const TruthModel& model);
SnapshotSet collect_snapshots(const Trajectory& traj, std::size_t stride, Vector weights,
                              std::vector<Block> blocks);

}  // namespace romstab::truth
