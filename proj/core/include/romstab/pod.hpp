#pragma once

#include <cstddef>
#include <vector>

#include "romstab/linalg.hpp"
#include "romstab/truth.hpp"

namespace romstab::pod {

/// Orthonormal spatial modes (w.r.t. the weighted inner product), the POD
/// eigenvalues behind them, and the base state subtracted before projection.
struct PodBasis {
  Matrix modes;        // n x r, columns W-orthonormal
  Vector eigenvalues;  // r retained values, descending (per block when blocked)
  Vector base_state;   // n
  Vector weights;      // n
  bool subtract_mean = false;

  // Block split: r_velocity = r and r_temperature = 0 when unblocked.
  std::size_t r_velocity = 0;
  std::size_t r_temperature = 0;
  std::vector<truth::Block> blocks;

  // Full correlation spectrum per block (one entry when unblocked); the tail
  // beyond the retained modes is the projection error budget.
  std::vector<Vector> spectra;

  std::size_t order() const { return modes.cols(); }
  std::size_t dim() const { return modes.rows(); }

  /// Sum of discarded eigenvalues over all blocks.
  double discarded_energy() const;
};

/// K_ij = (1/s) <z_i - base, z_j - base>_W; symmetric positive semidefinite.
Matrix correlation_matrix(const truth::SnapshotSet& snapshots, const Vector& base);

/// Number of leading eigenvalues with lambda_i / lambda_1 >= 1e-12 (and > 0).
std::size_t effective_rank(const Vector& eigenvalues);

/// Method of snapshots: eigendecompose the s x s correlation matrix and lift
/// the leading r eigenvectors to spatial modes. The base state is the
/// snapshot mean when subtract_mean is set, zero otherwise. Requesting more
/// modes than the numerical rank is an error that names the effective rank.
PodBasis compute_basis(const truth::SnapshotSet& snapshots, std::size_t r,
                       bool subtract_mean);

/// Runs compute_basis per declared block (velocity, temperature) and embeds
/// the modes with disjoint supports; the combined set stays orthonormal.
PodBasis compute_basis_blocked(const truth::SnapshotSet& snapshots, std::size_t r_velocity,
                               std::size_t r_temperature, bool subtract_mean);

Vector project(const PodBasis& basis, const Vector& z);        // q_i = <z - base, phi_i>_W
Vector reconstruct(const PodBasis& basis, const Vector& q);    // base + sum q_i phi_i
Trajectory project_trajectory(const PodBasis& basis, const Trajectory& traj);

/// max_ij |<phi_i, phi_j>_W - delta_ij|
double orthonormality_residual(const PodBasis& basis);

}  // namespace romstab::pod
