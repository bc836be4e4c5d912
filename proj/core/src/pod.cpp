#include "romstab/pod.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace romstab::pod {

namespace {

Vector snapshot_mean(const truth::SnapshotSet& s) {
  Vector mean(s.dim(), 0.0);
  for (const Vector& z : s.states) add_scaled(mean, z, 1.0);
  const double inv_s = 1.0 / static_cast<double>(s.size());
  for (double& v : mean) v *= inv_s;
  return mean;
}

truth::SnapshotSet slice_block(const truth::SnapshotSet& s, const truth::Block& block) {
  truth::SnapshotSet sub;
  sub.times = s.times;
  sub.weights = Vector(s.weights.begin() + static_cast<std::ptrdiff_t>(block.offset),
                       s.weights.begin() + static_cast<std::ptrdiff_t>(block.offset + block.size));
  sub.states.reserve(s.size());
  for (const Vector& z : s.states)
    sub.states.emplace_back(z.begin() + static_cast<std::ptrdiff_t>(block.offset),
                            z.begin() + static_cast<std::ptrdiff_t>(block.offset + block.size));
  return sub;
}

}  // namespace

double PodBasis::discarded_energy() const {
  double acc = 0.0;
  std::size_t block_index = 0;
  for (const Vector& spectrum : spectra) {
    const std::size_t retained =
        spectra.size() == 1 ? order() : (block_index == 0 ? r_velocity : r_temperature);
    for (std::size_t i = retained; i < spectrum.size(); ++i) acc += spectrum[i];
    ++block_index;
  }
  return acc;
}

Matrix correlation_matrix(const truth::SnapshotSet& snapshots, const Vector& base) {
  snapshots.validate();
  if (base.size() != snapshots.dim())
    throw std::invalid_argument("correlation_matrix: base state size mismatch");
  const std::size_t s = snapshots.size();
  std::vector<Vector> centered;
  centered.reserve(s);
  for (const Vector& z : snapshots.states) centered.push_back(difference(z, base));

  Matrix k(s, s);
  const double inv_s = 1.0 / static_cast<double>(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      const double v = inv_s * weighted_dot(snapshots.weights, centered[i], centered[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

std::size_t effective_rank(const Vector& eigenvalues) {
  if (eigenvalues.empty() || !(eigenvalues.front() > 0.0)) return 0;
  const double cutoff = eigenvalues.front() * 1e-12;
  std::size_t rank = 0;
  for (double v : eigenvalues) {
    if (!(v >= cutoff)) break;
    ++rank;
  }
  return rank;
}

PodBasis compute_basis(const truth::SnapshotSet& snapshots, std::size_t r,
                       bool subtract_mean) {
  snapshots.validate();
  const std::size_t s = snapshots.size();
  const std::size_t n = snapshots.dim();
  if (r < 1) throw std::invalid_argument("compute_basis: r must be >= 1");
  if (r > std::min(s, n)) {
    std::ostringstream os;
    os << "compute_basis: r=" << r << " exceeds min(s,n)=" << std::min(s, n);
    throw std::invalid_argument(os.str());
  }

  PodBasis basis;
  basis.weights = snapshots.weights;
  basis.subtract_mean = subtract_mean;
  basis.blocks = snapshots.blocks;
  basis.base_state = subtract_mean ? snapshot_mean(snapshots) : Vector(n, 0.0);

  const Matrix k = correlation_matrix(snapshots, basis.base_state);
  const SymEig eig = eig_sym(k);

  const std::size_t rank = effective_rank(eig.values);
  if (r > rank) {
    std::ostringstream os;
    os << "compute_basis: r=" << r << " exceeds the effective rank " << rank
       << " (eigenvalue ratio cutoff 1e-12)";
    throw std::invalid_argument(os.str());
  }

  basis.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(r));
  basis.spectra = {eig.values};
  basis.r_velocity = r;
  basis.r_temperature = 0;

  basis.modes = Matrix(n, r);
  const double inv_sqrt_s = 1.0 / std::sqrt(static_cast<double>(s));
  for (std::size_t a = 0; a < r; ++a) {
    const double scale = inv_sqrt_s / std::sqrt(eig.values[a]);
    for (std::size_t j = 0; j < s; ++j) {
      const double coeff = scale * eig.vectors(j, a);
      if (coeff == 0.0) continue;
      const Vector& z = snapshots.states[j];
      for (std::size_t i = 0; i < n; ++i)
        basis.modes(i, a) += coeff * (z[i] - basis.base_state[i]);
    }
  }
  return basis;
}

PodBasis compute_basis_blocked(const truth::SnapshotSet& snapshots, std::size_t r_velocity,
                               std::size_t r_temperature, bool subtract_mean) {
  snapshots.validate();
  if (snapshots.blocks.size() != 2)
    throw std::invalid_argument(
        "compute_basis_blocked: snapshot set must declare exactly two blocks");
  const truth::Block& bv = snapshots.blocks[0];
  const truth::Block& bt = snapshots.blocks[1];

  const PodBasis part_v = compute_basis(slice_block(snapshots, bv), r_velocity, subtract_mean);
  const PodBasis part_t = compute_basis(slice_block(snapshots, bt), r_temperature, subtract_mean);

  const std::size_t n = snapshots.dim();
  const std::size_t r = r_velocity + r_temperature;

  PodBasis basis;
  basis.weights = snapshots.weights;
  basis.subtract_mean = subtract_mean;
  basis.blocks = snapshots.blocks;
  basis.r_velocity = r_velocity;
  basis.r_temperature = r_temperature;
  basis.base_state = Vector(n, 0.0);
  basis.modes = Matrix(n, r);

  for (std::size_t i = 0; i < bv.size; ++i) {
    basis.base_state[bv.offset + i] = part_v.base_state[i];
    for (std::size_t a = 0; a < r_velocity; ++a)
      basis.modes(bv.offset + i, a) = part_v.modes(i, a);
  }
  for (std::size_t i = 0; i < bt.size; ++i) {
    basis.base_state[bt.offset + i] = part_t.base_state[i];
    for (std::size_t a = 0; a < r_temperature; ++a)
      basis.modes(bt.offset + i, r_velocity + a) = part_t.modes(i, a);
  }

  basis.eigenvalues = part_v.eigenvalues;
  basis.eigenvalues.insert(basis.eigenvalues.end(), part_t.eigenvalues.begin(),
                           part_t.eigenvalues.end());
  basis.spectra = {part_v.spectra.front(), part_t.spectra.front()};
  return basis;
}

Vector project(const PodBasis& basis, const Vector& z) {
  if (z.size() != basis.dim()) throw std::invalid_argument("project: state size mismatch");
  const std::size_t n = basis.dim();
  const std::size_t r = basis.order();
  Vector q(r, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = basis.weights[i] * (z[i] - basis.base_state[i]);
    if (v == 0.0) continue;
    for (std::size_t a = 0; a < r; ++a) q[a] += v * basis.modes(i, a);
  }
  return q;
}

Vector reconstruct(const PodBasis& basis, const Vector& q) {
  if (q.size() != basis.order())
    throw std::invalid_argument("reconstruct: coefficient size mismatch");
  const std::size_t n = basis.dim();
  const std::size_t r = basis.order();
  Vector z = basis.base_state;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t a = 0; a < r; ++a) acc += basis.modes(i, a) * q[a];
    z[i] += acc;
  }
  return z;
}

Trajectory project_trajectory(const PodBasis& basis, const Trajectory& traj) {
  Trajectory out;
  out.times = traj.times;
  out.states.reserve(traj.size());
  for (const Vector& z : traj.states) out.states.push_back(project(basis, z));
  return out;
}

double orthonormality_residual(const PodBasis& basis) {
  const std::size_t r = basis.order();
  double worst = 0.0;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < basis.dim(); ++i)
        acc += basis.weights[i] * basis.modes(i, a) * basis.modes(i, b);
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc - target));
    }
  }
  return worst;
}

}  // namespace romstab::pod
