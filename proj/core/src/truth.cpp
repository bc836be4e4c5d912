#include "romstab/truth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romstab/rng.hpp"

namespace romstab::truth {

double TruthModel::grid_spacing() const {
  if (kind != ModelKind::Burgers1D)
    throw std::logic_error("grid_spacing: only defined for Burgers1D");
  return 1.0 / static_cast<double>(n);
}

Vector TruthModel::quadrature_weights() const {
  const double w = kind == ModelKind::Burgers1D ? grid_spacing() : 1.0;
  return Vector(n, w);
}

std::vector<Block> TruthModel::state_blocks() const {
  if (kind == ModelKind::Burgers1D) return {Block{"u", 0, n}};
  const std::size_t half = n / 2;
  return {Block{"v", 0, half}, Block{"T", half, n - half}};
}

namespace {

// No input validation: the integrator relies on non-finite values propagating
// to its post-step health check instead of a throw mid-stage.
Vector burgers_kernel(const Vector& u, double viscosity) {
  const std::size_t n = u.size();
  const double h = 1.0 / static_cast<double>(n);
  const double inv_h2 = 1.0 / (h * h);
  const double inv_6h = 1.0 / (6.0 * h);
  Vector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = k + 1 == n ? 0 : k + 1;
    const std::size_t km = k == 0 ? n - 1 : k - 1;
    const double diffusion = (u[kp] - 2.0 * u[k] + u[km]) * inv_h2;
    const double convection =
        (u[k] * (u[kp] - u[km]) + (u[kp] * u[kp] - u[km] * u[km])) * inv_6h;
    out[k] = viscosity * diffusion - convection;
  }
  return out;
}

}  // namespace

Vector TruthModel::rhs(const Vector& z, double mu) const {
  if (z.size() != n) throw std::invalid_argument("TruthModel::rhs: state size mismatch");
  if (kind == ModelKind::Burgers1D) return burgers_kernel(z, mu);
  Vector out = e;
  add_scaled(out, L.apply(z), 1.0);
  add_scaled(out, D.apply(z), mu);
  add_scaled(out, C.apply(z, z), 1.0);
  return out;
}

void SnapshotSet::validate() const {
  if (states.empty()) throw std::invalid_argument("SnapshotSet: no snapshots");
  if (times.size() != states.size())
    throw std::invalid_argument("SnapshotSet: times/states length mismatch");
  const std::size_t n = weights.size();
  for (const Vector& z : states)
    if (z.size() != n) throw std::invalid_argument("SnapshotSet: state size mismatch");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw std::invalid_argument("SnapshotSet: times not strictly increasing");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("SnapshotSet: weights must be positive");
  for (const Block& b : blocks)
    if (b.offset + b.size > n) throw std::invalid_argument("SnapshotSet: block out of range");
}

BlowupError::BlowupError(double time)
    : std::runtime_error([time] {
        std::ostringstream os;
        os << "integration blew up at t=" << time;
        return os.str();
      }()),
      time_(time) {}

TruthModel make_burgers(std::size_t n, double viscosity) {
  if (n < 8) throw std::invalid_argument("make_burgers: n must be >= 8");
  if (!(viscosity > 0.0)) throw std::invalid_argument("make_burgers: viscosity must be positive");
  TruthModel m;
  m.kind = ModelKind::Burgers1D;
  m.n = n;
  m.viscosity = viscosity;
  return m;
}

Vector burgers_rhs(const Vector& u, double viscosity) {
  if (u.size() < 8) throw std::invalid_argument("burgers_rhs: grid must have n >= 8 points");
  if (!(viscosity > 0.0)) throw std::invalid_argument("burgers_rhs: viscosity must be positive");
  if (!all_finite(u)) throw std::invalid_argument("burgers_rhs: non-finite input state");
  return burgers_kernel(u, viscosity);
}

TruthModel make_synthetic(std::size_t n, std::uint64_t seed, const Vector& spectrum) {
  if (n < 4) throw std::invalid_argument("make_synthetic: n must be >= 4");
  if (spectrum.size() != n)
    throw std::invalid_argument("make_synthetic: spectrum length must equal n");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spectrum[i] > 0.0))
      throw std::invalid_argument("make_synthetic: spectrum must be positive");
    if (i > 0 && !(spectrum[i] < spectrum[i - 1]))
      throw std::invalid_argument("make_synthetic: spectrum must be strictly decreasing");
  }

  TruthModel m;
  m.kind = ModelKind::SyntheticQuadratic;
  m.n = n;
  m.viscosity = 1.0;
  m.e = Vector(n, 0.0);

  m.D = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m.D(i, i) = -spectrum[i];

  Rng rng(seed);

  // Skew coupling, unit Frobenius norm (buoyancy stand-in).
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  m.L = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.L(i, j) = 0.5 * (g(i, j) - g(j, i));
  const double l_norm = m.L.frobenius_norm();
  if (l_norm > 0.0)
    for (double& v : m.L.data()) v /= l_norm;

  // Convection tensor antisymmetrized over (i,j), which forces
  // z . ([C z] z) = 0 for every z; normalized so the dynamics stay O(1).
  Tensor3 raw(n, n, n);
  for (double& v : raw.data()) v = rng.uniform(-1.0, 1.0);
  m.C = Tensor3(n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        m.C(i, j, k) = 0.5 * (raw(i, j, k) - raw(j, i, k));
  const double c_norm = m.C.frobenius_norm();
  if (c_norm > 0.0)
    for (double& v : m.C.data()) v /= c_norm;

  return m;
}

Trajectory simulate(const TruthModel& model, const Vector& z0, double mu, double t_f,
                    double dt) {
  if (z0.size() != model.n) throw std::invalid_argument("simulate: z0 size mismatch");
  if (!(mu > 0.0)) throw std::invalid_argument("simulate: mu must be positive");
  if (model.kind == ModelKind::Burgers1D) {
    const double h = model.grid_spacing();
    double limit = 0.5 * h * h / mu;
    double umax = 0.0;
    for (double v : z0) umax = std::max(umax, std::abs(v));
    if (umax > 0.0) limit = std::min(limit, 0.5 * h / umax);
    if (dt > limit) {
      std::ostringstream os;
      os << "simulate: dt=" << dt << " violates the explicit-stability heuristic (max "
         << limit << ")";
      throw std::invalid_argument(os.str());
    }
  }
  auto rhs = [&](const Vector& z) { return model.rhs(z, mu); };
  IntegrationOutcome out = integrate_rk4(rhs, z0, t_f, dt);
  if (out.blew_up) throw BlowupError(out.blowup_time);
  return std::move(out.trajectory);
}

SnapshotSet collect_snapshots(const Trajectory& traj, std::size_t stride,
                              const TruthModel& model) {
  return collect_snapshots(traj, stride, model.quadrature_weights(), model.state_blocks());
}

SnapshotSet collect_snapshots(const Trajectory& traj, std::size_t stride, Vector weights,
                              std::vector<Block> blocks) {
  if (traj.empty()) throw std::invalid_argument("collect_snapshots: empty trajectory");
  if (stride < 1) throw std::invalid_argument("collect_snapshots: stride must be >= 1");
  SnapshotSet set;
  set.weights = std::move(weights);
  set.blocks = std::move(blocks);
  for (std::size_t j = 0; j < traj.size(); j += stride) {
    set.states.push_back(traj.states[j]);
    set.times.push_back(traj.times[j]);
  }
  set.validate();
  return set;
}

}  // namespace romstab::truth
