#include "romstab/rom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace romstab::rom {

namespace {

// Weighted Galerkin coefficients: out_a = <phi_a, field>_W.
Vector project_field(const pod::PodBasis& basis, const Vector& field) {
  const std::size_t n = basis.dim();
  const std::size_t r = basis.order();
  Vector out(r, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = basis.weights[i] * field[i];
    if (v == 0.0) continue;
    for (std::size_t a = 0; a < r; ++a) out[a] += v * basis.modes(i, a);
  }
  return out;
}

Vector mode_column(const pod::PodBasis& basis, std::size_t a) {
  Vector out(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) out[i] = basis.modes(i, a);
  return out;
}

// Periodic central second difference.
Vector laplacian_periodic(const Vector& u) {
  const std::size_t n = u.size();
  const double h = 1.0 / static_cast<double>(n);
  const double inv_h2 = 1.0 / (h * h);
  Vector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = k + 1 == n ? 0 : k + 1;
    const std::size_t km = k == 0 ? n - 1 : k - 1;
    out[k] = (u[kp] - 2.0 * u[k] + u[km]) * inv_h2;
  }
  return out;
}

// Bilinear form of the skew convection split: B(u,u) equals the Burgers
// convection term, and sum_k u_k B(u,u)_k = 0 exactly on the periodic grid.
Vector convection_bilinear(const Vector& a, const Vector& b) {
  const std::size_t n = a.size();
  const double h = 1.0 / static_cast<double>(n);
  const double inv_6h = 1.0 / (6.0 * h);
  Vector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = k + 1 == n ? 0 : k + 1;
    const std::size_t km = k == 0 ? n - 1 : k - 1;
    out[k] = (a[k] * (b[kp] - b[km]) + (a[kp] * b[kp] - a[km] * b[km])) * inv_6h;
  }
  return out;
}

}  // namespace

double bound_f(const ClosureConfig& cfg, double q_norm) {
  if (!(cfg.c_max > 0.0)) throw std::invalid_argument("bound_f: c_max must be positive");
  double f = cfg.c_max * q_norm * q_norm;
  if (cfg.bound_kind == BoundKind::AffinePlusQuadratic) f += cfg.l_max * q_norm;
  return f;
}

QuadraticRom::QuadraticRom(Vector e, Matrix l, Matrix d, Tensor3 c, double mu,
                           std::string basis_ref)
    : e_(std::move(e)),
      l_(std::move(l)),
      d_(std::move(d)),
      c_(std::move(c)),
      mu_(mu),
      basis_ref_(std::move(basis_ref)) {
  const std::size_t r = e_.size();
  if (r == 0) throw std::invalid_argument("QuadraticRom: order must be >= 1");
  if (l_.rows() != r || l_.cols() != r || d_.rows() != r || d_.cols() != r ||
      c_.dim1() != r || c_.dim2() != r || c_.dim3() != r)
    throw std::invalid_argument("QuadraticRom: coefficient shapes disagree");
  if (!(mu_ > 0.0)) throw std::invalid_argument("QuadraticRom: mu must be positive");

  const SymEig eig = eig_sym(d_.symmetric_part());
  lambda_max_d_ = eig.values.front();
  if (!(lambda_max_d_ < 0.0))
    throw std::invalid_argument(
        "QuadraticRom: projected D is not negative definite (lambda_max = " +
        std::to_string(lambda_max_d_) + ")");
  max_diag_d_ = d_(0, 0);
  for (std::size_t i = 1; i < r; ++i) max_diag_d_ = std::max(max_diag_d_, d_(i, i));
}

QuadraticRom assemble(const truth::TruthModel& model, const pod::PodBasis& basis,
                      std::string basis_ref) {
  if (basis.dim() != model.n)
    throw std::invalid_argument("assemble: basis dimension does not match the model");
  const Vector model_w = model.quadrature_weights();
  for (std::size_t i = 0; i < model_w.size(); ++i)
    if (std::abs(model_w[i] - basis.weights[i]) > 1e-12 * std::max(1.0, model_w[i]))
      throw std::invalid_argument("assemble: basis weights do not match the model quadrature");

  const std::size_t n = model.n;
  const std::size_t r = basis.order();
  const Vector& zbar = basis.base_state;
  const double mu = model.viscosity;

  std::vector<Vector> phi(r);
  for (std::size_t a = 0; a < r; ++a) phi[a] = mode_column(basis, a);

  Vector e_r(r, 0.0);
  Matrix l_r(r, r);
  Matrix d_r(r, r);
  Tensor3 c_r(r, r, r);

  if (model.kind == truth::ModelKind::SyntheticQuadratic) {
    // Exact expansion of e + L z + mu D z + [C z] z at z = zbar + Phi q.
    Vector constant = model.e;
    add_scaled(constant, model.L.apply(zbar), 1.0);
    add_scaled(constant, model.D.apply(zbar), mu);
    add_scaled(constant, model.C.apply(zbar, zbar), 1.0);
    e_r = project_field(basis, constant);

    for (std::size_t b = 0; b < r; ++b) {
      Vector linear = model.L.apply(phi[b]);
      add_scaled(linear, model.C.apply(zbar, phi[b]), 1.0);
      add_scaled(linear, model.C.apply(phi[b], zbar), 1.0);
      const Vector col = project_field(basis, linear);
      for (std::size_t a = 0; a < r; ++a) l_r(a, b) = col[a];

      const Vector damping = project_field(basis, model.D.apply(phi[b]));
      for (std::size_t a = 0; a < r; ++a) d_r(a, b) = damping[a];

      for (std::size_t c = 0; c < r; ++c) {
        const Vector quad = project_field(basis, model.C.apply(phi[b], phi[c]));
        for (std::size_t a = 0; a < r; ++a) c_r(a, b, c) = quad[a];
      }
    }
  } else {
    // Burgers: rhs(z) = mu Lap z - B(z, z) with the skew-form bilinear B.
    Vector constant = scaled(laplacian_periodic(zbar), mu);
    add_scaled(constant, convection_bilinear(zbar, zbar), -1.0);
    e_r = project_field(basis, constant);

    for (std::size_t b = 0; b < r; ++b) {
      Vector linear = convection_bilinear(zbar, phi[b]);
      add_scaled(linear, convection_bilinear(phi[b], zbar), 1.0);
      const Vector col = project_field(basis, scaled(linear, -1.0));
      for (std::size_t a = 0; a < r; ++a) l_r(a, b) = col[a];

      const Vector damping = project_field(basis, laplacian_periodic(phi[b]));
      for (std::size_t a = 0; a < r; ++a) d_r(a, b) = damping[a];

      for (std::size_t c = 0; c < r; ++c) {
        const Vector quad = project_field(basis, convection_bilinear(phi[b], phi[c]));
        for (std::size_t a = 0; a < r; ++a) c_r(a, b, c) = -quad[a];
      }
    }
  }

  return QuadraticRom(std::move(e_r), std::move(l_r), std::move(d_r), std::move(c_r),
                      mu, std::move(basis_ref));
}

namespace {

// Unchecked evaluators for the integration path: blow-up shows up as
// non-finite state there and is reported by the integrator, not thrown.
Vector eval_nominal(const QuadraticRom& rom, const Vector& q) {
  Vector out = rom.e();
  add_scaled(out, rom.L().apply(q), 1.0);
  add_scaled(out, rom.D().apply(q), rom.mu());
  add_scaled(out, rom.C().apply(q, q), 1.0);
  return out;
}

// Term order mirrors eval_nominal so a zeroed closure reproduces the nominal
// right-hand side bitwise.
Vector eval_stabilized(const QuadraticRom& rom, const ClosureConfig& cfg, double mu_cl,
                       const Vector& q) {
  const double f = bound_f(cfg, norm(q));
  Vector out = rom.e();
  add_scaled(out, rom.L().apply(q), 1.0);
  add_scaled(out, rom.D().apply(q), mu_cl);
  add_scaled(out, rom.C().apply(q, q), 1.0);
  if (cfg.mu_nl != 0.0)
    for (std::size_t i = 0; i < q.size(); ++i)
      out[i] += cfg.mu_nl * f * rom.D()(i, i) * q[i];
  return out;
}

}  // namespace

Vector rhs_nominal(const QuadraticRom& rom, const Vector& q) {
  if (q.size() != rom.order()) throw std::invalid_argument("rhs_nominal: size mismatch");
  if (!all_finite(q)) throw std::invalid_argument("rhs_nominal: non-finite state");
  return eval_nominal(rom, q);
}

Vector closure_H(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q) {
  if (q.size() != rom.order()) throw std::invalid_argument("closure_H: size mismatch");
  if (cfg.mu_nl < 0.0) throw std::invalid_argument("closure_H: mu_nl must be >= 0");
  const double f = bound_f(cfg, norm(q));
  Vector out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    out[i] = cfg.mu_nl * f * rom.D()(i, i) * q[i];
  return out;
}

Vector rhs_stabilized(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q) {
  if (q.size() != rom.order()) throw std::invalid_argument("rhs_stabilized: size mismatch");
  if (!all_finite(q)) throw std::invalid_argument("rhs_stabilized: non-finite state");
  if (cfg.mu_nl < 0.0) throw std::invalid_argument("rhs_stabilized: mu_nl must be >= 0");
  const double mu_cl = rom.mu() + cfg.mu_e;
  if (!(mu_cl > 0.0))
    throw std::invalid_argument("rhs_stabilized: mu + mu_e must stay positive");
  return eval_stabilized(rom, cfg, mu_cl, q);
}

double invariant_set_margin(const QuadraticRom& rom, const ClosureConfig& cfg,
                            const Vector& q) {
  if (q.size() != rom.order())
    throw std::invalid_argument("invariant_set_margin: size mismatch");
  const double mu_cl = rom.mu() + cfg.mu_e;
  if (!(mu_cl > 0.0))
    throw std::invalid_argument("invariant_set_margin: mu + mu_e must stay positive");
  const double q_norm = norm(q);
  if (q_norm == 0.0) return std::numeric_limits<double>::infinity();
  const double f = bound_f(cfg, q_norm);
  return mu_cl * rom.lambda_max_D() * q_norm / f + cfg.mu_nl * q_norm * rom.max_diag_D() +
         1.0;
}

double lyapunov_bound(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q) {
  const double q_norm = norm(q);
  if (q_norm == 0.0) return 0.0;
  return q_norm * bound_f(cfg, q_norm) * invariant_set_margin(rom, cfg, q);
}

RomTrajectory integrate_rom(const QuadraticRom& rom, const std::optional<ClosureConfig>& cfg,
                            const Vector& q0, double t_f, double dt) {
  if (q0.size() != rom.order()) throw std::invalid_argument("integrate_rom: q0 size mismatch");
  if (cfg) {
    if (!(rom.mu() + cfg->mu_e > 0.0))
      throw std::invalid_argument("integrate_rom: mu + mu_e must stay positive");
    if (cfg->mu_nl < 0.0) throw std::invalid_argument("integrate_rom: mu_nl must be >= 0");
  }

  IntegrationOutcome out;
  if (cfg) {
    const double mu_cl = rom.mu() + cfg->mu_e;
    out = integrate_rk4(
        [&](const Vector& q) { return eval_stabilized(rom, *cfg, mu_cl, q); }, q0, t_f, dt);
  } else {
    out = integrate_rk4([&](const Vector& q) { return eval_nominal(rom, q); }, q0, t_f, dt);
  }
  return RomTrajectory{std::move(out.trajectory), out.blew_up, out.blowup_time};
}

}  // namespace romstab::rom
