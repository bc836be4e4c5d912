#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "romstab/integrate.hpp"
#include "romstab/linalg.hpp"
#include "romstab/pod.hpp"
#include "romstab/truth.hpp"

namespace romstab::rom {

/// Shape of the known bound f(q) on the undamped part of the dynamics:
/// QuadraticOnly        f(q) = c_max ||q||^2
/// AffinePlusQuadratic  f(q) = l_max ||q|| + c_max ||q||^2
enum class BoundKind { QuadraticOnly, AffinePlusQuadratic };

/// Closure amplitudes and the bound parameters they are certified against.
struct ClosureConfig {
  double mu_e = 0.0;   // additive viscosity correction; mu + mu_e must stay > 0
  double mu_nl = 0.0;  // nonlinear amplitude, >= 0
  double c_max = 0.0;  // Frobenius bound on the (perturbed) convection tensor, > 0
  double l_max = 0.0;  // bound on ||L||, used by AffinePlusQuadratic
  BoundKind bound_kind = BoundKind::QuadraticOnly;
};

double bound_f(const ClosureConfig& cfg, double q_norm);

/// Quadratic reduced model q' = e + L q + mu D q + [C q] q with negative
/// definite D. Constructing one validates the damping structure; the cached
/// lambda_max((D+D*)/2) and max diagonal entry feed the invariant-set
/// diagnostics.
class QuadraticRom {
 public:
  QuadraticRom(Vector e, Matrix l, Matrix d, Tensor3 c, double mu,
               std::string basis_ref = "");

  std::size_t order() const { return e_.size(); }
  const Vector& e() const { return e_; }
  const Matrix& L() const { return l_; }
  const Matrix& D() const { return d_; }
  const Tensor3& C() const { return c_; }
  double mu() const { return mu_; }
  const std::string& basis_ref() const { return basis_ref_; }

  double lambda_max_D() const { return lambda_max_d_; }  // of the symmetric part, < 0
  double max_diag_D() const { return max_diag_d_; }      // max d_ii, < 0

 private:
  Vector e_;
  Matrix l_;
  Matrix d_;
  Tensor3 c_;
  double mu_;
  std::string basis_ref_;
  double lambda_max_d_;
  double max_diag_d_;
};

/// Galerkin projection of a truth model through a POD basis. The base-state
/// shift is expanded exactly, so constant and linear corrections land in e
/// and L (e carries the viscous base-state term at the nominal mu). Raises if
/// the projected D is not negative definite.
QuadraticRom assemble(const truth::TruthModel& model, const pod::PodBasis& basis,
                      std::string basis_ref = "");

Vector rhs_nominal(const QuadraticRom& rom, const Vector& q);

/// Nonlinear closure H(q) = mu_nl f(q) diag(d_11..d_rr) q.
Vector closure_H(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q);

/// Stabilized dynamics F_tilde(q) + (mu + mu_e) D q + H(q) with
/// F_tilde(q) = e + L q + [C q] q.
Vector rhs_stabilized(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q);

/// Margin m(q) = mu_cl lambda_max(D) ||q|| / f(q) + mu_nl ||q|| max d_ii + 1.
/// q lies in the invariant set iff m(q) >= 0; q = 0 maps to +infinity by
/// convention (the expression divides by f(q)).
double invariant_set_margin(const QuadraticRom& rom, const ClosureConfig& cfg,
                            const Vector& q);

/// Upper bound ||q|| f(q) m(q) on dV/dt along the stabilized dynamics, with
/// V = ||q||^2 / 2; negative outside the invariant set.
double lyapunov_bound(const QuadraticRom& rom, const ClosureConfig& cfg, const Vector& q);

struct RomTrajectory {
  Trajectory trajectory;
  bool blew_up = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
};

/// RK4 with blow-up detection (norm > 1e8 or non-finite). A blow-up is data
/// here, not an error: the returned flags drive the tuner's penalty cost.
/// Pass no config to integrate the nominal ROM.
RomTrajectory integrate_rom(const QuadraticRom& rom, const std::optional<ClosureConfig>& cfg,
                            const Vector& q0, double t_f, double dt);

}  // namespace romstab::rom
