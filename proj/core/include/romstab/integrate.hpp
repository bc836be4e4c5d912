#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "romstab/linalg.hpp"

namespace romstab {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
};

/// A state is declared blown up once it leaves this Euclidean ball or turns
/// non-finite; the failure time is a meaningful signal (unstable ROMs).
inline constexpr double kBlowupNorm = 1e8;

struct IntegrationOutcome {
  Trajectory trajectory;  // truncated at the last healthy state on blow-up
  bool blew_up = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline bool state_healthy(const Vector& y, double bound) {
  double acc = 0.0;
  for (double v : y) {
    if (!std::isfinite(v)) return false;
    acc += v * v;
  }
  return std::sqrt(acc) <= bound;
}

}  // namespace detail

/// Classical fixed-step RK4 over [0, t_f]: states at every k*dt plus a final
/// partial step to t_f when t_f is not a step multiple.
template <typename Rhs>
IntegrationOutcome integrate_rk4(const Rhs& rhs, const Vector& y0, double t_f, double dt,
                                 double blowup_norm = kBlowupNorm) {
  if (!(t_f > 0.0)) throw std::invalid_argument("integrate_rk4: t_f must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (!all_finite(y0)) throw std::invalid_argument("integrate_rk4: non-finite initial state");

  const double steps_exact = t_f / dt;
  const auto full_steps = static_cast<std::size_t>(
      std::floor(steps_exact + 1e-9 * std::max(1.0, steps_exact)));

  IntegrationOutcome out;
  out.trajectory.times.reserve(full_steps + 2);
  out.trajectory.states.reserve(full_steps + 2);
  out.trajectory.times.push_back(0.0);
  out.trajectory.states.push_back(y0);

  Vector y = y0;
  const std::size_t n = y.size();
  Vector stage(n), accum(n);

  auto advance = [&](double h, double t_next) -> bool {
    const Vector k1 = rhs(y);
    stage = y;
    add_scaled(stage, k1, 0.5 * h);
    const Vector k2 = rhs(stage);
    stage = y;
    add_scaled(stage, k2, 0.5 * h);
    const Vector k3 = rhs(stage);
    stage = y;
    add_scaled(stage, k3, h);
    const Vector k4 = rhs(stage);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!detail::state_healthy(y, blowup_norm)) {
      out.blew_up = true;
      out.blowup_time = t_next;
      return false;
    }
    out.trajectory.times.push_back(t_next);
    out.trajectory.states.push_back(y);
    return true;
  };

  for (std::size_t k = 0; k < full_steps; ++k) {
    if (!advance(dt, static_cast<double>(k + 1) * dt)) return out;
  }
  const double remainder = t_f - static_cast<double>(full_steps) * dt;
  if (remainder > 1e-9 * std::max(1.0, t_f)) advance(remainder, t_f);
  return out;
}

}  // namespace romstab
