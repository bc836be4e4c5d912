#include "romstab/mes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace romstab::mes {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void validate_config(const MesConfig& cfg) {
  const std::size_t p = cfg.amplitudes.size();
  if (p == 0) throw std::invalid_argument("MesConfig: needs at least one parameter");
  if (cfg.frequencies.size() != p || cfg.scales.size() != p)
    throw std::invalid_argument("MesConfig: amplitudes/frequencies/scales lengths disagree");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("MesConfig: dt must be positive");
  for (std::size_t i = 0; i < p; ++i) {
    if (!(cfg.amplitudes[i] > 0.0))
      throw std::invalid_argument("MesConfig: amplitudes must be positive");
    if (!(cfg.scales[i] > 0.0))
      throw std::invalid_argument("MesConfig: scales must be positive");
    if (!(cfg.frequencies[i] > 0.0))
      throw std::invalid_argument("MesConfig: frequencies must be positive");
    if (!(cfg.frequencies[i] * cfg.dt < std::numbers::pi)) {
      std::ostringstream os;
      os << "MesConfig: omega_" << i << " * dt = " << cfg.frequencies[i] * cfg.dt
         << " must stay below pi (dither unresolved by sampling)";
      throw std::invalid_argument(os.str());
    }
    for (std::size_t j = i + 1; j < p; ++j)
      if (cfg.frequencies[i] == cfg.frequencies[j])
        throw std::invalid_argument("MesConfig: frequencies must be pairwise distinct");
  }
}

double windowed_mean(const CostTrace& trace, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += trace[i].q;
  return acc / static_cast<double>(end - begin);
}

}  // namespace

MesState::MesState(MesConfig cfg) : cfg_(std::move(cfg)) {
  validate_config(cfg_);
  y_.assign(cfg_.amplitudes.size(), 0.0);
  mu_hat_.assign(cfg_.amplitudes.size(), 0.0);
}

Vector MesState::mu_hat_physical() const {
  Vector out(mu_hat_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= cfg_.scales[i];
  return out;
}

void MesState::step(double q) {
  if (!std::isfinite(q)) throw std::invalid_argument("MesState::step: non-finite cost");
  trace_.push_back(TracePoint{k_, mu_hat_, q});
  const double phase_t = static_cast<double>(k_) * cfg_.dt;
  for (std::size_t i = 0; i < y_.size(); ++i) {
    const double w = cfg_.frequencies[i];
    y_[i] += cfg_.amplitudes[i] * cfg_.dt * std::sin(w * phase_t + kHalfPi) * q;
    mu_hat_[i] = y_[i] + cfg_.amplitudes[i] * std::sin(w * phase_t - kHalfPi);
  }
  ++k_;
}

Vector suggest_frequencies(std::size_t p, double base) {
  if (!(base > 0.0)) throw std::invalid_argument("suggest_frequencies: base must be positive");
  // Multipliers chosen so {w_i} avoids every w_j +- w_k and 2 w_j.
  static constexpr double kMultipliers[] = {1.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0};
  constexpr std::size_t kMax = sizeof(kMultipliers) / sizeof(kMultipliers[0]);
  if (p == 0 || p > kMax)
    throw std::invalid_argument("suggest_frequencies: supported parameter counts are 1..8");
  Vector out(p);
  for (std::size_t i = 0; i < p; ++i) out[i] = base * kMultipliers[i];
  return out;
}

double cost_q(const Trajectory& truth_coeffs, const Trajectory& rom_coeffs) {
  const std::size_t m = truth_coeffs.size();
  if (m != rom_coeffs.size())
    throw std::invalid_argument("cost_q: trajectories have different lengths");
  if (m < 2) throw std::invalid_argument("cost_q: need at least two samples");
  for (std::size_t j = 0; j < m; ++j)
    if (std::abs(truth_coeffs.times[j] - rom_coeffs.times[j]) >
        1e-9 * std::max(1.0, std::abs(truth_coeffs.times[j])))
      throw std::invalid_argument("cost_q: time grids do not match");

  double q = 0.0;
  double prev_err2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Vector& a = truth_coeffs.states[j];
    const Vector& b = rom_coeffs.states[j];
    if (a.size() != b.size()) throw std::invalid_argument("cost_q: state sizes differ");
    double err2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      err2 += d * d;
    }
    if (j > 0) {
      const double h = truth_coeffs.times[j] - truth_coeffs.times[j - 1];
      q += 0.5 * h * (err2 + prev_err2);
    }
    prev_err2 = err2;
  }
  return q;
}

double cost_q(const Trajectory& truth_coeffs, const rom::RomTrajectory& rom_result,
              double q_penalty) {
  if (rom_result.blew_up) return q_penalty;
  return cost_q(truth_coeffs, rom_result.trajectory);
}

bool lagrange_stability_check(const Trajectory& traj, double bound) {
  for (const Vector& q : traj.states) {
    double acc = 0.0;
    for (double v : q) {
      if (!std::isfinite(v)) return false;
      acc += v * v;
    }
    if (!(std::sqrt(acc) < bound)) return false;
  }
  return true;
}

TuneResult run_loop(MesState& state, const CostFn& cost, std::size_t k_max,
                    const StopRule& stop) {
  if (k_max < 1) throw std::invalid_argument("run_loop: k_max must be >= 1");
  TuneResult result;
  result.stop_reason = "k_max";
  for (std::size_t k = 0; k < k_max; ++k) {
    const Vector mu_phys = state.mu_hat_physical();
    const CostSample sample = cost(mu_phys);
    CostRecord record;
    record.k = state.iteration();
    record.mu_physical = sample.mu_evaluated.empty() ? mu_phys : sample.mu_evaluated;
    record.q = sample.q;
    record.stable = sample.stable;
    record.blowup_time = sample.blowup_time;
    result.trace.push_back(std::move(record));

    state.step(sample.q);

    const std::size_t count = result.trace.size();
    if (stop.window > 0 && count >= 2 * stop.window) {
      const double prev = windowed_mean(result.trace, count - 2 * stop.window,
                                        count - stop.window);
      const double cur = windowed_mean(result.trace, count - stop.window, count);
      if (std::abs(cur - prev) < stop.rel_tol * std::max(std::abs(prev), 1e-300)) {
        result.stop_reason = "plateau";
        break;
      }
    }
  }
  result.iterations = result.trace.size();

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    if (result.trace[i].q < result.trace[best].q) best = i;
  result.best_mu = result.trace[best].mu_physical;
  result.best_q = result.trace[best].q;
  result.best_iteration = result.trace[best].k;
  return result;
}

rom::ClosureConfig clamped_closure(const rom::QuadraticRom& rom, const TuneSetup& setup,
                                   const Vector& mu_physical) {
  if (mu_physical.size() < 2)
    throw std::invalid_argument("clamped_closure: expected (mu_e, mu_nl)");
  rom::ClosureConfig cfg;
  cfg.c_max = setup.c_max;
  cfg.l_max = setup.l_max;
  cfg.bound_kind = setup.bound_kind;
  // Keep the damping structure of the closed ROM: mu + mu_e >= floor * mu.
  cfg.mu_e = std::max(mu_physical[0], (setup.mu_cl_floor - 1.0) * rom.mu());
  cfg.mu_nl = std::max(mu_physical[1], 0.0);
  return cfg;
}

TuneResult tune(const rom::QuadraticRom& rom, const Trajectory& truth_coeffs,
                const MesConfig& mes_cfg, const TuneSetup& setup, const StopRule& stop) {
  if (truth_coeffs.size() < 2)
    throw std::invalid_argument("tune: projected truth trajectory needs >= 2 samples");
  if (!(setup.rom_dt > 0.0)) throw std::invalid_argument("tune: rom_dt must be positive");
  if (mes_cfg.amplitudes.size() != 2)
    throw std::invalid_argument("tune: closure tuning uses exactly two parameters");

  const Vector& q0 = truth_coeffs.states.front();
  const double t_f = truth_coeffs.times.back();

  // Snapshot-aligned sampling of the ROM trajectory.
  std::vector<std::size_t> sample_index(truth_coeffs.size());
  for (std::size_t j = 0; j < truth_coeffs.size(); ++j) {
    const double t = truth_coeffs.times[j];
    const auto idx = static_cast<std::size_t>(std::llround(t / setup.rom_dt));
    if (std::abs(static_cast<double>(idx) * setup.rom_dt - t) >
        1e-6 * std::max(1.0, std::abs(t)))
      throw std::invalid_argument(
          "tune: truth snapshot times are not aligned with the ROM step");
    sample_index[j] = idx;
  }

  MesState state(mes_cfg);
  const CostFn cost = [&](const Vector& mu_phys) -> CostSample {
    const rom::ClosureConfig cfg = clamped_closure(rom, setup, mu_phys);
    const rom::RomTrajectory rr = rom::integrate_rom(rom, cfg, q0, t_f, setup.rom_dt);
    CostSample sample;
    sample.mu_evaluated = {cfg.mu_e, cfg.mu_nl};
    sample.stable = !rr.blew_up && lagrange_stability_check(rr.trajectory);
    sample.blowup_time = rr.blowup_time;
    if (!sample.stable) {
      sample.q = mes_cfg.q_penalty;
      return sample;
    }
    Trajectory sampled;
    sampled.times = truth_coeffs.times;
    sampled.states.reserve(truth_coeffs.size());
    for (std::size_t idx : sample_index) {
      if (idx >= rr.trajectory.size())
        throw std::invalid_argument("tune: ROM trajectory shorter than the truth grid");
      sampled.states.push_back(rr.trajectory.states[idx]);
    }
    sample.q = cost_q(truth_coeffs, sampled);
    return sample;
  };

  TuneResult result = run_loop(state, cost, mes_cfg.k_max, stop);
  const bool any_stable =
      std::any_of(result.trace.begin(), result.trace.end(),
                  [](const CostRecord& r) { return r.stable; });
  if (!any_stable)
    throw std::runtime_error(
        "tune: every closure evaluation was unstable; enlarge the mu_e search scale "
        "(scales[0]) or its dither amplitude");
  return result;
}

}  // namespace romstab::mes
