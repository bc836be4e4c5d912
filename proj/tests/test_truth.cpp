#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "romstab/rng.hpp"
#include "romstab/truth.hpp"

using namespace romstab;
using namespace romstab::truth;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vector sine_state(std::size_t n, double amplitude, int wavenumber = 1) {
  Vector u(n);
  for (std::size_t k = 0; k < n; ++k)
    u[k] = amplitude * std::sin(kTwoPi * wavenumber * static_cast<double>(k) /
                                static_cast<double>(n));
  return u;
}

// Independent discretization of the skew convection split, used as the test
// oracle against the solver kernel.
Vector oracle_convection(const Vector& u) {
  const std::size_t n = u.size();
  const double h = 1.0 / static_cast<double>(n);
  Vector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kp = (k + 1) % n;
    const std::size_t km = (k + n - 1) % n;
    const double u_x = (u[kp] - u[km]) / (2.0 * h);
    const double usq_x = (u[kp] * u[kp] - u[km] * u[km]) / (2.0 * h);
    out[k] = (u[k] * u_x + usq_x) / 3.0;
  }
  return out;
}

Vector random_state(std::size_t n, Rng& rng, double amplitude = 1.0) {
  Vector u(n);
  for (double& v : u) v = amplitude * rng.uniform(-1.0, 1.0);
  return u;
}

Vector decreasing_spectrum(std::size_t n, double first, double last) {
  Vector s(n);
  const double ratio = std::pow(last / first, 1.0 / static_cast<double>(n - 1));
  double v = first;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = v;
    v *= ratio;
  }
  return s;
}

}  // namespace

TEST_CASE("burgers_rhs: zero state is an equilibrium") {
  const Vector rhs = burgers_rhs(Vector(64, 0.0), 0.01);
  for (double v : rhs) CHECK(v == 0.0);
}

TEST_CASE("burgers_rhs: linearized sine mode matches the analytic decay rate") {
  const std::size_t n = 256;
  const double mu = 0.01;
  const double eps = 1e-6;
  const Vector u = sine_state(n, eps);
  const Vector rhs = burgers_rhs(u, mu);
  const double rate = -4.0 * std::numbers::pi * std::numbers::pi * mu;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = rate * u[k];
    if (std::abs(u[k]) < 0.1 * eps) continue;  // avoid relative error at the nodes
    worst = std::max(worst, std::abs(rhs[k] - expected) / std::abs(expected));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("burgers_rhs: dissipative, with exactly energy-free convection") {
  const std::size_t n = 128;
  const double mu = 0.02;
  const Vector w(n, 1.0 / static_cast<double>(n));
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector u = random_state(n, rng);
    const Vector rhs = burgers_rhs(u, mu);
    CHECK(weighted_dot(w, u, rhs) <= 0.0);

    const Vector conv = oracle_convection(u);
    const double conv_energy = weighted_dot(w, u, conv);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) scale += std::abs(u[k] * conv[k]) * w[k];
    CHECK(std::abs(conv_energy) <= 1e-12 * std::max(scale, 1e-30));
  }
}

TEST_CASE("burgers_rhs: convection equals the oracle discretization") {
  const std::size_t n = 64;
  Rng rng(7);
  const Vector u = random_state(n, rng);
  const double mu1 = 0.01, mu2 = 0.03;
  const Vector r1 = burgers_rhs(u, mu1);
  const Vector r2 = burgers_rhs(u, mu2);
  // conv = (mu2 r1 - mu1 r2) / (mu1 - mu2) eliminates the diffusion term
  const Vector conv = oracle_convection(u);
  for (std::size_t k = 0; k < n; ++k) {
    const double extracted = (mu2 * r1[k] - mu1 * r2[k]) / (mu1 - mu2);
    CHECK(extracted == doctest::Approx(conv[k]).epsilon(1e-9));
  }
}

TEST_CASE("burgers_rhs: rejects bad input") {
  CHECK_THROWS_AS(burgers_rhs(Vector(4, 0.0), 0.01), std::invalid_argument);
  Vector u(32, 0.0);
  u[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(burgers_rhs(u, 0.01), std::invalid_argument);
}

TEST_CASE("make_synthetic: convection tensor is energy-free by antisymmetry") {
  const std::size_t n = 16;
  const TruthModel m = make_synthetic(n, 41, decreasing_spectrum(n, 1.0, 0.1));
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector z = random_state(n, rng, 2.0);
    const Vector cz = m.C.apply(z, z);
    const double triple = dot(z, cz);
    const double scale = norm(z) * norm(z) * norm(z) * m.C.frobenius_norm();
    CHECK(std::abs(triple) <= 1e-12 * std::max(scale, 1e-30));
  }
  // antisymmetry C_ijk = -C_jik entry-wise
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        CHECK(m.C(i, j, k) == -m.C(j, i, k));
}

TEST_CASE("make_synthetic: deterministic for a fixed seed") {
  const std::size_t n = 12;
  const Vector spec = decreasing_spectrum(n, 2.0, 0.2);
  const TruthModel a = make_synthetic(n, 333, spec);
  const TruthModel b = make_synthetic(n, 333, spec);
  CHECK(a.L.data() == b.L.data());
  CHECK(a.D.data() == b.D.data());
  CHECK(a.C.data() == b.C.data());
  const TruthModel c = make_synthetic(n, 334, spec);
  CHECK(a.C.data() != c.C.data());
}

TEST_CASE("make_synthetic: rejects a non-decreasing spectrum") {
  Vector spec = decreasing_spectrum(8, 1.0, 0.1);
  spec[3] = spec[2];
  CHECK_THROWS_AS(make_synthetic(8, 1, spec), std::invalid_argument);
  Vector negative = decreasing_spectrum(8, 1.0, 0.1);
  negative[7] = -0.01;
  CHECK_THROWS_AS(make_synthetic(8, 1, negative), std::invalid_argument);
}

TEST_CASE("make_synthetic: energy is non-increasing along trajectories") {
  const std::size_t n = 10;
  const TruthModel m = make_synthetic(n, 77, decreasing_spectrum(n, 1.0, 0.1));
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector z0 = random_state(n, rng);
    const Trajectory traj = simulate(m, z0, 0.5, 2.0, 0.01);
    double prev = dot(traj.states.front(), traj.states.front());
    for (std::size_t j = 1; j < traj.size(); ++j) {
      const double v = dot(traj.states[j], traj.states[j]);
      CHECK(v <= prev * (1.0 + 1e-9) + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("simulate: zero initial state stays identically zero") {
  const TruthModel m = make_burgers(64, 0.01);
  const Trajectory traj = simulate(m, Vector(64, 0.0), 0.01, 0.1, 1e-4);
  for (const Vector& z : traj.states)
    for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("simulate: linear-regime Burgers decays at the analytic rate") {
  const std::size_t n = 256;
  const double mu = 0.01;
  const TruthModel m = make_burgers(n, mu);
  const Vector z0 = sine_state(n, 1e-6);
  const Trajectory traj = simulate(m, z0, mu, 1.0, 5e-4);
  const Vector w = m.quadrature_weights();
  const double ratio = weighted_norm(w, traj.states.back()) / weighted_norm(w, z0);
  const double expected = std::exp(-4.0 * std::numbers::pi * std::numbers::pi * mu *
                                   traj.times.back());
  CHECK(std::abs(ratio / expected - 1.0) <= 0.01);
}

TEST_CASE("simulate: Burgers energy is non-increasing from a sine wave") {
  const std::size_t n = 128;
  const double mu = 0.01;
  const TruthModel m = make_burgers(n, mu);
  const Trajectory traj = simulate(m, sine_state(n, 1.0), mu, 1.0, 1e-3);
  const Vector w = m.quadrature_weights();
  double prev = weighted_dot(w, traj.states.front(), traj.states.front());
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const double v = weighted_dot(w, traj.states[j], traj.states[j]);
    CHECK(v <= prev * (1.0 + 1e-9));
    prev = v;
  }
}

TEST_CASE("simulate: RK4 halving the step cuts the error ~16x") {
  const std::size_t n = 64;
  const double mu = 0.05;
  const TruthModel m = make_burgers(n, mu);
  const Vector z0 = sine_state(n, 1.0);
  const double t_f = 0.1;
  auto final_state = [&](double dt) { return simulate(m, z0, mu, t_f, dt).states.back(); };
  const Vector ref = final_state(1.25e-4);
  const double err_coarse = norm(difference(final_state(1e-3), ref));
  const double err_fine = norm(difference(final_state(5e-4), ref));
  const double ratio = err_coarse / err_fine;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("simulate: identical inputs give bitwise-identical trajectories") {
  const TruthModel m = make_burgers(64, 0.02);
  const Vector z0 = sine_state(64, 0.5);
  const Trajectory a = simulate(m, z0, 0.02, 0.2, 1e-3);
  const Trajectory b = simulate(m, z0, 0.02, 0.2, 1e-3);
  REQUIRE(a.size() == b.size());
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(a.states[j] == b.states[j]);
}

TEST_CASE("simulate: rejects a step violating the stability heuristic") {
  const TruthModel m = make_burgers(64, 0.05);
  CHECK_THROWS_AS(simulate(m, sine_state(64, 1.0), 0.05, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("simulate: names the blow-up time for a diverging system") {
  TruthModel m;
  m.kind = ModelKind::SyntheticQuadratic;
  m.n = 4;
  m.viscosity = 1.0;
  m.e = Vector(4, 0.0);
  m.L = Matrix::identity(4);  // deliberately unstable coupling
  m.D = Matrix(4, 4);
  for (std::size_t i = 0; i < 4; ++i) m.D(i, i) = -1e-3;
  m.C = Tensor3(4, 4, 4);
  const Vector z0(4, 1.0);
  try {
    simulate(m, z0, 1.0, 30.0, 0.01);
    FAIL("expected BlowupError");
  } catch (const BlowupError& err) {
    CHECK(err.time() > 0.0);
    CHECK(err.time() < 30.0);
    CHECK(std::string(err.what()).find("blew up at t=") != std::string::npos);
  }
}

TEST_CASE("collect_snapshots: stride arithmetic") {
  const std::size_t n = 8;
  const TruthModel m = make_synthetic(n, 3, decreasing_spectrum(n, 1.0, 0.5));
  Rng rng(1);
  const Trajectory traj = simulate(m, random_state(n, rng), 1.0, 1.0, 0.01);
  REQUIRE(traj.size() == 101);

  const SnapshotSet s10 = collect_snapshots(traj, 10, m);
  CHECK(s10.size() == 11);
  CHECK(s10.times.front() == 0.0);
  CHECK(s10.times.back() == traj.times[100]);

  const SnapshotSet s1 = collect_snapshots(traj, 1, m);
  CHECK(s1.size() == traj.size());

  CHECK(s10.weights == Vector(n, 1.0));
  REQUIRE(s10.blocks.size() == 2);
  CHECK(s10.blocks[0].size == 4);
  CHECK(s10.blocks[1].offset == 4);
}

TEST_CASE("collect_snapshots: the default snapshot horizon yields s = 101") {
  // dt * stride = 0.78 up to t_f = 78
  const std::size_t n = 8;
  const TruthModel m = make_synthetic(n, 3, decreasing_spectrum(n, 1.0, 0.5));
  Rng rng(2);
  const Trajectory traj = simulate(m, random_state(n, rng, 0.1), 1.0, 78.0, 0.078);
  const SnapshotSet s = collect_snapshots(traj, 10, m);
  CHECK(s.size() == 101);
  CHECK(s.times.back() == doctest::Approx(78.0).epsilon(1e-12));
}

TEST_CASE("collect_snapshots: rejects an empty trajectory") {
  const TruthModel m = make_burgers(16, 0.01);
  CHECK_THROWS_AS(collect_snapshots(Trajectory{}, 1, m), std::invalid_argument);
}
