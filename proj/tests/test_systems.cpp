#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "diracmech/systems.hpp"
#include "oracles.hpp"

using namespace diracmech;
using namespace diracmech::testing;

TEST_CASE("charged_particle_exact") {
  CHECK(inf_norm(charged_particle_exact(0.0)) == 0.0);
  Vector q = charged_particle_exact(M_PI / 2.0);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(-1.0));
  CHECK(q[2] == doctest::Approx(M_PI / 2.0));
  // initial velocity matches dq0 = d1 + d3
  const double e = 1e-6;
  Vector v = (charged_particle_exact(e) - charged_particle_exact(-e)) / (2.0 * e);
  CHECK(diff(v, (Vector(3) << 1, 0, 1).finished()) <= 1e-9);
}

TEST_CASE("charged particle: Lagrangian and initial data") {
  ChargedParticleParams p;
  auto sys = charged_particle_system(p);
  // L_d vanishes on the zero step from the origin
  CHECK(sys.lagrangian.eval(PointQ::zero(sys.lagrangian.space),
                            PointQ::zero(sys.lagrangian.space)) == 0.0);
  // A(0) = 0 so p0 = dq^1 + dq^3 and the trivialized data is ((0,0),(1,0,1),1)
  CHECK(diff(sys.initial.w, (Vector(3) << 1, 0, 1).finished()) == 0.0);
  CHECK(sys.initial.mu[0] == 1.0);
  CHECK(inf_norm(sys.connection.matrix().reshaped()) == 0.0);

  // worked reduced equations: dl/dx0 and dl/dx1 against the display formulas
  Rng rng(71);
  ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
  for (int t = 0; t < 16; ++t) {
    Vector x0 = rng.vec(3), x1 = rng.vec(3), g1 = rng.vec(1);
    auto g = reduced_grad_plus(rl, x0, x1, g1);
    Vector A(3);
    A << -0.5 * p.B0 * x0[1], 0.5 * p.B0 * x0[0], 0.0;
    Vector d = x1 - x0;
    const double mu = (A.dot(d) + g1[0]) / p.h;
    Vector jt(3);
    jt << 0.5 * p.B0 * d[1], -0.5 * p.B0 * d[0], 0.0;
    CHECK(diff(g.dx1, Vector(p.m / p.h * d + mu * A)) <= 1e-12);
    CHECK(diff(g.dx0, Vector(-p.m / p.h * d + mu * (jt - A))) <= 1e-12);
    CHECK(g.dg1[0] == doctest::Approx(mu).epsilon(1e-12));
  }
}

TEST_CASE("charged particle: Table-1 style error at N = 10") {
  ChargedParticleParams p;
  p.T = 20.0;
  p.h = 2.0;
  auto sys = charged_particle_system(p);
  ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
  NewtonConfig cfg;
  ReducedState s0{sys.initial.q.x, sys.initial.w, sys.initial.mu};
  auto res = run_plus(rl, s0, sys.g_abs0, 10, p.h, cfg);
  REQUIRE(res.ok());
  const double err = final_error(res.trajectory, charged_particle_exact);
  CHECK(err == doctest::Approx(1.6781).epsilon(0.005));

  // exact trajectory has zero final error
  ReducedTrajectory exact = res.trajectory;
  exact.states.back().x = charged_particle_exact(p.T);
  CHECK(final_error(exact, charged_particle_exact) == 0.0);
}

TEST_CASE("pendulum: chart guard and S^1 invariance") {
  PendulumParams p;
  Vector q0(4), w0(3);
  q0 << 0.0, M_PI, 2.0, 3.0;  // phi1 on a non-free configuration
  w0 << 0.0, 1.0, 1.0;
  CHECK_THROWS_AS((void)pendulum_system(p, q0, w0, Vector::Zero(1)), InvalidChartError);
  q0 << 0.0, 2.25, 2.0, 2.0 * M_PI + 1e-9;
  CHECK_THROWS_AS((void)pendulum_system(p, q0, w0, Vector::Zero(1)), InvalidChartError);

  auto sys = pendulum_system_paper(p);
  Rng rng(72);
  for (int t = 0; t < 16; ++t) {
    PointQ a = rng.point(sys.lagrangian.space), b = rng.point(sys.lagrangian.space);
    Vector g = rng.vec(1);
    const double ref = sys.lagrangian.eval(a, b);
    const double shifted = sys.lagrangian.eval(act(g, a), act(g, b));
    CHECK(std::abs(shifted - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("pendulum: dual-number gradient against central differences") {
  PendulumParams p;
  auto sys = pendulum_system_paper(p);
  DiscreteLagrangian fd_only = sys.lagrangian;
  fd_only.grad = nullptr;
  Rng rng(73);
  for (int t = 0; t < 25; ++t) {
    PointQ a = rng.point(sys.lagrangian.space), b = rng.point(sys.lagrangian.space);
    auto an = sys.lagrangian.grad(a, b);
    auto fd = grad_fd(fd_only, a, b);
    const double scale =
        std::max({1.0, inf_norm(an.first.w), inf_norm(an.first.r), inf_norm(an.second.w)});
    CHECK(diff(an.first, fd.first) / scale <= 1e-6);
    CHECK(diff(an.second, fd.second) / scale <= 1e-6);
  }
}

TEST_CASE("pendulum: hanging configuration is a stepper fixed point") {
  PendulumParams p;
  Vector q0(4), w0 = Vector::Zero(3);
  q0 << 0.0, M_PI, 0.0, M_PI;
  // non-free configuration: usable only with the chart guard disabled
  auto sys = pendulum_system(p, q0, w0, Vector::Zero(1), /*chart_guard=*/0.0);

  // equilibrium oracle: the potential gradient vanishes at phi = pi
  auto grad_phi = [&](int slot) {
    PointQ a{sys.initial.q.x, Vector::Zero(1)};
    const double e = 1e-6;
    PointQ ap = a, am = a;
    ap.x[slot] += e;
    am.x[slot] -= e;
    PointQ zero_step = PointQ::zero(sys.lagrangian.space);
    (void)zero_step;
    // static potential read off L_d at a zero-velocity step, scaled by 1/h
    return (sys.lagrangian.eval(ap, ap) - sys.lagrangian.eval(am, am)) / (2.0 * e * p.h);
  };
  CHECK(std::abs(grad_phi(0)) <= 1e-4);
  CHECK(std::abs(grad_phi(2)) <= 1e-4);

  ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
  NewtonConfig cfg;
  cfg.tol = 1e-9;
  ReducedState s0{sys.initial.q.x, sys.initial.w, sys.initial.mu};
  auto res = run_plus(rl, s0, sys.g_abs0, 5, p.h, cfg);
  REQUIRE(res.ok());
  for (const auto& st : res.trajectory.states) {
    CHECK(diff(st.x, s0.x) <= 1e-9);
    CHECK(inf_norm(st.w) <= 1e-9);
  }
}

TEST_CASE("pendulum: m2 = 0 decouples into a single spherical pendulum") {
  PendulumParams p;
  p.m2 = 1e-300;  // positive but removes every m2 term to double precision
  auto sys = pendulum_system_paper(p);
  Rng rng(74);
  for (int t = 0; t < 16; ++t) {
    PointQ a = rng.point(sys.lagrangian.space), b = rng.point(sys.lagrangian.space);
    // single pendulum in the same coordinates: theta1 = vtheta1 - vtheta2
    auto single = [&](const PointQ& q0, const PointQ& q1) {
      const double h = p.h;
      const double phi1 = q0.x[0] + 0.5 * (q1.x[0] - q0.x[0]);
      const double dphi1 = (q1.x[0] - q0.x[0]) / h;
      const double dth1 = (q1.g[0] - q0.g[0]) / h - (q1.x[1] - q0.x[1]) / h;
      const double s1 = std::sin(phi1), c1 = std::cos(phi1);
      return h * (0.5 * p.l1 * p.l1 * p.m1 * (dphi1 * dphi1 + dth1 * dth1 * s1 * s1) -
                  p.g * p.m1 * p.l1 * c1);
    };
    const double full = sys.lagrangian.eval(a, b);
    const double ref = single(a, b);
    CHECK(std::abs(full - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("pendulum: short paper-configuration run") {
  PendulumParams p;
  auto sys = pendulum_system_paper(p);
  ReducedLagrangianPlus rl(sys.lagrangian, sys.connection);
  NewtonConfig cfg;
  cfg.tol = 1e-9;
  ReducedState s0{sys.initial.q.x, sys.initial.w, sys.initial.mu};
  auto res = run_plus(rl, s0, sys.g_abs0, 100, p.h, cfg);
  REQUIRE(res.ok());
  for (const auto& st : res.trajectory.states) CHECK(st.mu[0] == 0.0);
  for (const auto& d : res.trajectory.diagnostics) {
    CHECK(d.structure_residual <= 1e-9);
    CHECK(d.newton_iters <= 10);
  }
}

TEST_CASE("normalize_angle") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_angle(2.0 * M_PI - 1e-9) == doctest::Approx(-1e-9).epsilon(1e-3));
  CHECK(normalize_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_angle(-0.5) == doctest::Approx(-0.5));
}

TEST_CASE("parameter validation") {
  ChargedParticleParams bad;
  bad.m = -1.0;
  CHECK_THROWS_AS((void)charged_particle_system(bad), ContractViolation);
  PendulumParams badp;
  badp.l2 = 0.0;
  CHECK_THROWS_AS((void)pendulum_system_paper(badp), ContractViolation);
}
