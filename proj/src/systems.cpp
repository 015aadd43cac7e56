#include "diracmech/systems.hpp"

#include <cmath>

#include "diracmech/dual.hpp"

namespace diracmech {

void ChargedParticleParams::validate() const {
  if (!(m > 0.0)) throw ContractViolation("charged particle: m must be positive");
  if (!(h > 0.0)) throw ContractViolation("charged particle: h must be positive");
  if (!(T > 0.0)) throw ContractViolation("charged particle: T must be positive");
}

namespace {

Vector magnetic_potential(double B0, const Vector& q) {
  Vector a(3);
  a << -0.5 * B0 * q[1], 0.5 * B0 * q[0], 0.0;
  return a;
}

// (DA)^T v for A = (B0/2)(-q2 dq1 + q1 dq2).
Vector magnetic_potential_jt(double B0, const Vector& v) {
  Vector a(3);
  a << 0.5 * B0 * v[1], -0.5 * B0 * v[0], 0.0;
  return a;
}

}  // namespace

SystemSetup charged_particle_system(const ChargedParticleParams& p) {
  p.validate();
  const TrivializedSpace space{3, 1};
  const double m = p.m, B0 = p.B0, h = p.h;

  auto eval_incr = [m, B0, h](const PointQ& q0, const PointQ& dq) {
    const Vector A = magnetic_potential(B0, q0.x);
    const double gauge = A.dot(dq.x) + dq.g[0];
    return (m / (2.0 * h)) * dq.x.squaredNorm() + (1.0 / (2.0 * h)) * gauge * gauge;
  };
  auto grad_incr = [m, B0, h](const PointQ& q0, const PointQ& dq) {
    const Vector A = magnetic_potential(B0, q0.x);
    const double c = (A.dot(dq.x) + dq.g[0]) / h;  // the step's group momentum
    IncrementGradient g;
    g.dq0.w = c * magnetic_potential_jt(B0, dq.x);
    g.dq0.r = Vector::Zero(1);
    g.ddq.w = (m / h) * dq.x + c * A;
    g.ddq.r = Vector::Constant(1, c);
    return g;
  };

  DiscreteLagrangian L;
  L.space = space;
  L.eval_incr = eval_incr;
  L.grad_incr = grad_incr;
  L.eval = [eval_incr](const PointQ& q0, const PointQ& q1) { return eval_incr(q0, q1 - q0); };
  L.grad = [grad_incr](const PointQ& q0, const PointQ& q1) {
    IncrementGradient g = grad_incr(q0, q1 - q0);
    return std::make_pair(g.dq0 - g.ddq, g.ddq);
  };
  L.declared_g_invariant = true;

  SystemSetup out{std::move(L), DiscreteConnection::flat(space), {}, Vector::Zero(1)};
  // q0 = 0, theta0 = 0, p0 = dq^1 + dq^3, p_theta = e; trivializes (H = 0) to
  // ((0,0), (1,0,1), e).
  PointQ q0 = PointQ::zero(space);
  CovectorQ p0{(Vector(3) << 1.0, 0.0, 1.0).finished(), Vector::Constant(1, p.e)};
  out.initial = hat_lambda_d(out.connection, q0, p0);
  return out;
}

Vector charged_particle_exact(double t) {
  Vector q(3);
  q << std::sin(t), std::cos(t) - 1.0, t;
  return q;
}

double final_error(const ReducedTrajectory& tr, const std::function<Vector(double)>& exact) {
  if (tr.times.empty()) throw ContractViolation("final_error: empty trajectory");
  const Vector ref = exact(tr.times.back());
  return (ref - tr.states.back().x).norm();
}

void PendulumParams::validate() const {
  if (!(m1 > 0.0 && m2 > 0.0 && l1 > 0.0 && l2 > 0.0 && g > 0.0 && h > 0.0 && T > 0.0)) {
    throw ContractViolation("pendulum: all parameters must be positive");
  }
}

namespace {

// Continuous Lagrangian in the rotated spherical coordinates; positions enter
// only through (phi1, vtheta2, phi2), never through vtheta1, which is what
// makes the S^1 invariance exact in floating point as well.
template <typename Real>
Real pendulum_lagrangian(const PendulumParams& p, const Real& phi1, const Real& vth2,
                         const Real& phi2, const Real& dvth1, const Real& dphi1,
                         const Real& dvth2, const Real& dphi2) {
  using std::cos;
  using std::sin;
  const Real dt1 = dvth1 - dvth2;  // theta1 = vtheta1 - vtheta2
  const Real dt2 = dvth1 + dvth2;  // theta2 = vtheta1 + vtheta2
  const Real s1 = sin(phi1), c1 = cos(phi1);
  const Real s2 = sin(phi2), c2 = cos(phi2);
  const Real delta = Real(-2.0) * vth2;  // theta1 - theta2
  const Real cd = cos(delta), sd = sin(delta);
  const Real l1d = Real(p.l1), l2d = Real(p.l2);

  const Real t1 = Real(0.5 * p.l1 * p.l1 * p.m1) * (dphi1 * dphi1 + dt1 * dt1 * s1 * s1);
  const Real t2 =
      Real(0.5 * p.m2) *
      (l1d * l1d * dphi1 * dphi1 + l2d * l2d * dphi2 * dphi2 + l1d * l1d * dt1 * dt1 * s1 * s1 +
       l2d * l2d * dt2 * dt2 * s2 * s2 +
       Real(2.0 * p.l1 * p.l2) *
           (dphi1 * dphi2 * s1 * s2 + dphi1 * dphi2 * c1 * c2 * cd +
            dphi1 * dt2 * s2 * sd * c1 - dphi2 * dt1 * s1 * sd * c2 + dt1 * dt2 * s1 * s2 * cd));
  const Real v = Real(p.g * p.m1 * p.l1) * c1 + Real(p.g * p.m2) * (l1d * c1 + l2d * c2);
  return t1 + t2 - v;
}

using PendDual = Dual<long double, 7>;

}  // namespace

SystemSetup pendulum_system(const PendulumParams& p, const Vector& q0, const Vector& w0,
                            const Vector& mu0, double chart_guard) {
  p.validate();
  check_vector(4, q0, "pendulum: q0");
  check_vector(3, w0, "pendulum: w0");
  check_vector(1, mu0, "pendulum: mu0");
  if (chart_guard > 0.0) {
    for (int i : {1, 3}) {
      if (std::abs(std::remainder(q0[i], M_PI)) <= chart_guard) {
        throw InvalidChartError("pendulum: phi" + std::string(i == 1 ? "1" : "2") +
                                " within " + std::to_string(chart_guard) +
                                " of a multiple of pi; the S^1 action is not free there");
      }
    }
  }

  const TrivializedSpace space{3, 1};
  const PendulumParams par = p;
  const double h = p.h;

  // Midpoint discrete Lagrangian, evaluated from (q0, dq) in long double.
  auto eval_incr = [par, h](const PointQ& q0p, const PointQ& dq) {
    const long double hl = h;
    const long double mid1 = (long double)q0p.x[0] + (long double)dq.x[0] / 2.0L;
    const long double mid2 = (long double)q0p.x[1] + (long double)dq.x[1] / 2.0L;
    const long double mid3 = (long double)q0p.x[2] + (long double)dq.x[2] / 2.0L;
    const long double v0 = (long double)dq.g[0] / hl;
    const long double v1 = (long double)dq.x[0] / hl;
    const long double v2 = (long double)dq.x[1] / hl;
    const long double v3 = (long double)dq.x[2] / hl;
    return double(hl * pendulum_lagrangian<long double>(par, mid1, mid2, mid3, v0, v1, v2, v3));
  };

  auto grad_incr = [par, h](const PointQ& q0p, const PointQ& dq) {
    const long double hl = h;
    // Directions: 0..2 = d/dx0 (dq held), 3..5 = d/ddx, 6 = d/ddg.
    std::array<PendDual, 3> x0d, dxd;
    for (int i = 0; i < 3; ++i) {
      x0d[i] = PendDual::seeded((long double)q0p.x[i], std::size_t(i));
      dxd[i] = PendDual::seeded((long double)dq.x[i], std::size_t(3 + i));
    }
    PendDual dgd = PendDual::seeded((long double)dq.g[0], 6);
    const PendDual half(0.5L);
    PendDual mid1 = x0d[0] + dxd[0] * half;
    PendDual mid2 = x0d[1] + dxd[1] * half;
    PendDual mid3 = x0d[2] + dxd[2] * half;
    PendDual hinv(1.0L / hl);
    PendDual v0 = dgd * hinv, v1 = dxd[0] * hinv, v2 = dxd[1] * hinv, v3 = dxd[2] * hinv;
    PendDual l = PendDual(hl) * pendulum_lagrangian<PendDual>(par, mid1, mid2, mid3, v0, v1, v2, v3);

    IncrementGradient g;
    g.dq0.w = Vector(3);
    g.dq0.r = Vector::Zero(1);  // vtheta1 position never enters
    g.ddq.w = Vector(3);
    g.ddq.r = Vector(1);
    for (int i = 0; i < 3; ++i) {
      g.dq0.w[i] = double(l.d[i]);
      g.ddq.w[i] = double(l.d[3 + i]);
    }
    g.ddq.r[0] = double(l.d[6]);
    return g;
  };

  DiscreteLagrangian L;
  L.space = space;
  L.eval_incr = eval_incr;
  L.grad_incr = grad_incr;
  L.eval = [eval_incr](const PointQ& a, const PointQ& b) { return eval_incr(a, b - a); };
  L.grad = [grad_incr](const PointQ& a, const PointQ& b) {
    IncrementGradient g = grad_incr(a, b - a);
    return std::make_pair(g.dq0 - g.ddq, g.ddq);
  };
  L.declared_g_invariant = true;

  SystemSetup out{std::move(L), DiscreteConnection::flat(space), {}, Vector::Constant(1, q0[0])};
  PointQ q{(Vector(3) << q0[1], q0[2], q0[3]).finished(), Vector::Constant(1, q0[0])};
  // (mu0, w0) are the trivialized momenta directly; with H = 0 the
  // hat_lambda_d image has the same (w, mu) components.
  out.initial = TrivializedMomentumPoint{q, w0, mu0};
  return out;
}

SystemSetup pendulum_system_paper(const PendulumParams& p) {
  Vector q0(4);
  q0 << 0.0, 9.0 / 4.0, 2.0, 3.0;
  Vector w0(3);
  w0 << 0.0, 1.0, 1.0;
  return pendulum_system(p, q0, w0, Vector::Zero(1));
}

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

}  // namespace diracmech
