#include "diracmech/lagrangian.hpp"

#include <cmath>
#include <random>
#include <string>

namespace diracmech {

namespace {

constexpr double kEps = 2.220446049250313e-16;

double fd_step(double coord) { return std::cbrt(kEps) * std::max(1.0, std::abs(coord)); }

// Central difference of eval along one coordinate of the stacked (q0, q1).
double central_diff(const DiscreteLagrangian& L, PointQ q0, PointQ q1, int coord) {
  const Eigen::Index ns = L.space.dim_sigma;
  const Eigen::Index nq = L.space.dim_q();
  double* slot = nullptr;
  if (coord < nq) {
    slot = coord < ns ? &q0.x[coord] : &q0.g[coord - ns];
  } else {
    const int c = coord - nq;
    slot = c < ns ? &q1.x[c] : &q1.g[c - ns];
  }
  const double base = *slot;
  const double h = fd_step(base);
  *slot = base + h;
  const double fp = L.eval(q0, q1);
  *slot = base - h;
  const double fm = L.eval(q0, q1);
  const double d = (fp - fm) / (2.0 * h);
  if (!std::isfinite(d)) {
    throw GradientError("grad_fd: non-finite difference at coordinate " + std::to_string(coord),
                        coord);
  }
  return d;
}

}  // namespace

std::pair<CovectorQ, CovectorQ> grad_fd(const DiscreteLagrangian& L, const PointQ& q0,
                                        const PointQ& q1) {
  check_point(L.space, q0, "grad_fd: q0");
  check_point(L.space, q1, "grad_fd: q1");
  const Eigen::Index ns = L.space.dim_sigma;
  const Eigen::Index ng = L.space.dim_g;
  CovectorQ d1 = CovectorQ::zero(L.space);
  CovectorQ d2 = CovectorQ::zero(L.space);
  const Eigen::Index nq = ns + ng;
  for (Eigen::Index i = 0; i < ns; ++i) d1.w[i] = central_diff(L, q0, q1, int(i));
  for (Eigen::Index i = 0; i < ng; ++i) d1.r[i] = central_diff(L, q0, q1, int(ns + i));
  for (Eigen::Index i = 0; i < ns; ++i) d2.w[i] = central_diff(L, q0, q1, int(nq + i));
  for (Eigen::Index i = 0; i < ng; ++i) d2.r[i] = central_diff(L, q0, q1, int(nq + ns + i));
  return {d1, d2};
}

std::pair<CovectorQ, CovectorQ> gradient(const DiscreteLagrangian& L, const PointQ& q0,
                                         const PointQ& q1) {
  if (L.grad) return L.grad(q0, q1);
  return grad_fd(L, q0, q1);
}

double eval_increment(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& dq) {
  if (L.eval_incr) return L.eval_incr(q0, dq);
  return L.eval(q0, q0 + dq);
}

IncrementGradient gradient_increment(const DiscreteLagrangian& L, const PointQ& q0,
                                     const PointQ& dq) {
  if (L.grad_incr) return L.grad_incr(q0, dq);
  auto [d1, d2] = gradient(L, q0, q0 + dq);
  return {d1 + d2, d2};
}

namespace {

// Reject reduction of Lagrangians that are not actually invariant: sample a
// few random shifts at unit scale. Relative tolerance; the absolute values of
// physically-scaled Lagrangians are arbitrary.
void audit_invariance(const DiscreteLagrangian& L) {
  if (!L.declared_g_invariant) {
    throw ContractViolation("reduced Lagrangian: base must be declared G-invariant");
  }
  std::mt19937 rng(20240915u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&](Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
    return v;
  };
  for (int trial = 0; trial < 16; ++trial) {
    PointQ q0{draw(L.space.dim_sigma), draw(L.space.dim_g)};
    PointQ q1{draw(L.space.dim_sigma), draw(L.space.dim_g)};
    Vector g = draw(L.space.dim_g);
    const double ref = L.eval(q0, q1);
    const double shifted = L.eval(act(g, q0), act(g, q1));
    if (!(std::abs(shifted - ref) <= 1e-12 * std::max(1.0, std::abs(ref)))) {
      throw ContractViolation("reduced Lagrangian: declared invariance fails the shift audit");
    }
  }
}

}  // namespace

ReducedLagrangianPlus::ReducedLagrangianPlus(DiscreteLagrangian base, DiscreteConnection conn)
    : base_(std::move(base)), conn_(std::move(conn)) {
  if (!(base_.space == conn_.space())) {
    throw ContractViolation("ReducedLagrangianPlus: Lagrangian and connection spaces disagree");
  }
  audit_invariance(base_);
}

ReducedLagrangianMinus::ReducedLagrangianMinus(DiscreteLagrangian base, DiscreteConnection conn)
    : base_(std::move(base)), conn_(std::move(conn)) {
  if (!(base_.space == conn_.space())) {
    throw ContractViolation("ReducedLagrangianMinus: Lagrangian and connection spaces disagree");
  }
  audit_invariance(base_);
}

double reduced_eval_plus(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& x1,
                         const Vector& g1) {
  const auto& c = rl.connection();
  PointQ q0{x0, Vector::Zero(rl.space().dim_g)};
  PointQ q1{x1, g1 + c.h_d0(x0, x1)};
  return rl.base().eval(q0, q1);
}

double reduced_eval_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& dx,
                              const Vector& g1) {
  const auto& c = rl.connection();
  PointQ q0{x0, Vector::Zero(rl.space().dim_g)};
  PointQ dq{dx, g1 + c.h_dSigma(dx)};
  return eval_increment(rl.base(), q0, dq);
}

ReducedGradientPlus reduced_grad_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0,
                                           const Vector& dx, const Vector& g1) {
  const auto& c = rl.connection();
  PointQ q0{x0, Vector::Zero(rl.space().dim_g)};
  PointQ dq{dx, g1 + c.h_dSigma(dx)};
  IncrementGradient g = gradient_increment(rl.base(), q0, dq);
  ReducedGradientPlus out;
  out.dg1 = g.ddq.r;
  out.dx1 = g.ddq.w + c.h_dSigma_adj(g.ddq.r);
  out.dx0 = g.dq0.w - g.ddq.w - c.h_dSigma_adj(g.ddq.r);
  return out;
}

ReducedGradientPlus reduced_grad_plus(const ReducedLagrangianPlus& rl, const Vector& x0,
                                      const Vector& x1, const Vector& g1) {
  return reduced_grad_plus_incr(rl, x0, x1 - x0, g1);
}

std::pair<CovectorQ, CovectorQ> unreduced_partials_from_reduced(const ReducedLagrangianPlus& rl,
                                                                const Vector& x0, const Vector& x1,
                                                                const Vector& g1) {
  const auto& c = rl.connection();
  ReducedGradientPlus g = reduced_grad_plus(rl, x0, x1, g1);
  // <dl/dg1, h_d0(., 0)> = -H^T dl/dg1 ; <dl/dg1, h_d((0,.), 0)> = dl/dg1.
  CovectorQ d1{g.dx0 + c.h_dSigma_adj(g.dg1), -g.dg1};
  CovectorQ d2{g.dx1 - c.h_dSigma_adj(g.dg1), g.dg1};
  return {d1, d2};
}

double reduced_eval_minus(const ReducedLagrangianMinus& rl, const Vector& x0, const Vector& g0,
                          const Vector& x1) {
  const auto& c = rl.connection();
  PointQ q0{x0, g0 + c.h_d0(x1, x0)};
  PointQ q1{x1, Vector::Zero(rl.space().dim_g)};
  return rl.base().eval(q0, q1);
}

double reduced_eval_minus_incr(const ReducedLagrangianMinus& rl, const Vector& x0,
                               const Vector& g0, const Vector& dx) {
  const auto& c = rl.connection();
  Vector g0q = g0 - c.h_dSigma(dx);  // g0 + h_d0(x0 + dx, x0)
  PointQ q0{x0, g0q};
  PointQ dq{dx, -g0q};  // lands exactly on the g1 = 0 representative
  return eval_increment(rl.base(), q0, dq);
}

ReducedGradientMinus reduced_grad_minus_incr(const ReducedLagrangianMinus& rl, const Vector& x0,
                                             const Vector& g0, const Vector& dx) {
  const auto& c = rl.connection();
  Vector g0q = g0 - c.h_dSigma(dx);
  PointQ q0{x0, g0q};
  PointQ dq{dx, -g0q};
  IncrementGradient g = gradient_increment(rl.base(), q0, dq);
  // Independent variables (x0, g0, x1); q0g = g0 + H(x0 - x1), dq_g = -q0g.
  CovectorQ d1{g.dq0.w - g.ddq.w, g.dq0.r - g.ddq.r};  // (A - B) blocks
  ReducedGradientMinus out;
  out.dg0 = d1.r;
  out.dx0 = d1.w + c.h_dSigma_adj(d1.r);
  out.dx1 = g.ddq.w - c.h_dSigma_adj(d1.r);
  return out;
}

ReducedGradientMinus reduced_grad_minus(const ReducedLagrangianMinus& rl, const Vector& x0,
                                        const Vector& g0, const Vector& x1) {
  return reduced_grad_minus_incr(rl, x0, g0, x1 - x0);
}

std::pair<CovectorQ, CovectorQ> unreduced_partials_from_reduced_minus(
    const ReducedLagrangianMinus& rl, const Vector& x0, const Vector& g0, const Vector& x1) {
  const auto& c = rl.connection();
  ReducedGradientMinus g = reduced_grad_minus(rl, x0, g0, x1);
  // <dl/dg0, h_d0(0, .)> = H^T dl/dg0 ; <dl/dg0, h_d0(., 0)> = -H^T dl/dg0.
  CovectorQ d1{g.dx0 - c.h_dSigma_adj(g.dg0), g.dg0};
  CovectorQ d2{g.dx1 + c.h_dSigma_adj(g.dg0), -g.dg0};
  return {d1, d2};
}

CotangentQQstar dirac_diff_plus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q1) {
  auto [d1, d2] = gradient(L, q0, q1);
  return {q0, d2, -d1, q1};
}

CotangentQstarQ dirac_diff_minus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q1) {
  auto [d1, d2] = gradient(L, q0, q1);
  return {-d1, q1, -q0, -d2};
}

namespace {

ReducedCovectorPlus assemble_reduced_diff_plus(const DiscreteConnection& c,
                                               const ReducedGradientPlus& g, const Vector& x0,
                                               const Vector& x1, const Vector& g1) {
  // Chain-rule lemma, then the local formula of the reduced differential.
  CovectorQ d1{g.dx0 + c.h_dSigma_adj(g.dg1), -g.dg1};
  CovectorQ d2{g.dx1 - c.h_dSigma_adj(g.dg1), g.dg1};
  ReducedCovectorPlus out;
  out.x0 = x0;
  out.w1 = d2.w + c.h_dSigma_adj(d2.r);
  out.mu1 = d2.r;
  out.p = -d1;
  out.x1 = x1;
  out.xi = g1 + c.h_dQ(PointQ{x0, Vector::Zero(c.space().dim_g)});
  return out;
}

ReducedCovectorMinus assemble_reduced_diff_minus(const DiscreteConnection& c,
                                                 const ReducedGradientMinus& g, const Vector& x0,
                                                 const Vector& g0, const Vector& x1) {
  CovectorQ d1{g.dx0 - c.h_dSigma_adj(g.dg0), g.dg0};
  CovectorQ d2{g.dx1 + c.h_dSigma_adj(g.dg0), -g.dg0};
  ReducedCovectorMinus out;
  out.w0 = -d1.w - c.h_dSigma_adj(d1.r);
  out.mu0 = -d1.r;
  out.x1 = x1;
  out.v = -x0;
  out.xi = -g0 - c.h_dQ(PointQ{x1, Vector::Zero(c.space().dim_g)});
  out.p = -d2;
  return out;
}

}  // namespace

ReducedCovectorPlus reduced_dirac_diff_plus(const ReducedLagrangianPlus& rl, const Vector& x0,
                                            const Vector& x1, const Vector& g1) {
  return assemble_reduced_diff_plus(rl.connection(), reduced_grad_plus(rl, x0, x1, g1), x0, x1,
                                    g1);
}

ReducedCovectorPlus reduced_dirac_diff_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0,
                                                 const Vector& dx, const Vector& g1) {
  Vector x1 = x0 + dx;
  return assemble_reduced_diff_plus(rl.connection(), reduced_grad_plus_incr(rl, x0, dx, g1), x0,
                                    x1, g1);
}

ReducedCovectorMinus reduced_dirac_diff_minus(const ReducedLagrangianMinus& rl, const Vector& x0,
                                              const Vector& g0, const Vector& x1) {
  return assemble_reduced_diff_minus(rl.connection(), reduced_grad_minus(rl, x0, g0, x1), x0, g0,
                                     x1);
}

ReducedCovectorMinus reduced_dirac_diff_minus_incr(const ReducedLagrangianMinus& rl,
                                                   const Vector& x0, const Vector& g0,
                                                   const Vector& dx) {
  Vector x1 = x0 + dx;
  return assemble_reduced_diff_minus(rl.connection(), reduced_grad_minus_incr(rl, x0, g0, dx), x0,
                                     g0, x1);
}

double generalized_energy_plus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q0p,
                               const PointQ& q1, const CovectorQ& p1) {
  return L.eval(q0, q0p) + pair(p1, q1 - q0p);
}

double reduced_energy_plus(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& x0p,
                           const Vector& g0p, const PointQ& q1, const Vector& w1,
                           const Vector& mu1) {
  const auto& c = rl.connection();
  const double l = reduced_eval_plus(rl, x0, x0p, g0p);
  PointQ q0rep{x0, Vector::Zero(rl.space().dim_g)};
  const Vector hd = c.h_d(q0rep, x0p);
  return l + (w1 - c.h_dSigma_adj(mu1)).dot(q1.x - x0p) + mu1.dot(q1.g - g0p - hd);
}

double generalized_energy_minus(const DiscreteLagrangian& L, const PointQ& q1m, const PointQ& q1,
                                const CovectorQ& p0, const PointQ& q0) {
  return L.eval(q1m, q1) + pair(p0, q0 - q1m);
}

double reduced_energy_minus(const ReducedLagrangianMinus& rl, const Vector& x1m, const Vector& g1m,
                            const Vector& x1, const Vector& w0, const Vector& mu0,
                            const PointQ& q0) {
  const auto& c = rl.connection();
  const double l = reduced_eval_minus(rl, x1m, g1m, x1);
  PointQ q1rep{x1, Vector::Zero(rl.space().dim_g)};
  const Vector hd = c.h_d(q1rep, x1m);
  return l + (w0 - c.h_dSigma_adj(mu0)).dot(q0.x - x1m) + mu0.dot(q0.g - g1m - hd);
}

double action_plus(const DiscreteLagrangian& L, const PontryaginTrajectoryPlus& tr) {
  const std::size_t N = tr.qplus.size();
  if (tr.q.size() != N + 1 || tr.p.size() != N) {
    throw ContractViolation("action_plus: inconsistent trajectory lengths");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    s += generalized_energy_plus(L, tr.q[k], tr.qplus[k], tr.q[k + 1], tr.p[k]);
  }
  return s;
}

double reduced_action_plus(const ReducedLagrangianPlus& rl,
                           const ReducedPontryaginTrajectoryPlus& tr) {
  const std::size_t N = tr.xplus.size();
  if (tr.x.size() != N + 1 || tr.gplus.size() != N || tr.q1rel.size() != N ||
      tr.w.size() != N || tr.mu.size() != N) {
    throw ContractViolation("reduced_action_plus: inconsistent trajectory lengths");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    s += reduced_energy_plus(rl, tr.x[k], tr.xplus[k], tr.gplus[k], tr.q1rel[k], tr.w[k],
                             tr.mu[k]);
  }
  return s;
}

}  // namespace diracmech
