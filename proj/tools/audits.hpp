#pragma once

// Invariant/property audits behind `check`: the spec-level identities
// re-verified against explicit map compositions on the configured system and
// on randomized linear systems. Deterministic given the config seed.

#include <random>

#include "diracmech/lagrangian.hpp"
#include "diracmech/tulczyjew.hpp"

namespace diracmech::cli {

struct AuditRng {
  std::mt19937 gen;
  explicit AuditRng(unsigned seed) : gen(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(-1.0, 1.0)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  Vector vec(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }
  Matrix mat(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform();
    return m;
  }
  PointQ point(const TrivializedSpace& s) { return {vec(s.dim_sigma), vec(s.dim_g)}; }
  CovectorQ covector(const TrivializedSpace& s) { return {vec(s.dim_sigma), vec(s.dim_g)}; }
};

inline double vnorm(const Vector& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }
inline double vdiff(const Vector& a, const Vector& b) { return vnorm(a - b); }
inline double pdiff(const PointQ& a, const PointQ& b) {
  return std::max(vdiff(a.x, b.x), vdiff(a.g, b.g));
}
inline double cdiff(const CovectorQ& a, const CovectorQ& b) {
  return std::max(vdiff(a.w, b.w), vdiff(a.r, b.r));
}

inline double audit_connection_axioms(const DiscreteConnection& c, AuditRng& rng, int trials) {
  double worst = 0.0;
  const auto& s = c.space();
  for (int t = 0; t < trials; ++t) {
    PointQ q0 = rng.point(s), q1 = rng.point(s);
    Vector g0 = rng.vec(s.dim_g), g1 = rng.vec(s.dim_g);
    worst = std::max(worst, vnorm(c.omega_d(q0, q0)));
    worst = std::max(worst, vdiff(c.omega_d(act(g0, q0), act(g1, q1)),
                                  Vector(g1 + c.omega_d(q0, q1) - g0)));
    worst = std::max(worst, vdiff(c.h_d(q0, q0.x), q0.g));
    worst = std::max(worst,
                     vdiff(c.h_d(q0, q1.x), Vector(c.h_dQ(q0) + c.h_dSigma(q1.x))));
    Vector mu = rng.vec(s.dim_g);
    worst = std::max(worst, std::abs(c.h_dSigma_adj(mu).dot(q1.x) - mu.dot(c.h_dSigma(q1.x))));
  }
  return worst;
}

inline double audit_roundtrips(const DiscreteConnection& c, AuditRng& rng, int trials) {
  double worst = 0.0;
  const auto& s = c.space();
  for (int t = 0; t < trials; ++t) {
    PointQ q0 = rng.point(s), q1 = rng.point(s);
    CovectorQ p0 = rng.covector(s), p1 = rng.covector(s);

    auto [a, b] = lambda_d_inv(c, lambda_d(c, q0, q1));
    worst = std::max({worst, pdiff(a, q0), pdiff(b, q1)});
    auto adj = lambda_d_adj_inv(c, p0, p1);
    auto [pa, pb] = lambda_d_adj(c, adj.p0, adj.w1, adj.r1);
    worst = std::max({worst, cdiff(pa, p0), cdiff(pb, p1)});
    auto [mq, mp] = hat_lambda_d_inv(c, hat_lambda_d(c, q0, p0));
    worst = std::max({worst, pdiff(mq, q0), cdiff(mp, p0)});
    auto hadj = hat_lambda_d_adj_inv(c, p1, q1);
    auto [hp, hq] = hat_lambda_d_adj(c, hadj.p1, hadj.x1, hadj.xi1);
    worst = std::max({worst, cdiff(hp, p1), pdiff(hq, q1)});
    auto [ta, tb] = tilde_lambda_d_inv(c, tilde_lambda_d(c, q0, q1));
    worst = std::max({worst, pdiff(ta, q0), pdiff(tb, q1)});
    auto [cp, cq] = check_lambda_d_inv(c, check_lambda_d(c, p0, q0));
    worst = std::max({worst, cdiff(cp, p0), pdiff(cq, q0)});

    // adjoint pairing of lambda_d
    auto im = lambda_d(c, q0, q1);
    Vector aw = rng.vec(s.dim_sigma), ar = rng.vec(s.dim_g);
    CovectorQ ap = rng.covector(s);
    auto [b0, b1] = lambda_d_adj(c, ap, aw, ar);
    worst = std::max(worst, std::abs((pair(b0, q0) + pair(b1, q1)) -
                                     (pair(ap, im.q0) + aw.dot(im.x1) + ar.dot(im.g1))));
  }
  return worst;
}

inline double audit_tulczyjew(const TrivializedSpace& s, AuditRng& rng, int trials) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    CotangentPair z{rng.point(s), rng.covector(s), rng.point(s), rng.covector(s)};
    auto w = omega_flat_plus(z);
    auto gk = gamma_plus(kappa_d(z));
    worst = std::max({worst, pdiff(gk.q0, w.q0), cdiff(gk.p1, w.p1), cdiff(gk.alpha, w.alpha),
                      pdiff(gk.beta, w.beta)});
    auto wm = omega_flat_minus(z);
    auto gm = gamma_minus(kappa_d(z));
    worst = std::max({worst, cdiff(gm.p0, wm.p0), pdiff(gm.q1, wm.q1), pdiff(gm.v, wm.v),
                      cdiff(gm.beta, wm.beta)});

    Vector g = rng.vec(s.dim_g);
    CotangentPair zs{act(g, z.q0), z.p0, act(g, z.q1), z.p1};
    auto ws = omega_flat_plus(zs);
    worst = std::max({worst, pdiff(ws.q0, act(g, w.q0)), pdiff(ws.beta, act(g, w.beta)),
                      cdiff(ws.p1, w.p1), cdiff(ws.alpha, w.alpha)});
  }
  return worst;
}

// An invariant quadratic with analytic gradient for the composition audits.
inline DiscreteLagrangian audit_oscillator(const TrivializedSpace& s, AuditRng& rng, double h) {
  const Eigen::Index nq = s.dim_q();
  Matrix a = rng.mat(nq, nq);
  Matrix K = a.transpose() * a + Matrix::Identity(nq, nq);
  Matrix b = rng.mat(s.dim_sigma, s.dim_sigma);
  Matrix P = 0.5 * (b + b.transpose());
  DiscreteLagrangian L;
  L.space = s;
  L.declared_g_invariant = true;
  L.eval = [s, K, P, h](const PointQ& q0, const PointQ& q1) {
    Vector dq(s.dim_q());
    dq << q1.x - q0.x, q1.g - q0.g;
    Vector xbar = 0.5 * (q0.x + q1.x);
    return dq.dot(K * dq) / (2.0 * h) - 0.5 * h * xbar.dot(P * xbar);
  };
  L.grad = [s, K, P, h](const PointQ& q0, const PointQ& q1) {
    Vector dq(s.dim_q());
    dq << q1.x - q0.x, q1.g - q0.g;
    Vector cv = K * dq / h;
    Vector xbar = 0.5 * (q0.x + q1.x);
    Vector pv = 0.5 * h * (P * xbar);
    return std::make_pair(CovectorQ{-cv.head(s.dim_sigma) - pv, -cv.tail(s.dim_g)},
                          CovectorQ{cv.head(s.dim_sigma) - pv, cv.tail(s.dim_g)});
  };
  return L;
}

inline double audit_reduced_maps(const DiscreteConnection& c, const DiscreteLagrangian& L,
                                 AuditRng& rng, int trials) {
  double worst = 0.0;
  const auto& s = c.space();
  const Vector zg = Vector::Zero(s.dim_g);
  for (int t = 0; t < trials; ++t) {
    // reduced omega-flat (+) against the five-map chain
    ReducedVectorFieldPlus X{{rng.vec(s.dim_sigma), rng.vec(s.dim_sigma), rng.vec(s.dim_g)},
                             rng.point(s),
                             rng.vec(s.dim_sigma),
                             rng.vec(s.dim_g)};
    auto direct = reduced_omega_flat_plus(c, X);
    auto [q0, p0] = hat_lambda_d_inv(c, {PointQ{X.s0.x, zg}, X.s0.w, X.s0.mu});
    auto [q1, p1] = hat_lambda_d_inv(c, {X.q1, X.w1, X.mu1});
    auto flat = omega_flat_plus({q0, p0, q1, p1});
    auto base = hat_lambda_d(c, flat.q0, flat.p1);
    auto fib = hat_lambda_d_adj_inv(c, flat.alpha, flat.beta);
    worst = std::max({worst, vdiff(direct.x0, base.q.x), vdiff(direct.w1, base.w),
                      vdiff(direct.mu1, base.mu), cdiff(direct.p, fib.p1),
                      vdiff(direct.x1, fib.x1), vdiff(direct.xi, Vector(fib.xi1 - base.q.g))});

    // reduced omega-flat (-) against its chain
    ReducedVectorFieldMinus Xm{rng.point(s),        rng.vec(s.dim_sigma), rng.vec(s.dim_g),
                               rng.vec(s.dim_sigma), rng.vec(s.dim_sigma), rng.vec(s.dim_g)};
    auto directm = reduced_omega_flat_minus(c, Xm);
    auto [mq0, mp0] = hat_lambda_d_inv(c, {Xm.q0, Xm.w0, Xm.mu0});
    auto [mq1, mp1] = hat_lambda_d_inv(c, {PointQ{Xm.x1, zg}, Xm.w1, Xm.mu1});
    auto flatm = omega_flat_minus({mq0, mp0, mq1, mp1});
    auto basem = check_lambda_d(c, flatm.p0, flatm.q1);
    auto fibm = check_lambda_d_adj_inv(c, flatm.v, flatm.beta);
    worst = std::max({worst, vdiff(directm.w0, basem.w), vdiff(directm.mu0, basem.mu),
                      vdiff(directm.x1, basem.q.x), vdiff(directm.v, fibm.x0),
                      vdiff(directm.xi, Vector(fibm.xi0 - basem.q.g)),
                      cdiff(directm.p, fibm.p1)});

    // reduced Dirac differentials against their chains
    ReducedLagrangianPlus rl(L, c);
    Vector x0 = rng.vec(s.dim_sigma), x1 = rng.vec(s.dim_sigma), g1 = rng.vec(s.dim_g);
    auto dd = reduced_dirac_diff_plus(rl, x0, x1, g1);
    auto [lq0, lq1] = lambda_d_inv(c, {PointQ{x0, zg}, x1, g1});
    auto [d1, d2] = gradient(L, lq0, lq1);
    auto gp = gamma_plus({lq0, lq1, d1, d2});
    auto dbase = hat_lambda_d(c, gp.q0, gp.p1);
    auto dfib = hat_lambda_d_adj_inv(c, gp.alpha, gp.beta);
    worst = std::max({worst, vdiff(dd.x0, dbase.q.x), vdiff(dd.w1, dbase.w),
                      vdiff(dd.mu1, dbase.mu), cdiff(dd.p, dfib.p1), vdiff(dd.x1, dfib.x1),
                      vdiff(dd.xi, Vector(dfib.xi1 - dbase.q.g))});

    ReducedLagrangianMinus rm(L, c);
    Vector g0 = rng.vec(s.dim_g);
    auto ddm = reduced_dirac_diff_minus(rm, x0, g0, x1);
    auto [tq0, tq1] = tilde_lambda_d_inv(c, {x0, g0, PointQ{x1, zg}});
    auto [e1, e2] = gradient(L, tq0, tq1);
    auto gmm = gamma_minus({tq0, tq1, e1, e2});
    auto mbase = check_lambda_d(c, gmm.p0, gmm.q1);
    auto mfib = check_lambda_d_adj_inv(c, gmm.v, gmm.beta);
    worst = std::max({worst, vdiff(ddm.w0, mbase.w), vdiff(ddm.mu0, mbase.mu),
                      vdiff(ddm.x1, mbase.q.x), vdiff(ddm.v, mfib.x0),
                      vdiff(ddm.xi, Vector(mfib.xi0 - mbase.q.g)), cdiff(ddm.p, mfib.p1)});
  }
  return worst;
}

}  // namespace diracmech::cli
