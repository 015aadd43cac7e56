#include "diracmech/tulczyjew.hpp"

#include <algorithm>

namespace diracmech {

namespace {

double slot_norm(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ContractViolation("structure residual: slot dimensions disagree");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace

TrivializedVelocityPoint lambda_d(const DiscreteConnection& c, const PointQ& q0,
                                  const PointQ& q1) {
  return {q0, q1.x, q1.g - c.h_d(q0, q1.x)};
}

std::pair<PointQ, PointQ> lambda_d_inv(const DiscreteConnection& c,
                                       const TrivializedVelocityPoint& t) {
  return {t.q0, PointQ{t.x1, t.g1 + c.h_d(t.q0, t.x1)}};
}

std::pair<CovectorQ, CovectorQ> lambda_d_adj(const DiscreteConnection& c, const CovectorQ& p0,
                                             const Vector& w1, const Vector& r1) {
  // <r1, h_d(., 0)> is the Q*-covector (-H^T r1, r1).
  CovectorQ first{p0.w + c.h_dSigma_adj(r1), p0.r - r1};
  CovectorQ second{w1 - c.h_dSigma_adj(r1), r1};
  return {first, second};
}

LambdaAdjImage lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p0,
                                const CovectorQ& p1) {
  return {CovectorQ{p0.w - c.h_dSigma_adj(p1.r), p0.r + p1.r}, p1.w + c.h_dSigma_adj(p1.r), p1.r};
}

TrivializedMomentumPoint hat_lambda_d(const DiscreteConnection& c, const PointQ& q0,
                                      const CovectorQ& p0) {
  check_covector(c.space(), p0, "hat_lambda_d: p0");
  return {q0, p0.w + c.h_dSigma_adj(p0.r), momentum_map(q0, p0)};
}

std::pair<PointQ, CovectorQ> hat_lambda_d_inv(const DiscreteConnection& c,
                                              const TrivializedMomentumPoint& m) {
  return {m.q, CovectorQ{m.w - c.h_dSigma_adj(m.mu), m.mu}};
}

std::pair<CovectorQ, PointQ> hat_lambda_d_adj(const DiscreteConnection& c, const CovectorQ& p1,
                                              const Vector& x1, const Vector& xi1) {
  return {p1, PointQ{x1, c.h_dSigma(x1) + xi1}};
}

HatLambdaAdjImage hat_lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p1,
                                       const PointQ& q1) {
  return {p1, q1.x, q1.g - c.h_dSigma(q1.x)};
}

TrivializedVelocityPointMinus tilde_lambda_d(const DiscreteConnection& c, const PointQ& q0,
                                             const PointQ& q1) {
  return {q0.x, c.omega_d(q1, q0), q1};
}

std::pair<PointQ, PointQ> tilde_lambda_d_inv(const DiscreteConnection& c,
                                             const TrivializedVelocityPointMinus& t) {
  return {PointQ{t.x0, t.g0 + c.h_d(t.q1, t.x0)}, t.q1};
}

std::pair<CovectorQ, CovectorQ> tilde_lambda_d_adj(const DiscreteConnection& c, const Vector& w0,
                                                   const Vector& r0, const CovectorQ& p1) {
  CovectorQ first{w0 - c.h_dSigma_adj(r0), r0};
  CovectorQ second{p1.w + c.h_dSigma_adj(r0), p1.r - r0};
  return {first, second};
}

TildeLambdaAdjImage tilde_lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p0,
                                           const CovectorQ& p1) {
  return {p0.w + c.h_dSigma_adj(p0.r), p0.r,
          CovectorQ{p1.w - c.h_dSigma_adj(p0.r), p1.r + p0.r}};
}

TrivializedMomentumPointMinus check_lambda_d(const DiscreteConnection& c, const CovectorQ& p0,
                                             const PointQ& q0) {
  check_covector(c.space(), p0, "check_lambda_d: p0");
  return {p0.w + c.h_dSigma_adj(p0.r), momentum_map(q0, p0), q0};
}

std::pair<CovectorQ, PointQ> check_lambda_d_inv(const DiscreteConnection& c,
                                                const TrivializedMomentumPointMinus& m) {
  return {CovectorQ{m.w - c.h_dSigma_adj(m.mu), m.mu}, m.q};
}

std::pair<PointQ, CovectorQ> check_lambda_d_adj(const DiscreteConnection& c, const Vector& x0,
                                                const Vector& xi0, const CovectorQ& p1) {
  return {PointQ{x0, c.h_dSigma(x0) + xi0}, p1};
}

CheckLambdaAdjImage check_lambda_d_adj_inv(const DiscreteConnection& c, const PointQ& q0,
                                           const CovectorQ& p1) {
  return {q0.x, q0.g - c.h_dSigma(q0.x), p1};
}

CotangentQQ kappa_d(const CotangentPair& z) { return {z.q0, z.q1, -z.p0, z.p1}; }

CotangentQQstar omega_flat_plus(const CotangentPair& z) { return {z.q0, z.p1, z.p0, z.q1}; }

CotangentQstarQ omega_flat_minus(const CotangentPair& z) { return {z.p0, z.q1, -z.q0, -z.p1}; }

CotangentQQstar gamma_plus(const CotangentQQ& t) { return {t.q0, t.a1, -t.a0, t.q1}; }

CotangentQstarQ gamma_minus(const CotangentQQ& t) { return {-t.a0, t.q1, -t.q0, -t.a1}; }

ReducedCovectorPlus reduced_omega_flat_plus(const DiscreteConnection& c,
                                            const ReducedVectorFieldPlus& X) {
  CovectorQ p{X.s0.w - c.h_dSigma_adj(X.s0.mu), X.s0.mu};
  return {X.s0.x, X.w1, X.mu1, p, X.q1.x, X.q1.g - c.h_dSigma(X.q1.x)};
}

ReducedCovectorMinus reduced_omega_flat_minus(const DiscreteConnection& c,
                                              const ReducedVectorFieldMinus& X) {
  CovectorQ p{-X.w1 + c.h_dSigma_adj(X.mu1), -X.mu1};
  return {X.w0, X.mu0, X.x1, -X.q0.x, -X.q0.g + c.h_dSigma(X.q0.x), p};
}

double in_reduced_structure_plus(const DiscreteConnection& c, const ReducedVectorFieldPlus& X,
                                 const ReducedCovectorPlus& alpha) {
  double r = 0.0;
  r = std::max(r, slot_norm(alpha.x0, X.s0.x));
  r = std::max(r, slot_norm(alpha.w1, X.w1));
  r = std::max(r, slot_norm(alpha.mu1, X.mu1));
  r = std::max(r, slot_norm(alpha.p.w, X.s0.w - c.h_dSigma_adj(X.s0.mu)));
  r = std::max(r, slot_norm(alpha.p.r, X.s0.mu));
  r = std::max(r, slot_norm(alpha.x1, X.q1.x));
  r = std::max(r, slot_norm(alpha.xi, X.q1.g - c.h_dSigma(X.q1.x)));
  return r;
}

double in_reduced_structure_minus(const DiscreteConnection& c, const ReducedVectorFieldMinus& X,
                                  const ReducedCovectorMinus& alpha) {
  double r = 0.0;
  r = std::max(r, slot_norm(alpha.w0, X.w0));
  r = std::max(r, slot_norm(alpha.mu0, X.mu0));
  r = std::max(r, slot_norm(alpha.x1, X.x1));
  r = std::max(r, slot_norm(alpha.v, -X.q0.x));
  r = std::max(r, slot_norm(alpha.xi, -X.q0.g + c.h_dSigma(X.q0.x)));
  r = std::max(r, slot_norm(alpha.p.w, -X.w1 + c.h_dSigma_adj(X.mu1)));
  r = std::max(r, slot_norm(alpha.p.r, -X.mu1));
  return r;
}

}  // namespace diracmech
