#pragma once

#include <utility>

#include "diracmech/connection.hpp"
#include "diracmech/spaces.hpp"

namespace diracmech {

// ---------------------------------------------------------------------------
// Product records for the (co)tangent spaces the discrete Tulczyjew maps
// connect. Everything is a concrete tuple of small vectors.
// ---------------------------------------------------------------------------

/// (z0, z1) in T*Q x T*Q.
struct CotangentPair {
  PointQ q0;
  CovectorQ p0;
  PointQ q1;
  CovectorQ p1;
};

/// Element of T*(Q x Q): base (q0, q1), fiber (a0, a1).
struct CotangentQQ {
  PointQ q0;
  PointQ q1;
  CovectorQ a0;
  CovectorQ a1;
};

/// Element of T*(Q x Q*): base (q0, p1), fiber (alpha, beta) in Q* x Q.
struct CotangentQQstar {
  PointQ q0;
  CovectorQ p1;
  CovectorQ alpha;
  PointQ beta;
};

/// Element of T*(Q* x Q): base (p0, q1), fiber (v, beta) in Q x Q*.
struct CotangentQstarQ {
  CovectorQ p0;
  PointQ q1;
  PointQ v;
  CovectorQ beta;
};

/// lambda_d image: Q x (Sigma x G).
struct TrivializedVelocityPoint {
  PointQ q0;
  Vector x1;
  Vector g1;
};

/// tilde_lambda_d image: (Sigma x G) x Q.
struct TrivializedVelocityPointMinus {
  Vector x0;
  Vector g0;
  PointQ q1;
};

/// check_lambda_d image: (Sigma* x g*) x Q.
struct TrivializedMomentumPointMinus {
  Vector w;
  Vector mu;
  PointQ q;
};

/// One factor of the reduced discrete states: (x, w, mu).
struct ReducedState {
  Vector x;
  Vector w;
  Vector mu;
};

/// Element of the reduced (+) vector-field space
/// Sigma x (Sigma* x g*) x Q x (Sigma* x g*): (x0, w0, mu0, q1, w1, mu1).
struct ReducedVectorFieldPlus {
  ReducedState s0;
  PointQ q1;  // group slot holds the per-step increment (canonical section g0 = 0)
  Vector w1;
  Vector mu1;
};

/// Element of the reduced (-) vector-field space
/// Q x (Sigma* x g*) x Sigma x (Sigma* x g*): (q0, w0, mu0, x1, w1, mu1).
struct ReducedVectorFieldMinus {
  PointQ q0;  // group slot relative to the g1 = 0 representative
  Vector w0;
  Vector mu0;
  Vector x1;
  Vector w1;
  Vector mu1;
};

/// Element of Sigma x (Sigma* x g*) x Q* x (Sigma x g): (x0, w1, mu1, p, x1, xi).
struct ReducedCovectorPlus {
  Vector x0;
  Vector w1;
  Vector mu1;
  CovectorQ p;
  Vector x1;
  Vector xi;
};

/// Element of (Sigma* x g*) x Sigma x (Sigma x g) x Q*: (w0, mu0, x1, v, xi, p).
struct ReducedCovectorMinus {
  Vector w0;
  Vector mu0;
  Vector x1;
  Vector v;   // Sigma slot; -x0 on structure elements
  Vector xi;  // g slot
  CovectorQ p;
};

// ---------------------------------------------------------------------------
// Trivializations of section 3 and their inverses/adjoints (local formulas).
// ---------------------------------------------------------------------------

TrivializedVelocityPoint lambda_d(const DiscreteConnection& c, const PointQ& q0, const PointQ& q1);
std::pair<PointQ, PointQ> lambda_d_inv(const DiscreteConnection& c,
                                       const TrivializedVelocityPoint& t);
/// (p0, w1, r1) -> (p0 - <r1, h_d(.,0)>, (w1 - <r1, h_d(0,.)>, r1)).
std::pair<CovectorQ, CovectorQ> lambda_d_adj(const DiscreteConnection& c, const CovectorQ& p0,
                                             const Vector& w1, const Vector& r1);
/// (p0, p1) -> (p0 + <r1, h_d(.,0)>, w1 + <r1, h_d(0,.)>, r1).
struct LambdaAdjImage {
  CovectorQ p0;
  Vector w1;
  Vector r1;
};
LambdaAdjImage lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p0,
                                const CovectorQ& p1);

TrivializedMomentumPoint hat_lambda_d(const DiscreteConnection& c, const PointQ& q0,
                                      const CovectorQ& p0);
std::pair<PointQ, CovectorQ> hat_lambda_d_inv(const DiscreteConnection& c,
                                              const TrivializedMomentumPoint& m);
/// (p1, x1, xi1) -> (p1, (x1, h_{d,Sigma}(x1) + xi1)).
std::pair<CovectorQ, PointQ> hat_lambda_d_adj(const DiscreteConnection& c, const CovectorQ& p1,
                                              const Vector& x1, const Vector& xi1);
/// (p1, q1) -> (p1, x1, g1 - h_{d,Sigma}(x1)).
struct HatLambdaAdjImage {
  CovectorQ p1;
  Vector x1;
  Vector xi1;
};
HatLambdaAdjImage hat_lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p1,
                                       const PointQ& q1);

// Factor-swapped versions for the (-) case; argument swaps around the core.
TrivializedVelocityPointMinus tilde_lambda_d(const DiscreteConnection& c, const PointQ& q0,
                                             const PointQ& q1);
std::pair<PointQ, PointQ> tilde_lambda_d_inv(const DiscreteConnection& c,
                                             const TrivializedVelocityPointMinus& t);
std::pair<CovectorQ, CovectorQ> tilde_lambda_d_adj(const DiscreteConnection& c, const Vector& w0,
                                                   const Vector& r0, const CovectorQ& p1);
struct TildeLambdaAdjImage {
  Vector w0;
  Vector r0;
  CovectorQ p1;
};
TildeLambdaAdjImage tilde_lambda_d_adj_inv(const DiscreteConnection& c, const CovectorQ& p0,
                                           const CovectorQ& p1);

TrivializedMomentumPointMinus check_lambda_d(const DiscreteConnection& c, const CovectorQ& p0,
                                             const PointQ& q0);
std::pair<CovectorQ, PointQ> check_lambda_d_inv(const DiscreteConnection& c,
                                                const TrivializedMomentumPointMinus& m);
/// (x0, xi0, p1) -> ((x0, h_{d,Sigma}(x0) + xi0), p1).
std::pair<PointQ, CovectorQ> check_lambda_d_adj(const DiscreteConnection& c, const Vector& x0,
                                                const Vector& xi0, const CovectorQ& p1);
struct CheckLambdaAdjImage {
  Vector x0;
  Vector xi0;
  CovectorQ p1;
};
CheckLambdaAdjImage check_lambda_d_adj_inv(const DiscreteConnection& c, const PointQ& q0,
                                           const CovectorQ& p1);

// ---------------------------------------------------------------------------
// Discrete Tulczyjew maps.
// ---------------------------------------------------------------------------

/// kappa_d: ((q0,p0),(q1,p1)) -> (q0, q1, -p0, p1).
CotangentQQ kappa_d(const CotangentPair& z);

/// Omega^flat_{d+}: ((q0,p0),(q1,p1)) -> (q0, p1, p0, q1).
CotangentQQstar omega_flat_plus(const CotangentPair& z);

/// Omega^flat_{d-}: ((q0,p0),(q1,p1)) -> (p0, q1, -q0, -p1).
CotangentQstarQ omega_flat_minus(const CotangentPair& z);

/// gamma^{d+} = Omega^flat_{d+} o kappa_d^{-1}: (q0,q1,a0,a1) -> (q0, a1, -a0, q1).
CotangentQQstar gamma_plus(const CotangentQQ& t);

/// gamma^{d-}: (q0,q1,a0,a1) -> (-a0, q1, -q0, -a1).
CotangentQstarQ gamma_minus(const CotangentQQ& t);

// ---------------------------------------------------------------------------
// Reduced (+-)-discrete Dirac structure maps and membership residuals.
// ---------------------------------------------------------------------------

/// [Omega^flat_{d+}] local formula:
/// (x0,w0,mu0,q1,w1,mu1) -> (x0, w1, mu1, (w0 - H^T mu0, mu0), x1, g1 - H x1).
ReducedCovectorPlus reduced_omega_flat_plus(const DiscreteConnection& c,
                                            const ReducedVectorFieldPlus& X);

/// [Omega^flat_{d-}] local formula:
/// (q0,w0,mu0,x1,w1,mu1) -> (w0, mu0, x1, -x0, -g0 + H x0, (-w1 + H^T mu1, -mu1)).
ReducedCovectorMinus reduced_omega_flat_minus(const DiscreteConnection& c,
                                              const ReducedVectorFieldMinus& X);

/// Max-norm residual of the defining relations of [D^{d+}]; 0 means membership.
double in_reduced_structure_plus(const DiscreteConnection& c, const ReducedVectorFieldPlus& X,
                                 const ReducedCovectorPlus& alpha);

/// Mirrored residual for [D^{d-}].
double in_reduced_structure_minus(const DiscreteConnection& c, const ReducedVectorFieldMinus& X,
                                  const ReducedCovectorMinus& alpha);

}  // namespace diracmech
