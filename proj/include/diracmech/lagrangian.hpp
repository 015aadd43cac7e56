#pragma once

#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "diracmech/connection.hpp"
#include "diracmech/spaces.hpp"
#include "diracmech/tulczyjew.hpp"

namespace diracmech {

/// Gradient of L_d with respect to a step written as (q0, dq), q1 = q0 + dq:
/// dq0 = d/dq0 holding dq fixed, ddq = d/d(dq). The point-interface partials
/// are D1 = dq0 - ddq and D2 = ddq.
struct IncrementGradient {
  CovectorQ dq0;
  CovectorQ ddq;
};

/// Discrete Lagrangian L_d(q0, q1) with optional analytic gradient and
/// optional increment-aware callables. The increment path evaluates the same
/// function through (q0, dq) with q1 = q0 + dq taken exactly as given, which
/// is what keeps implicit solves well below the ulp(q)-quantization floor on
/// large-scale systems; when absent it falls back to forming q1.
struct DiscreteLagrangian {
  TrivializedSpace space;
  std::function<double(const PointQ&, const PointQ&)> eval;
  std::function<std::pair<CovectorQ, CovectorQ>(const PointQ&, const PointQ&)> grad;  // optional
  std::function<double(const PointQ&, const PointQ&)> eval_incr;                      // optional
  std::function<IncrementGradient(const PointQ&, const PointQ&)> grad_incr;           // optional
  bool declared_g_invariant = false;
};

/// Central finite differences of eval, per-coordinate step
/// h_i = cbrt(machine epsilon) * max(1, |coordinate|).
std::pair<CovectorQ, CovectorQ> grad_fd(const DiscreteLagrangian& L, const PointQ& q0,
                                        const PointQ& q1);

/// Analytic gradient when present, grad_fd otherwise.
std::pair<CovectorQ, CovectorQ> gradient(const DiscreteLagrangian& L, const PointQ& q0,
                                         const PointQ& q1);

double eval_increment(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& dq);
IncrementGradient gradient_increment(const DiscreteLagrangian& L, const PointQ& q0,
                                     const PointQ& dq);

// ---------------------------------------------------------------------------
// Reduced Lagrangians. Constructors audit the declared G-invariance on 16
// fixed-seed random shifts (relative tolerance 1e-12): reducing a
// non-invariant Lagrangian silently produces wrong dynamics.
// ---------------------------------------------------------------------------

struct ReducedGradientPlus {
  Vector dx0;
  Vector dx1;
  Vector dg1;
};

struct ReducedGradientMinus {
  Vector dx0;
  Vector dg0;
  Vector dx1;
};

class ReducedLagrangianPlus {
 public:
  ReducedLagrangianPlus(DiscreteLagrangian base, DiscreteConnection conn);

  const DiscreteLagrangian& base() const { return base_; }
  const DiscreteConnection& connection() const { return conn_; }
  const TrivializedSpace& space() const { return base_.space; }

 private:
  DiscreteLagrangian base_;
  DiscreteConnection conn_;
};

class ReducedLagrangianMinus {
 public:
  ReducedLagrangianMinus(DiscreteLagrangian base, DiscreteConnection conn);

  const DiscreteLagrangian& base() const { return base_; }
  const DiscreteConnection& connection() const { return conn_; }
  const TrivializedSpace& space() const { return base_.space; }

 private:
  DiscreteLagrangian base_;
  DiscreteConnection conn_;
};

/// l_{d+}(x0, x1, g1) = L_d((x0, 0), (x1, g1 + h_d^0(x0, x1))).
double reduced_eval_plus(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& x1,
                         const Vector& g1);
/// Same value with x1 = x0 + dx taken exactly as given.
double reduced_eval_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& dx,
                              const Vector& g1);

ReducedGradientPlus reduced_grad_plus(const ReducedLagrangianPlus& rl, const Vector& x0,
                                      const Vector& x1, const Vector& g1);
ReducedGradientPlus reduced_grad_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0,
                                           const Vector& dx, const Vector& g1);

/// The chain-rule lemma identities: (D1 L_d, D2 L_d) reconstructed from the
/// reduced partials, at the matching base point (x0, 0, x1, g1 + h_d^0).
std::pair<CovectorQ, CovectorQ> unreduced_partials_from_reduced(const ReducedLagrangianPlus& rl,
                                                                const Vector& x0, const Vector& x1,
                                                                const Vector& g1);

/// l_{d-}(x0, g0, x1) = L_d((x0, g0 + h_d^0(x1, x0)), (x1, 0)).
double reduced_eval_minus(const ReducedLagrangianMinus& rl, const Vector& x0, const Vector& g0,
                          const Vector& x1);
double reduced_eval_minus_incr(const ReducedLagrangianMinus& rl, const Vector& x0, const Vector& g0,
                               const Vector& dx);

ReducedGradientMinus reduced_grad_minus(const ReducedLagrangianMinus& rl, const Vector& x0,
                                        const Vector& g0, const Vector& x1);
ReducedGradientMinus reduced_grad_minus_incr(const ReducedLagrangianMinus& rl, const Vector& x0,
                                             const Vector& g0, const Vector& dx);

std::pair<CovectorQ, CovectorQ> unreduced_partials_from_reduced_minus(
    const ReducedLagrangianMinus& rl, const Vector& x0, const Vector& g0, const Vector& x1);

// ---------------------------------------------------------------------------
// Discrete Dirac differentials.
// ---------------------------------------------------------------------------

/// D^+ L_d(q0, q1) = (q0, D2 L_d, -D1 L_d, q1).
CotangentQQstar dirac_diff_plus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q1);

/// D^- L_d(q0, q1) = (-D1 L_d, q1, -q0, -D2 L_d).
CotangentQstarQ dirac_diff_minus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q1);

/// Reduced (+)-discrete Dirac differential, local formula:
/// (x0, x1, g1) -> (x0, dL/dx1 + H^T dL/dg1, dL/dg1, -dL/dq0, x1, g1 + h_dQ((x0,0))),
/// partials of L_d from the chain-rule lemma at (x0, 0, x1, g1 + h_d^0).
ReducedCovectorPlus reduced_dirac_diff_plus(const ReducedLagrangianPlus& rl, const Vector& x0,
                                            const Vector& x1, const Vector& g1);
ReducedCovectorPlus reduced_dirac_diff_plus_incr(const ReducedLagrangianPlus& rl, const Vector& x0,
                                                 const Vector& dx, const Vector& g1);

/// Reduced (-)-discrete Dirac differential, local formula:
/// (x0, g0, x1) -> (-dL/dx0 - H^T dL/dg0, -dL/dg0, x1, -x0, -g0 - h_dQ((x1,0)), -dL/dq1).
ReducedCovectorMinus reduced_dirac_diff_minus(const ReducedLagrangianMinus& rl, const Vector& x0,
                                              const Vector& g0, const Vector& x1);
ReducedCovectorMinus reduced_dirac_diff_minus_incr(const ReducedLagrangianMinus& rl,
                                                   const Vector& x0, const Vector& g0,
                                                   const Vector& dx);

// ---------------------------------------------------------------------------
// Generalized energies and discrete Lagrange-Pontryagin actions.
// ---------------------------------------------------------------------------

/// E_{d+}(q0, q0p, q1, p1) = L_d(q0, q0p) + <p1, q1 - q0p>.
double generalized_energy_plus(const DiscreteLagrangian& L, const PointQ& q0, const PointQ& q0p,
                               const PointQ& q1, const CovectorQ& p1);

/// e_{d+}(x0, x0p, g0p, q1, w1, mu1) = l_{d+}(x0, x0p, g0p)
///   + <w1 - H^T mu1, x1 - x0p> + <mu1, g1 - g0p - h_d((x0,0), x0p)>.
double reduced_energy_plus(const ReducedLagrangianPlus& rl, const Vector& x0, const Vector& x0p,
                           const Vector& g0p, const PointQ& q1, const Vector& w1,
                           const Vector& mu1);

/// E_{d-}(q1m, q1, p0, q0) = L_d(q1m, q1) + <p0, q0 - q1m>.
double generalized_energy_minus(const DiscreteLagrangian& L, const PointQ& q1m, const PointQ& q1,
                                const CovectorQ& p0, const PointQ& q0);

/// e_{d-}(x1m, g1m, x1, w0, mu0, q0) = l_{d-}(x1m, g1m, x1)
///   + <w0 - H^T mu0, x0 - x1m> + <mu0, g0 - g1m - h_d((x1,0), x1m)>.
double reduced_energy_minus(const ReducedLagrangianMinus& rl, const Vector& x1m, const Vector& g1m,
                            const Vector& x1, const Vector& w0, const Vector& mu0,
                            const PointQ& q0);

/// Trajectory on the (+)-discrete Pontryagin bundle: q has N+1 entries,
/// qplus and p have N (p[k] is p_{k+1}).
struct PontryaginTrajectoryPlus {
  std::vector<PointQ> q;
  std::vector<PointQ> qplus;
  std::vector<CovectorQ> p;
};

/// S+ = sum_k L_d(q_k, q_k^+) + <p_{k+1}, q_{k+1} - q_k^+>.
double action_plus(const DiscreteLagrangian& L, const PontryaginTrajectoryPlus& tr);

/// Reduced trajectory in canonical-section coordinates: x has N+1 entries;
/// xplus, gplus, q1rel (x_{k+1} plus the group increment), w, mu have N
/// (w[k] is w_{k+1}).
struct ReducedPontryaginTrajectoryPlus {
  std::vector<Vector> x;
  std::vector<Vector> xplus;
  std::vector<Vector> gplus;
  std::vector<PointQ> q1rel;
  std::vector<Vector> w;
  std::vector<Vector> mu;
};

/// Sum of reduced_energy_plus terms.
double reduced_action_plus(const ReducedLagrangianPlus& rl,
                           const ReducedPontryaginTrajectoryPlus& tr);

}  // namespace diracmech
