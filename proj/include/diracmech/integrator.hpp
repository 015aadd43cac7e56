#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diracmech/lagrangian.hpp"

namespace diracmech {

struct NewtonConfig {
  double tol = 1e-12;   // max-norm residual stop
  int max_iter = 50;
  double fd_jacobian_step = std::cbrt(2.220446049250313e-16);

  void validate() const;
};

/// Damped-free Newton with forward-difference Jacobian (or a supplied analytic
/// one). Keeps the best iterate seen; succeeds as soon as the max-norm
/// residual is <= tol. Throws SingularJacobianError when the LU reciprocal
/// condition number falls below 1e3 * machine epsilon, NoConvergenceError
/// after max_iter.
Vector newton_solve(const std::function<Vector(const Vector&)>& residual, const Vector& u0,
                    const NewtonConfig& cfg,
                    const std::function<Matrix(const Vector&)>& jacobian = nullptr);

// ---------------------------------------------------------------------------
// Unreduced (+-)-discrete Lagrange-Dirac steppers.
// ---------------------------------------------------------------------------

struct LdStepResult {
  PointQ q1;
  CovectorQ p1;
  PointQ dq;  // accepted increment, the preferred guess for the next step
  int newton_iters = 0;
};

/// Solve p_k = -D1 L_d(q_k, q_{k+1}) for q_{k+1}, then p_{k+1} = D2 L_d.
/// guess is the increment dq seed (previous step's increment when available).
LdStepResult step_ld_plus(const DiscreteLagrangian& L, const PointQ& qk, const CovectorQ& pk,
                          const NewtonConfig& cfg, const PointQ* guess = nullptr);

/// Mirrored: q_{k+1}^- = q_k; same implicit equation, packaged per the (-)
/// equations. Orbits coincide with the (+) stepper in the unconstrained case.
LdStepResult step_ld_minus(const DiscreteLagrangian& L, const PointQ& qk, const CovectorQ& pk,
                           const NewtonConfig& cfg, const PointQ* guess = nullptr);

// ---------------------------------------------------------------------------
// Reduced (+-)-discrete Lagrange-Poincare-Dirac steppers.
// ---------------------------------------------------------------------------

struct LpdStepResult {
  Vector x1;
  Vector g_inc;  // group increment, h_d corrections included
  Vector w1;
  Vector mu1;
  // accepted implicit unknowns, kept for audits on the same float path
  Vector dx;     // x_k^+ - x_k  (minus: x_{k+1} - x_k)
  Vector gplus;  // g_k^+        (minus: g_{k+1}^-)
  int newton_iters = 0;
  double residual = 0.0;
};

/// One (+)-step: solve Eqs.(3)-(4) for (x_k^+, g_k^+), then Eqs.(1),(2),(5),(6).
LpdStepResult step_lpd_plus(const ReducedLagrangianPlus& rl, const Vector& xk, const Vector& wk,
                            const Vector& muk, const NewtonConfig& cfg,
                            const Vector* dx_guess = nullptr, const Vector* g_guess = nullptr);

/// One (-)-step: solve Eqs.(1-)-(2-) for (x_{k+1}, g_{k+1}^-) with
/// x_{k+1}^- = x_k, then the explicit lines.
LpdStepResult step_lpd_minus(const ReducedLagrangianMinus& rl, const Vector& xk, const Vector& wk,
                             const Vector& muk, const NewtonConfig& cfg,
                             const Vector* dx_guess = nullptr, const Vector* g_guess = nullptr);

/// g_abs_{k+1} = g_abs_k + g_inc.
Vector reconstruct(const Vector& g_abs_k, const Vector& g_inc);

// ---------------------------------------------------------------------------
// Trajectory driver.
// ---------------------------------------------------------------------------

enum class Variant { plus, minus };

struct StepDiagnostics {
  double energy = 0.0;           // (E_d)_k = L_d(q_k, q_k^+)
  double structure_residual = 0.0;
  int newton_iters = 0;
};

struct ReducedTrajectory {
  double h = 0.0;
  std::vector<double> times;              // N+1
  std::vector<ReducedState> states;       // N+1
  std::vector<Vector> group_abs;          // N+1
  std::vector<StepDiagnostics> diagnostics;  // N
  // accepted per-step data for audits that must reuse the solver's floats
  std::vector<Vector> dx;      // N
  std::vector<Vector> gplus;   // N
  std::vector<Vector> g_inc;   // N

  std::size_t steps() const { return diagnostics.size(); }
};

struct StepFailure {
  std::size_t step = 0;
  std::string message;
};

struct RunResult {
  ReducedTrajectory trajectory;
  std::optional<StepFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Iterate the reduced stepper N times from (state0, g_abs0), recording
/// per-step diagnostics. The first failing step aborts and returns the
/// partial trajectory with the error detail.
RunResult run_plus(const ReducedLagrangianPlus& rl, const ReducedState& state0,
                   const Vector& g_abs0, std::size_t N, double h, const NewtonConfig& cfg);

RunResult run_minus(const ReducedLagrangianMinus& rl, const ReducedState& state0,
                    const Vector& g_abs0, std::size_t N, double h, const NewtonConfig& cfg);

/// Stationarity defect of the reduced (+)-discrete Lagrange-Pontryagin action
/// at the trajectory: max over interior variations (endpoints fixed) of
/// 4th-order central finite-difference directional derivatives.
double variational_residual(const ReducedLagrangianPlus& rl, const ReducedTrajectory& tr);

/// The trajectory in Pontryagin-bundle form (for action-equality checks).
ReducedPontryaginTrajectoryPlus pontryagin_view(const ReducedTrajectory& tr);

}  // namespace diracmech
