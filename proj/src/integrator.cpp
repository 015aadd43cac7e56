#include "diracmech/integrator.hpp"
#include <limits>

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace diracmech {

namespace {

constexpr double kEps = 2.220446049250313e-16;

struct NewtonResult {
  Vector u;
  int iterations = 0;
  double residual_norm = 0.0;
};

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& residual, const Vector& u,
                   const Vector& r0, double step_scale) {
  const Eigen::Index n = u.size();
  Matrix J(r0.size(), n);
  Vector up = u;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(u[j]));
    const double saved = up[j];
    up[j] = saved + h;
    J.col(j) = (residual(up) - r0) / h;
    up[j] = saved;
  }
  return J;
}

// Once the iteration reaches the rounding floor the residual values live on
// a lattice: moving unknown j by one ulp moves the residual by about one
// Jacobian-column quantum. Plain Newton rounds its correction to one lattice
// point; the attainable max-norm minimum usually sits at a neighboring
// rounding corner instead. Search those corners on the local affine model,
// then finish with a greedy single-ulp sweep.
void lattice_polish(const std::function<Vector(const Vector&)>& residual, double fd_step,
                    Vector& best_u, double& best_norm, double tol) {
  const Eigen::Index n = best_u.size();
  auto try_point = [&](const Vector& u_try) {
    const double n_try = residual(u_try).lpNorm<Eigen::Infinity>();
    if (n_try < best_norm) {
      best_norm = n_try;
      best_u = u_try;
      return true;
    }
    return false;
  };

  if (n >= 1 && n <= 8) {
    for (int round = 0; round < 6 && best_norm > tol; ++round) {
      Vector r0 = residual(best_u);
      Matrix J = fd_jacobian(residual, best_u, r0, fd_step);
      Eigen::PartialPivLU<Matrix> lu(J);
      if (!(lu.rcond() >= 1e3 * kEps)) break;
      const Vector du = lu.solve(r0);  // continuous correction to subtract
      Vector quantum(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(best_u[j]);
        quantum[j] = a > 0.0 ? std::nextafter(a, std::numeric_limits<double>::infinity()) - a
                             : kEps;
      }
      bool improved = false;
      const std::size_t corners = std::size_t(1) << n;
      for (std::size_t mask = 0; mask < corners; ++mask) {
        Vector u_try = best_u;
        for (Eigen::Index j = 0; j < n; ++j) {
          const double m = -du[j] / quantum[j];
          const double mj = (mask >> j) & 1 ? std::ceil(m) : std::floor(m);
          u_try[j] += mj * quantum[j];
        }
        improved = try_point(u_try) || improved;
      }
      if (!improved) break;
    }
  }

  for (int round = 0; round < 12 && best_norm > tol; ++round) {
    bool improved = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (double dir : {1.0, -1.0}) {
        Vector u_try = best_u;
        u_try[j] = std::nextafter(u_try[j], dir * std::numeric_limits<double>::infinity());
        improved = try_point(u_try) || improved;
      }
    }
    if (!improved) break;
  }
}

NewtonResult newton_core(const std::function<Vector(const Vector&)>& residual, const Vector& u0,
                         const NewtonConfig& cfg,
                         const std::function<Matrix(const Vector&)>& jacobian) {
  cfg.validate();
  Vector u = u0;
  Vector r = residual(u);
  if (r.size() != u.size()) {
    throw ContractViolation("newton_solve: residual size must match unknown size");
  }
  double rnorm = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
  Vector best_u = u;
  double best_norm = rnorm;
  int stalled = 0;
  int it = 0;

  for (; it < cfg.max_iter; ++it) {
    if (best_norm <= cfg.tol) return {best_u, it, best_norm};
    if (stalled >= 3) break;  // at the rounding floor; polish instead of wandering

    Matrix J = jacobian ? jacobian(u) : fd_jacobian(residual, u, r, cfg.fd_jacobian_step);
    Eigen::PartialPivLU<Matrix> lu(J);
    const double rcond = lu.rcond();
    if (!(rcond >= 1e3 * kEps)) {
      throw SingularJacobianError(
          "newton_solve: Jacobian numerically singular (rcond = " + std::to_string(rcond) + ")",
          rcond);
    }
    const Vector step = lu.solve(r);

    // Plain Newton with a short backtrack; the best iterate wins either way.
    double t = 1.0;
    Vector u_new = u - step;
    Vector r_new = residual(u_new);
    double n_new = r_new.lpNorm<Eigen::Infinity>();
    for (int bt = 0; bt < 4 && !(n_new < rnorm); ++bt) {
      t *= 0.5;
      u_new = u - t * step;
      r_new = residual(u_new);
      n_new = r_new.lpNorm<Eigen::Infinity>();
    }
    u = u_new;
    r = r_new;
    rnorm = n_new;
    if (rnorm < best_norm || !std::isfinite(best_norm)) {
      best_norm = rnorm;
      best_u = u;
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  if (best_norm > cfg.tol) {
    lattice_polish(residual, cfg.fd_jacobian_step, best_u, best_norm, cfg.tol);
  }
  if (best_norm <= cfg.tol) return {best_u, it, best_norm};
  char msg[160];
  std::snprintf(msg, sizeof(msg),
                "newton_solve: no convergence after %d iterations (best max-norm residual %.3e)",
                cfg.max_iter, best_norm);
  throw NoConvergenceError(msg, best_norm, cfg.max_iter);
}

}  // namespace

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw ContractViolation("NewtonConfig: tol must be positive");
  if (max_iter < 1) throw ContractViolation("NewtonConfig: max_iter must be >= 1");
  if (!(fd_jacobian_step > 0.0)) {
    throw ContractViolation("NewtonConfig: fd_jacobian_step must be positive");
  }
}

Vector newton_solve(const std::function<Vector(const Vector&)>& residual, const Vector& u0,
                    const NewtonConfig& cfg, const std::function<Matrix(const Vector&)>& jacobian) {
  return newton_core(residual, u0, cfg, jacobian).u;
}

namespace {

Vector pack(const PointQ& dq) {
  Vector u(dq.x.size() + dq.g.size());
  u << dq.x, dq.g;
  return u;
}

PointQ unpack(const TrivializedSpace& s, const Vector& u) {
  return {u.head(s.dim_sigma), u.tail(s.dim_g)};
}

LdStepResult step_ld_core(const DiscreteLagrangian& L, const PointQ& qk, const CovectorQ& pk,
                          const NewtonConfig& cfg, const PointQ* guess) {
  check_point(L.space, qk, "step_ld: q_k");
  check_covector(L.space, pk, "step_ld: p_k");
  auto residual = [&](const Vector& u) {
    PointQ dq = unpack(L.space, u);
    IncrementGradient g = gradient_increment(L, qk, dq);
    CovectorQ d1{g.dq0.w - g.ddq.w, g.dq0.r - g.ddq.r};
    Vector r(u.size());
    r << -d1.w - pk.w, -d1.r - pk.r;
    return r;
  };
  Vector u0 = guess ? pack(*guess) : Vector::Zero(L.space.dim_q());
  NewtonResult sol = newton_core(residual, u0, cfg, nullptr);
  PointQ dq = unpack(L.space, sol.u);
  IncrementGradient g = gradient_increment(L, qk, dq);
  return {qk + dq, g.ddq, dq, sol.iterations};
}

}  // namespace

LdStepResult step_ld_plus(const DiscreteLagrangian& L, const PointQ& qk, const CovectorQ& pk,
                          const NewtonConfig& cfg, const PointQ* guess) {
  // p_k = -D1 L_d(q_k, q_k^+), q_{k+1} = q_k^+, p_{k+1} = D2 L_d(q_k, q_k^+).
  return step_ld_core(L, qk, pk, cfg, guess);
}

LdStepResult step_ld_minus(const DiscreteLagrangian& L, const PointQ& qk, const CovectorQ& pk,
                           const NewtonConfig& cfg, const PointQ* guess) {
  // q_{k+1}^- = q_k, p_k = -D1 L_d(q_{k+1}^-, q_{k+1}), p_{k+1} = D2 L_d.
  // Identical propagation to the (+) case in the unconstrained setting.
  return step_ld_core(L, qk, pk, cfg, guess);
}

LpdStepResult step_lpd_plus(const ReducedLagrangianPlus& rl, const Vector& xk, const Vector& wk,
                            const Vector& muk, const NewtonConfig& cfg, const Vector* dx_guess,
                            const Vector* g_guess) {
  const auto& c = rl.connection();
  const TrivializedSpace& s = rl.space();
  check_vector(s.dim_sigma, xk, "step_lpd_plus: x_k");
  check_vector(s.dim_sigma, wk, "step_lpd_plus: w_k");
  check_vector(s.dim_g, muk, "step_lpd_plus: mu_k");

  auto residual = [&](const Vector& u) {
    const Vector dx = u.head(s.dim_sigma);
    const Vector gp = u.tail(s.dim_g);
    ReducedGradientPlus g = reduced_grad_plus_incr(rl, xk, dx, gp);
    Vector r(u.size());
    // Eq.(3): -dl/dx0 + <dl/dg1, h_d0(.,0)> = w_k - H^T mu_k.
    r.head(s.dim_sigma) =
        -g.dx0 - c.h_dSigma_adj(g.dg1) - (wk - c.h_dSigma_adj(muk));
    // Eq.(4): <dl/dg1, h_d((0,.),0)> = mu_k.
    r.tail(s.dim_g) = g.dg1 - muk;
    return r;
  };

  Vector u0 = Vector::Zero(s.dim_q());
  if (dx_guess) u0.head(s.dim_sigma) = *dx_guess;
  if (g_guess) u0.tail(s.dim_g) = *g_guess;
  NewtonResult sol = newton_core(residual, u0, cfg, nullptr);

  LpdStepResult out;
  out.dx = sol.u.head(s.dim_sigma);
  out.gplus = sol.u.tail(s.dim_g);
  out.newton_iters = sol.iterations;
  out.residual = sol.residual_norm;
  ReducedGradientPlus g = reduced_grad_plus_incr(rl, xk, out.dx, out.gplus);
  // Eq.(1), all terms kept: w_{k+1} = dl/dx1 - <dl/dg1, h_d0(0,.)> + H^T dl/dg1.
  out.w1 = g.dx1 - c.h_dSigma_adj(g.dg1) + c.h_dSigma_adj(g.dg1);
  // Eq.(2) with Eq.(4) substituted: mu_{k+1} = mu_k, exactly.
  out.mu1 = muk;
  // Eq.(5).
  out.x1 = xk + out.dx;
  // Eq.(6): g_{k+1} = g_k^+ + h_dQ((x_k, 0)) + h_dSigma(x_{k+1}).
  out.g_inc = out.gplus + c.h_dQ(PointQ{xk, Vector::Zero(s.dim_g)}) + c.h_dSigma(out.x1);
  return out;
}

LpdStepResult step_lpd_minus(const ReducedLagrangianMinus& rl, const Vector& xk, const Vector& wk,
                             const Vector& muk, const NewtonConfig& cfg, const Vector* dx_guess,
                             const Vector* g_guess) {
  const auto& c = rl.connection();
  const TrivializedSpace& s = rl.space();
  check_vector(s.dim_sigma, xk, "step_lpd_minus: x_k");
  check_vector(s.dim_sigma, wk, "step_lpd_minus: w_k");
  check_vector(s.dim_g, muk, "step_lpd_minus: mu_k");

  // Unknowns: x_{k+1} = x_k + dx and g_{k+1}^-; x_{k+1}^- = x_k by Eq.(5-).
  auto residual = [&](const Vector& u) {
    const Vector dx = u.head(s.dim_sigma);
    const Vector gm = u.tail(s.dim_g);
    ReducedGradientMinus g = reduced_grad_minus_incr(rl, xk, gm, dx);
    Vector r(u.size());
    // Eq.(1-): -dl/dx0 + <dl/dg0, h_d0(0,.)> - H^T dl/dg0 = w_k.
    r.head(s.dim_sigma) =
        -g.dx0 + c.h_dSigma_adj(g.dg0) - c.h_dSigma_adj(g.dg0) - wk;
    // Eq.(2-): -dl/dg0 = mu_k.
    r.tail(s.dim_g) = -g.dg0 - muk;
    return r;
  };

  Vector u0 = Vector::Zero(s.dim_q());
  if (dx_guess) u0.head(s.dim_sigma) = *dx_guess;
  if (g_guess) u0.tail(s.dim_g) = *g_guess;
  NewtonResult sol = newton_core(residual, u0, cfg, nullptr);

  LpdStepResult out;
  out.dx = sol.u.head(s.dim_sigma);
  out.gplus = sol.u.tail(s.dim_g);
  out.newton_iters = sol.iterations;
  out.residual = sol.residual_norm;
  ReducedGradientMinus g = reduced_grad_minus_incr(rl, xk, out.gplus, out.dx);
  out.x1 = xk + out.dx;
  // Eq.(4-) with Eq.(2-) substituted: mu_{k+1} = mu_k, exactly.
  out.mu1 = muk;
  // Eq.(3-): w_{k+1} = dl/dx1 - <dl/dg0, h_d0(.,0)> + H^T mu_{k+1}.
  out.w1 = g.dx1 + c.h_dSigma_adj(g.dg0) + c.h_dSigma_adj(out.mu1);
  // Eq.(6-): g_k = g_{k+1}^- + h_dQ((x_{k+1}, 0)) + h_dSigma(x_k) relative to
  // the g_{k+1} = 0 representative, so the absolute increment is its negative.
  out.g_inc =
      -(out.gplus + c.h_dQ(PointQ{out.x1, Vector::Zero(s.dim_g)}) + c.h_dSigma(xk));
  return out;
}

Vector reconstruct(const Vector& g_abs_k, const Vector& g_inc) {
  if (g_abs_k.size() != g_inc.size()) {
    throw ContractViolation("reconstruct: dimensions disagree");
  }
  return g_abs_k + g_inc;
}

namespace {

template <typename Stepper, typename StructResidual>
RunResult run_generic(const TrivializedSpace& s, const ReducedState& state0, const Vector& g_abs0,
                      std::size_t N, double h, Stepper&& do_step, StructResidual&& struct_res) {
  RunResult out;
  ReducedTrajectory& tr = out.trajectory;
  tr.h = h;
  tr.times.reserve(N + 1);
  tr.states.reserve(N + 1);
  tr.group_abs.reserve(N + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(state0);
  tr.group_abs.push_back(g_abs0);

  Vector dx_guess = Vector::Zero(s.dim_sigma);
  Vector g_guess = Vector::Zero(s.dim_g);
  bool have_history = false;

  for (std::size_t k = 0; k < N; ++k) {
    const ReducedState& cur = tr.states.back();
    LpdStepResult st;
    try {
      st = do_step(cur, have_history ? &dx_guess : nullptr, have_history ? &g_guess : nullptr);
    } catch (const std::exception& e) {
      out.failure = StepFailure{k, e.what()};
      return out;
    }
    StepDiagnostics diag;
    diag.newton_iters = st.newton_iters;
    diag.energy = 0.0;
    diag.structure_residual = 0.0;
    struct_res(cur, st, diag);

    tr.states.push_back(ReducedState{st.x1, st.w1, st.mu1});
    tr.group_abs.push_back(reconstruct(tr.group_abs.back(), st.g_inc));
    tr.times.push_back(double(k + 1) * h);
    tr.diagnostics.push_back(diag);
    tr.dx.push_back(st.dx);
    tr.gplus.push_back(st.gplus);
    tr.g_inc.push_back(st.g_inc);

    dx_guess = st.dx;
    g_guess = st.gplus;
    have_history = true;
  }
  return out;
}

}  // namespace

RunResult run_plus(const ReducedLagrangianPlus& rl, const ReducedState& state0,
                   const Vector& g_abs0, std::size_t N, double h, const NewtonConfig& cfg) {
  const auto& c = rl.connection();
  return run_generic(
      rl.space(), state0, g_abs0, N, h,
      [&](const ReducedState& cur, const Vector* dxg, const Vector* gg) {
        return step_lpd_plus(rl, cur.x, cur.w, cur.mu, cfg, dxg, gg);
      },
      [&](const ReducedState& cur, const LpdStepResult& st, StepDiagnostics& diag) {
        diag.energy = reduced_eval_plus_incr(rl, cur.x, st.dx, st.gplus);
        ReducedVectorFieldPlus X{cur, PointQ{st.x1, st.g_inc}, st.w1, st.mu1};
        ReducedCovectorPlus alpha = reduced_dirac_diff_plus_incr(rl, cur.x, st.dx, st.gplus);
        diag.structure_residual = in_reduced_structure_plus(c, X, alpha);
      });
}

RunResult run_minus(const ReducedLagrangianMinus& rl, const ReducedState& state0,
                    const Vector& g_abs0, std::size_t N, double h, const NewtonConfig& cfg) {
  const auto& c = rl.connection();
  return run_generic(
      rl.space(), state0, g_abs0, N, h,
      [&](const ReducedState& cur, const Vector* dxg, const Vector* gg) {
        return step_lpd_minus(rl, cur.x, cur.w, cur.mu, cfg, dxg, gg);
      },
      [&](const ReducedState& cur, const LpdStepResult& st, StepDiagnostics& diag) {
        diag.energy = reduced_eval_minus_incr(rl, cur.x, st.gplus, st.dx);
        // The (-) vector field carries q0 relative to the g_{k+1} = 0 section.
        ReducedVectorFieldMinus X{PointQ{cur.x, -st.g_inc}, cur.w, cur.mu, st.x1, st.w1, st.mu1};
        ReducedCovectorMinus alpha = reduced_dirac_diff_minus_incr(rl, cur.x, st.gplus, st.dx);
        diag.structure_residual = in_reduced_structure_minus(c, X, alpha);
      });
}

ReducedPontryaginTrajectoryPlus pontryagin_view(const ReducedTrajectory& tr) {
  ReducedPontryaginTrajectoryPlus out;
  const std::size_t N = tr.steps();
  out.x.reserve(N + 1);
  for (const auto& s : tr.states) out.x.push_back(s.x);
  for (std::size_t k = 0; k < N; ++k) {
    out.xplus.push_back(tr.states[k].x + tr.dx[k]);
    out.gplus.push_back(tr.gplus[k]);
    out.q1rel.push_back(PointQ{tr.states[k + 1].x, tr.g_inc[k]});
    out.w.push_back(tr.states[k + 1].w);
    out.mu.push_back(tr.states[k + 1].mu);
  }
  return out;
}

namespace {

// 4th-order central difference of f along one scalar slot; step scaled to the
// slot magnitude. 2nd-order stencils are not accurate enough at the SI scales
// of the pendulum benchmark.
template <typename F>
double directional_derivative(F&& f, double* slot, double base) {
  const double eta = 1e-4 * std::max(1.0, std::abs(base));
  *slot = base + eta;
  const double fp1 = f();
  *slot = base - eta;
  const double fm1 = f();
  *slot = base + 2.0 * eta;
  const double fp2 = f();
  *slot = base - 2.0 * eta;
  const double fm2 = f();
  *slot = base;
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * eta);
}

}  // namespace

double variational_residual(const ReducedLagrangianPlus& rl, const ReducedTrajectory& tr) {
  const std::size_t N = tr.steps();
  if (N == 0) return 0.0;
  const TrivializedSpace& s = rl.space();

  // Independent variables of the reduced Lagrange-Pontryagin action.
  std::vector<Vector> x;
  std::vector<Vector> g_abs = tr.group_abs;
  for (const auto& st : tr.states) x.push_back(st.x);
  std::vector<Vector> xplus, gplus, w, mu;
  for (std::size_t k = 0; k < N; ++k) {
    xplus.push_back(tr.states[k].x + tr.dx[k]);
    gplus.push_back(tr.gplus[k]);
    w.push_back(tr.states[k + 1].w);
    mu.push_back(tr.states[k + 1].mu);
  }

  auto term = [&](std::size_t k) {
    PointQ q1{x[k + 1], g_abs[k + 1] - g_abs[k]};
    return reduced_energy_plus(rl, x[k], xplus[k], gplus[k], q1, w[k], mu[k]);
  };

  double worst = 0.0;
  auto consider = [&](double* slot, const std::vector<std::size_t>& touched) {
    const double base = *slot;
    auto f = [&]() {
      double sum = 0.0;
      for (std::size_t k : touched) sum += term(k);
      return sum;
    };
    worst = std::max(worst, std::abs(directional_derivative(f, slot, base)));
  };

  for (std::size_t k = 1; k < N; ++k) {
    std::vector<std::size_t> touched{k - 1, k};
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) consider(&x[k][i], touched);
    for (Eigen::Index i = 0; i < s.dim_g; ++i) consider(&g_abs[k][i], touched);
  }
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<std::size_t> touched{k};
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) consider(&xplus[k][i], touched);
    for (Eigen::Index i = 0; i < s.dim_g; ++i) consider(&gplus[k][i], touched);
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) consider(&w[k][i], touched);
    for (Eigen::Index i = 0; i < s.dim_g; ++i) consider(&mu[k][i], touched);
  }
  return worst;
}

}  // namespace diracmech
