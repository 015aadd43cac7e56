#pragma once

#include <functional>

#include "diracmech/integrator.hpp"
#include "diracmech/lagrangian.hpp"

namespace diracmech {

/// A ready-to-integrate system: a G-invariant discrete Lagrangian, the
/// discrete connection, the trivialized initial condition and the absolute
/// initial fiber coordinate.
struct SystemSetup {
  DiscreteLagrangian lagrangian;
  DiscreteConnection connection;
  TrivializedMomentumPoint initial;
  Vector g_abs0;
};

// ---------------------------------------------------------------------------
// Charged particle in a constant magnetic field (Kaluza-Klein form),
// Q = R^3 x S^1, natural units c = 1.
// ---------------------------------------------------------------------------

struct ChargedParticleParams {
  double m = 1.0;
  double e = 1.0;
  double B0 = 1.0;
  double h = 0.2;
  double T = 20.0;

  void validate() const;
};

/// L_d(q0,th0,q1,th1) = (m/2h)|dq|^2 + (1/2h)(<A(q0), dq> + dth)^2 with
/// A(q) = (B0/2)(-q^2 dq^1 + q^1 dq^2), flat connection, analytic gradient.
/// Initial data trivializes to ((0,0), (1,0,1), e).
SystemSetup charged_particle_system(const ChargedParticleParams& p);

/// Exact Lorentz-law solution for m = e = B0 = 1 from the configured
/// initial data: (sin t, cos t - 1, t).
Vector charged_particle_exact(double t);

/// Euclidean norm of q(T) - q_N over the R^3 shape part.
double final_error(const ReducedTrajectory& tr, const std::function<Vector(double)>& exact);

// ---------------------------------------------------------------------------
// Double spherical pendulum, Q = S^2 x S^2, SI units. Coordinates
// (vtheta1, phi1, vtheta2, phi2) with vtheta1 = (theta1+theta2)/2 the S^1
// group direction; shape x = (phi1, vtheta2, phi2).
// ---------------------------------------------------------------------------

struct PendulumParams {
  double m1 = 20.0;
  double m2 = 35.0;
  double l1 = 500.0;
  double l2 = 800.0;
  double g = 9.8;
  double h = 0.01;
  double T = 100.0;

  void validate() const;
};

/// Midpoint discrete Lagrangian of the spherical-coordinate Lagrangian, flat
/// connection omega_d = vtheta1^+ - vtheta1. q0 ordered (vtheta1, phi1,
/// vtheta2, phi2); w0 ordered as (phi1, vtheta2, phi2) conjugates.
/// Gradients are exact forward-mode duals evaluated in extended precision.
/// Throws InvalidChartError when an initial phi_i is within chart_guard of a
/// multiple of pi (the action is not free there); set chart_guard <= 0 to
/// disable for limit checks.
SystemSetup pendulum_system(const PendulumParams& p, const Vector& q0, const Vector& w0,
                            const Vector& mu0, double chart_guard = 1e-6);

/// Paper configuration: q0 = (0, 9/4, 2, 3), (mu0, w0) = (0, (0,1,1)).
SystemSetup pendulum_system_paper(const PendulumParams& p);

/// Wrap into (-pi, pi]; reporting/reconstruction only, never inside Newton
/// residuals.
double normalize_angle(double a);

}  // namespace diracmech
