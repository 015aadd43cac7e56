#pragma once

#include <Eigen/Core>

#include "diracmech/spaces.hpp"

namespace diracmech {

/// Linear discrete principal connection on Q = Sigma x G.
///
/// A single dense matrix H = h_{d,Sigma}: Sigma -> G determines everything:
/// equivariance forces h_{d,Q}(x, g) = g + B.x and omega_d(q, q) = 0 forces
/// B = -H. The consistency relations between the derived maps are property
/// tests, not stored data.
class DiscreteConnection {
 public:
  DiscreteConnection(TrivializedSpace space, Matrix h_sigma);

  /// Connection with H = 0 (both worked example systems use this).
  static DiscreteConnection flat(TrivializedSpace space);

  const TrivializedSpace& space() const { return space_; }
  const Matrix& matrix() const { return H_; }

  /// h_d(q0, x1) = h_{d,Q}(q0) + h_{d,Sigma}(x1) = (g0 - H.x0) + H.x1.
  Vector h_d(const PointQ& q0, const Vector& x1) const;

  /// omega_d(q0, q1) = g1 - h_d(q0, x1).
  Vector omega_d(const PointQ& q0, const PointQ& q1) const;

  /// h_d^0(x0, x1) = h_d((x0,0), x1) = H.(x1 - x0).
  Vector h_d0(const Vector& x0, const Vector& x1) const;

  /// h_{d,Q}(q) = g - H.x.
  Vector h_dQ(const PointQ& q) const;

  /// h_{d,Sigma}(x) = H.x.
  Vector h_dSigma(const Vector& x) const;

  /// h*_{d,Sigma}(mu) = H^T.mu.
  Vector h_dSigma_adj(const Vector& mu) const;

 private:
  TrivializedSpace space_;
  Matrix H_;  // dim_g x dim_sigma
};

}  // namespace diracmech
