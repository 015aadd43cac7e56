#include "diracmech/connection.hpp"

#include <string>

namespace diracmech {

DiscreteConnection::DiscreteConnection(TrivializedSpace space, Matrix h_sigma)
    : space_(space), H_(std::move(h_sigma)) {
  if (H_.rows() != space_.dim_g || H_.cols() != space_.dim_sigma) {
    throw ContractViolation("DiscreteConnection: H must be dim_g x dim_sigma (" +
                            std::to_string(space_.dim_g) + " x " +
                            std::to_string(space_.dim_sigma) + ")");
  }
  if (!H_.allFinite()) {
    throw ContractViolation("DiscreteConnection: H has non-finite entries");
  }
}

DiscreteConnection DiscreteConnection::flat(TrivializedSpace space) {
  return DiscreteConnection(space, Matrix::Zero(space.dim_g, space.dim_sigma));
}

Vector DiscreteConnection::h_d(const PointQ& q0, const Vector& x1) const {
  check_point(space_, q0, "h_d: q0");
  check_vector(space_.dim_sigma, x1, "h_d: x1");
  // increment form: cancels exactly on the diagonal, so omega_d(q, q) = 0
  // holds identically in floating point too
  return q0.g + H_ * (x1 - q0.x);
}

Vector DiscreteConnection::omega_d(const PointQ& q0, const PointQ& q1) const {
  check_point(space_, q0, "omega_d: q0");
  check_point(space_, q1, "omega_d: q1");
  return q1.g - h_d(q0, q1.x);
}

Vector DiscreteConnection::h_d0(const Vector& x0, const Vector& x1) const {
  check_vector(space_.dim_sigma, x0, "h_d0: x0");
  check_vector(space_.dim_sigma, x1, "h_d0: x1");
  return H_ * (x1 - x0);
}

Vector DiscreteConnection::h_dQ(const PointQ& q) const {
  check_point(space_, q, "h_dQ: q");
  return q.g - H_ * q.x;
}

Vector DiscreteConnection::h_dSigma(const Vector& x) const {
  check_vector(space_.dim_sigma, x, "h_dSigma: x");
  return H_ * x;
}

Vector DiscreteConnection::h_dSigma_adj(const Vector& mu) const {
  check_vector(space_.dim_g, mu, "h_dSigma_adj: mu");
  return H_.transpose() * mu;
}

}  // namespace diracmech
