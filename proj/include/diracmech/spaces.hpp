#pragma once

#include <Eigen/Core>
#include <utility>

#include "diracmech/errors.hpp"

namespace diracmech {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Trivialized configuration space Q = Sigma x G with G abelian acting by
/// addition on the fiber. Dimensions are runtime values.
struct TrivializedSpace {
  Eigen::Index dim_sigma = 0;
  Eigen::Index dim_g = 0;

  Eigen::Index dim_q() const { return dim_sigma + dim_g; }

  friend bool operator==(const TrivializedSpace&, const TrivializedSpace&) = default;
};

/// q = (x, g): shape coordinates and group/fiber coordinates.
struct PointQ {
  Vector x;
  Vector g;

  PointQ() = default;
  PointQ(Vector x_, Vector g_) : x(std::move(x_)), g(std::move(g_)) {}

  static PointQ zero(const TrivializedSpace& s) {
    return {Vector::Zero(s.dim_sigma), Vector::Zero(s.dim_g)};
  }
};

/// p = (w, r): Sigma* and G* components.
struct CovectorQ {
  Vector w;
  Vector r;

  CovectorQ() = default;
  CovectorQ(Vector w_, Vector r_) : w(std::move(w_)), r(std::move(r_)) {}

  static CovectorQ zero(const TrivializedSpace& s) {
    return {Vector::Zero(s.dim_sigma), Vector::Zero(s.dim_g)};
  }
};

/// (q, w, mu): the hat_lambda_d coordinates of a point of T*Q.
struct TrivializedMomentumPoint {
  PointQ q;
  Vector w;   // Sigma* component after trivialization
  Vector mu;  // g* component
};

inline PointQ operator+(const PointQ& a, const PointQ& b) { return {a.x + b.x, a.g + b.g}; }
inline PointQ operator-(const PointQ& a, const PointQ& b) { return {a.x - b.x, a.g - b.g}; }
inline PointQ operator-(const PointQ& a) { return {-a.x, -a.g}; }
inline PointQ operator*(double s, const PointQ& a) { return {s * a.x, s * a.g}; }
inline CovectorQ operator+(const CovectorQ& a, const CovectorQ& b) { return {a.w + b.w, a.r + b.r}; }
inline CovectorQ operator-(const CovectorQ& a, const CovectorQ& b) { return {a.w - b.w, a.r - b.r}; }
inline CovectorQ operator-(const CovectorQ& a) { return {-a.w, -a.r}; }
inline CovectorQ operator*(double s, const CovectorQ& a) { return {s * a.w, s * a.r}; }

void check_point(const TrivializedSpace& s, const PointQ& q, const char* what = "point");
void check_covector(const TrivializedSpace& s, const CovectorQ& p, const char* what = "covector");
void check_vector(Eigen::Index dim, const Vector& v, const char* what);
bool all_finite(const PointQ& q);
bool all_finite(const CovectorQ& p);

/// Euclidean pairing in the chart: <p, v> = w.x + r.g.
double pair(const CovectorQ& p, const PointQ& v);

/// Additive action on Q: (x, g) -> (x, g + gr).
PointQ act(const Vector& gr, const PointQ& q);

/// Cotangent-lifted action: base point shifts, covector untouched.
std::pair<PointQ, CovectorQ> act_cotangent(const Vector& gr,
                                           const std::pair<PointQ, CovectorQ>& z);

/// Momentum map J(q, p) = r.
Vector momentum_map(const PointQ& q, const CovectorQ& p);

}  // namespace diracmech
