#include "diracmech/spaces.hpp"

#include <string>

namespace diracmech {

void check_vector(Eigen::Index dim, const Vector& v, const char* what) {
  if (v.size() != dim) {
    throw ContractViolation(std::string(what) + ": expected length " + std::to_string(dim) +
                            ", got " + std::to_string(v.size()));
  }
}

void check_point(const TrivializedSpace& s, const PointQ& q, const char* what) {
  check_vector(s.dim_sigma, q.x, what);
  check_vector(s.dim_g, q.g, what);
}

void check_covector(const TrivializedSpace& s, const CovectorQ& p, const char* what) {
  check_vector(s.dim_sigma, p.w, what);
  check_vector(s.dim_g, p.r, what);
}

bool all_finite(const PointQ& q) { return q.x.allFinite() && q.g.allFinite(); }
bool all_finite(const CovectorQ& p) { return p.w.allFinite() && p.r.allFinite(); }

double pair(const CovectorQ& p, const PointQ& v) {
  if (p.w.size() != v.x.size() || p.r.size() != v.g.size()) {
    throw ContractViolation("pair: covector/point dimensions disagree");
  }
  return p.w.dot(v.x) + p.r.dot(v.g);
}

PointQ act(const Vector& gr, const PointQ& q) {
  check_vector(q.g.size(), gr, "act: group element");
  return {q.x, q.g + gr};
}

std::pair<PointQ, CovectorQ> act_cotangent(const Vector& gr,
                                           const std::pair<PointQ, CovectorQ>& z) {
  return {act(gr, z.first), z.second};
}

Vector momentum_map(const PointQ& q, const CovectorQ& p) {
  if (q.g.size() != p.r.size()) {
    throw ContractViolation("momentum_map: dimensions disagree");
  }
  return p.r;
}

}  // namespace diracmech
