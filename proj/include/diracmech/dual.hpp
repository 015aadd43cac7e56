#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace diracmech {

/// Minimal forward-mode dual number carrying N derivative directions.
/// Instantiated with long double by the system Lagrangians so gradient
/// evaluations stay well under the double-precision noise their residuals
/// are judged against.
template <typename Real, std::size_t N>
struct Dual {
  Real v{};
  std::array<Real, N> d{};

  Dual() = default;
  Dual(Real value) : v(value) {}  // NOLINT: implicit scalar lift

  static Dual seeded(Real value, std::size_t dir) {
    Dual r(value);
    r.d[dir] = Real(1);
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(const Dual& a) {
    Dual r(-a.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    const Real inv2 = Real(1) / (b.v * b.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
    return r;
  }

  friend Dual sin(const Dual& a) {
    Dual r(std::sin(a.v));
    const Real c = std::cos(a.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = c * a.d[i];
    return r;
  }
  friend Dual cos(const Dual& a) {
    Dual r(std::cos(a.v));
    const Real s = -std::sin(a.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = s * a.d[i];
    return r;
  }
};

}  // namespace diracmech
