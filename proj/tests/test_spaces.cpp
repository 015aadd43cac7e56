#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "diracmech/spaces.hpp"
#include "diracmech/systems.hpp"
#include "oracles.hpp"

using namespace diracmech;
using namespace diracmech::testing;

TEST_CASE("pair: coordinate dot product") {
  TrivializedSpace s{3, 1};
  CHECK(pair(CovectorQ::zero(s), PointQ{(Vector(3) << 4, 5, 6).finished(),
                                        Vector::Constant(1, 7)}) == 0.0);
  CovectorQ p{(Vector(3) << 1, 0, 1).finished(), Vector::Constant(1, 1)};
  PointQ v{(Vector(3) << 1, 2, 3).finished(), Vector::Constant(1, 4)};
  CHECK(pair(p, v) == doctest::Approx(8.0));
}

TEST_CASE("pair matches an independent dot routine and is bilinear") {
  Rng rng(11);
  for (int t = 0; t < 64; ++t) {
    TrivializedSpace s = rng.space();
    CovectorQ p1 = rng.covector(s), p2 = rng.covector(s);
    PointQ v = rng.point(s);
    double manual = 0.0;
    for (Eigen::Index i = 0; i < s.dim_sigma; ++i) manual += p1.w[i] * v.x[i];
    for (Eigen::Index i = 0; i < s.dim_g; ++i) manual += p1.r[i] * v.g[i];
    CHECK(pair(p1, v) == doctest::Approx(manual).epsilon(1e-12));
    const double a = rng.uniform(), b = rng.uniform();
    CHECK(pair(a * p1 + b * p2, v) ==
          doctest::Approx(a * pair(p1, v) + b * pair(p2, v)).epsilon(1e-12));
  }
}

TEST_CASE("act: additive group action on the fiber") {
  TrivializedSpace s{3, 1};
  PointQ q{Vector::Zero(3), Vector::Zero(1)};
  PointQ moved = act(Vector::Constant(1, 1.0), q);
  CHECK(moved.x.isZero());
  CHECK(moved.g[0] == 1.0);

  Rng rng(5);
  for (int t = 0; t < 32; ++t) {
    TrivializedSpace sp = rng.space();
    PointQ p = rng.point(sp);
    Vector g1 = rng.vec(sp.dim_g), g2 = rng.vec(sp.dim_g);
    CHECK(diff(act(Vector::Zero(sp.dim_g), p), p) == 0.0);
    CHECK(diff(act(g2, act(g1, p)), act(g1 + g2, p)) <= 1e-15);
    // freeness of translations: a nonzero shift moves the point
    if (inf_norm(g1) > 1e-3) CHECK(diff(act(g1, p), p) > 0.0);
  }
}

TEST_CASE("act_cotangent: covector untouched, momentum invariant, inverse") {
  Rng rng(7);
  for (int t = 0; t < 32; ++t) {
    TrivializedSpace sp = rng.space();
    auto z = std::make_pair(rng.point(sp), rng.covector(sp));
    Vector g = rng.vec(sp.dim_g);
    auto shifted = act_cotangent(g, z);
    CHECK(diff(shifted.second, z.second) == 0.0);
    CHECK(diff(momentum_map(shifted.first, shifted.second),
               momentum_map(z.first, z.second)) == 0.0);
    auto back = act_cotangent(Vector(-g), shifted);
    CHECK(diff(back.first, z.first) <= 1e-15);
    auto idt = act_cotangent(Vector::Zero(sp.dim_g), z);
    CHECK(diff(idt.first, z.first) == 0.0);
  }
}

TEST_CASE("momentum_map returns the G* slot") {
  TrivializedSpace s{2, 1};
  CovectorQ p{(Vector(2) << 5, 6).finished(), Vector::Constant(1, 7)};
  PointQ q = PointQ::zero(s);
  CHECK(momentum_map(q, p)[0] == 7.0);
  CHECK(momentum_map(q, CovectorQ{(Vector(2) << 3, -2).finished(), Vector::Zero(1)}).isZero());
}

TEST_CASE("charged-particle initial data has J = 1") {
  auto sys = charged_particle_system(ChargedParticleParams{});
  CHECK(sys.initial.mu[0] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatches raise contract violations") {
  TrivializedSpace s{2, 1};
  CovectorQ p = CovectorQ::zero(s);
  PointQ q{Vector::Zero(3), Vector::Zero(1)};
  CHECK_THROWS_AS((void)pair(p, q), ContractViolation);
  CHECK_THROWS_AS((void)act(Vector::Zero(2), q), ContractViolation);
  CHECK_THROWS_AS((void)momentum_map(q, CovectorQ{Vector::Zero(3), Vector::Zero(2)}),
                  ContractViolation);
}
