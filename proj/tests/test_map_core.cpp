#include <gtest/gtest.h>

#include <random>

#include "holodyn/catalog.hpp"
#include "holodyn/map.hpp"
#include "holodyn/metric.hpp"

using namespace holodyn;

namespace {

MapDescriptor phi_half() { return MapDescriptor::mobius(2, 1, 1, 2); }

MapDescriptor parabolic_auto() {
  return MapDescriptor::conjugate(cayley_upper(), MapDescriptor::formula("z+1", Domain::upper_half_plane));
}

std::vector<MapDescriptor> disc_maps() {
  return {phi_half(),
          parabolic_auto(),
          MapDescriptor::formula("z/(2-z)"),
          catalog::catalog_build("koebe-zero-step").map.value(),
          catalog::catalog_build("strip-minus-slits").map.value(),
          catalog::catalog_build("elliptic").map.value(),
          catalog::catalog_build("phs-halfplane").map.value(),
          MapDescriptor::compose({phi_half(), MapDescriptor::formula("z/(2-z)")})};
}

}  // namespace

TEST(Mobius, NormalizedDeterminant) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    MobiusMap m({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
    EXPECT_LE(std::abs(m.det() - 1.0), 1e-14);
  }
}

TEST(Mobius, CompositionIsMatrixProduct) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    MobiusMap p({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
    MobiusMap q({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
    MobiusMap pq = p.compose(q);
    for (cplx z : disc_grid(16, 0.5)) {
      cplx a = pq(z), b = p(q(z));
      EXPECT_LE(std::abs(a - b), 1e-12 * (1 + std::abs(b)));
    }
  }
}

TEST(Eval, Examples) {
  EXPECT_NEAR(std::abs(phi_half()(0.0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(catalog::catalog_build("koebe-zero-step").semigroup->flow(2.0, 0.0) - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(parabolic_auto()(0.0) - cplx(0.2, -0.4)), 0.0, 1e-15);
}

TEST(Eval, OutsideDomain) {
  MapDescriptor f = MapDescriptor::formula("z+1", Domain::upper_half_plane);
  try {
    f(cplx(0, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::outside_domain);
  }
}

TEST(Derivative, Examples) {
  EXPECT_NEAR(std::abs(phi_half().derivative(1.0) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_EQ(MapDescriptor::identity().derivative(cplx(0.3, 0.2)), cplx(1.0));
  const auto& k = catalog::semigroup("koebe-zero-step").koenigs();
  EXPECT_NEAR(std::abs(k.derivative(0.0) - 1.0), 0.0, 1e-15);
}

TEST(Derivative, InverseFunctionRuleThroughSemigroup) {
  MapDescriptor psi = catalog::catalog_build("strip-minus-slits").map.value();
  const double h = 1e-6;
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.4), cplx(0.0, -0.7)}) {
    cplx fd = (psi(z + h) - psi(z - h)) / (2 * h);
    EXPECT_LE(std::abs(psi.derivative(z) - fd), 1e-7 * (1 + std::abs(fd)));
  }
}

TEST(Iterate, Examples) {
  EXPECT_NEAR(std::abs(iterate_n(phi_half(), 0)(0.3) - 0.3), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(iterate_n(phi_half(), 2)(0.0) - 0.8), 0.0, 1e-15);
  MapDescriptor psi1 = catalog::catalog_build("koebe-zero-step").map.value();
  EXPECT_NEAR(std::abs(iterate_n(psi1, 2)(0.0) - 0.5), 0.0, 1e-12);
  // A generic descriptor keeps an Iterate node and composes step by step.
  MapDescriptor f = MapDescriptor::formula("z/(2-z)");
  EXPECT_NEAR(std::abs(iterate_n(f, 3)(0.5) - 1.0 / 9.0), 0.0, 1e-15);
}

TEST(Cayley, Examples) {
  MobiusMap C = cayley(1.0);
  EXPECT_NEAR(std::abs(C(0.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(C(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(C(kI) - kI), 0.0, 1e-15);
  EXPECT_THROW(cayley(0.5), Error);
}

TEST(Cayley, MapsDiscOntoRightHalfPlane) {
  for (cplx tau : {cplx(1.0), kI, std::polar(1.0, 2.0)}) {
    MobiusMap C = cayley(tau);
    for (cplx z : disc_grid(64, 0.99)) EXPECT_GT(C(z).real(), 0.0);
    EXPECT_NEAR(std::abs(C(0.0) - 1.0), 0.0, 1e-15);
  }
}

TEST(FixedPoints, Examples) {
  auto fp = mobius_fixed_points(MobiusMap(2, 1, 1, 2));
  std::vector<double> r = {fp[0].z.real(), fp[1].z.real()};
  std::sort(r.begin(), r.end());
  EXPECT_NEAR(r[0], -1.0, 1e-15);
  EXPECT_NEAR(r[1], 1.0, 1e-15);
  EXPECT_EQ(fp[0].location, PointLocation::boundary);

  auto par = mobius_fixed_points(cayley_upper().inverse().compose(MobiusMap(1, 1, 0, 1)).compose(cayley_upper()));
  EXPECT_NEAR(std::abs(par[0].z - 1.0), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(par[1].z - 1.0), 0.0, 1e-7);

  auto rot = mobius_fixed_points(MobiusMap(kI, 0, 0, 1));
  EXPECT_EQ(rot[0].z, cplx(0.0));
  EXPECT_EQ(rot[0].location, PointLocation::interior);
  EXPECT_EQ(rot[1].location, PointLocation::infinity);

  EXPECT_THROW(mobius_fixed_points(MobiusMap()), Error);
}

TEST(Property, IterateAdditivity) {
  for (const auto& m : disc_maps()) {
    for (unsigned a : {1u, 2u, 3u})
      for (unsigned b : {0u, 1u, 4u})
        for (cplx z : disc_grid(16, 0.8)) {
          cplx lhs = iterate_n(m, a + b)(z);
          cplx rhs = iterate_n(m, a)(iterate_n(m, b)(z));
          EXPECT_LE(std::abs(lhs - rhs), 1e-10);
        }
  }
}

TEST(Property, SelfMapAudit) {
  for (const auto& m : disc_maps())
    for (int k = 0; k < 512; ++k) EXPECT_LT(std::abs(m(std::polar(0.999, 2 * kPi * (k + 0.5) / 512))), 1.0);
}

TEST(Property, SchwarzPick) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.0, 0.95), th(0.0, 2 * kPi);
  for (const auto& m : disc_maps())
    for (int k = 0; k < 100; ++k) {
      cplx z = std::polar(r(rng), th(rng)), w = std::polar(r(rng), th(rng));
      EXPECT_LE(rho_disc(m(z), m(w)), rho_disc(z, w) + 1e-9);
    }
}

TEST(Property, ConjugateIsOuterInverseInnerOuter) {
  MapDescriptor inner = MapDescriptor::formula("z+i+1/(z+1)", Domain::right_half_plane);
  MobiusMap C = cayley(1.0);
  MapDescriptor m = MapDescriptor::conjugate(C, inner);
  for (cplx z : disc_grid(64, 0.9)) EXPECT_LE(std::abs(m(z) - C.inverse()(inner(C(z)))), 1e-10);
}

TEST(Property, ComposeAppliesRightmostFirst) {
  MapDescriptor f = MapDescriptor::formula("z^2"), g = MapDescriptor::formula("(z+1)/3");
  MapDescriptor fg = MapDescriptor::compose({f, g});
  for (cplx z : disc_grid(16, 0.8)) EXPECT_LE(std::abs(fg(z) - f(g(z))), 1e-15);
}
