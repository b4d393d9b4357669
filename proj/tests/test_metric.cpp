#include <gtest/gtest.h>

#include <random>

#include "holodyn/catalog.hpp"
#include "holodyn/metric.hpp"

using namespace holodyn;

namespace {

MapDescriptor phi_half() { return MapDescriptor::mobius(2, 1, 1, 2); }

MapDescriptor parabolic_auto() { return catalog::catalog_build("parabolic-automorphism").map.value(); }

MapDescriptor entry_map(const std::string& name) { return catalog::catalog_build(name).map.value(); }

}  // namespace

TEST(Rho, Examples) {
  EXPECT_EQ(rho_disc(cplx(0.2, 0.1), cplx(0.2, 0.1)), 0.0);
  EXPECT_NEAR(rho_disc(0.0, std::tanh(1.0)), 1.0, 1e-14);
  // artanh(0.6/1.09), evaluated at 30 digits
  EXPECT_NEAR(rho_disc(0.3, -0.3), 0.6190392084062234, 1e-14);
  EXPECT_THROW(rho_disc(1.0, 0.0), Error);
}

TEST(Rho, MobiusInvariance) {
  MobiusMap a(1.0, cplx(0.3, -0.2), std::conj(cplx(0.3, -0.2)), 1.0);
  for (cplx z : disc_grid(16, 0.8))
    for (cplx w : disc_grid(8, 0.6)) EXPECT_NEAR(rho_disc(a(z), a(w)), rho_disc(z, w), 1e-12);
}

TEST(DenjoyWolff, Examples) {
  EXPECT_NEAR(std::abs(denjoy_wolff(phi_half()) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(denjoy_wolff(MapDescriptor::formula("z/(2-z)"))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(denjoy_wolff(entry_map("koebe-zero-step")) - 1.0), 0.0, 1e-6);
}

TEST(DenjoyWolff, EllipticAutomorphismDetected) {
  try {
    denjoy_wolff(MapDescriptor::mobius(kI, 0, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::elliptic_automorphism);
  }
  EXPECT_EQ(classify(MapDescriptor::mobius(kI, 0, 0, 1)).kind, MapKind::elliptic_automorphism);
}

TEST(BoundaryMultiplier, Examples) {
  EXPECT_NEAR(boundary_multiplier(phi_half(), 1.0), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(boundary_multiplier(phi_half(), -1.0), 3.0, 1e-6);
  // Repelling multiplier at -1 is exp(pi/width) for the petal strip (-pi, pi).
  EXPECT_NEAR(boundary_multiplier(entry_map("strip-minus-slits"), -1.0), std::exp(0.5), 1e-4);
}

TEST(BoundaryMultiplier, RejectsNonFixedPoint) {
  try {
    boundary_multiplier(phi_half(), kI);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_a_fixed_point);
  }
}

TEST(Classify, Examples) {
  auto h = classify(phi_half());
  EXPECT_EQ(h.kind, MapKind::hyperbolic);
  EXPECT_NEAR(std::abs(h.dw_point - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(h.multiplier.real(), 1.0 / 3.0, 1e-6);

  auto e = classify(MapDescriptor::formula("z/(2-z)"));
  EXPECT_EQ(e.kind, MapKind::elliptic);
  EXPECT_NEAR(std::abs(e.dw_point), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e.multiplier - 0.5), 0.0, 1e-12);

  auto p = classify(entry_map("phs-halfplane"));
  EXPECT_EQ(p.kind, MapKind::parabolic_positive_step);
  EXPECT_NEAR(std::abs(p.dw_point - 1.0), 0.0, 1e-6);
}

TEST(HyperbolicStep, Examples) {
  auto a = hyperbolic_step(parabolic_auto(), 0.0);
  EXPECT_EQ(a.verdict, StepVerdict::positive);
  double q0 = rho_disc(0.0, parabolic_auto()(0.0));
  for (double q : a.q) EXPECT_NEAR(q, q0, 1e-9);

  auto k = hyperbolic_step(entry_map("koebe-zero-step"), 0.0);
  EXPECT_EQ(k.verdict, StepVerdict::zero);
  EXPECT_LT(k.q.back(), 0.02);

  EXPECT_EQ(hyperbolic_step(entry_map("phs-halfplane"), 0.0).verdict, StepVerdict::positive);
}

TEST(BRFPScan, Mobius) {
  auto recs = brfp_scan(phi_half(), 256);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_NEAR(std::abs(recs[0].sigma - 1.0), 0.0, 1e-6);
  EXPECT_TRUE(recs[0].is_dw);
  EXPECT_NEAR(std::abs(recs[1].sigma + 1.0), 0.0, 1e-6);
  EXPECT_TRUE(recs[1].regular);
  EXPECT_NEAR(recs[1].angular_derivative, 3.0, 1e-6);
}

TEST(BRFPScan, KoebeOnlyDenjoyWolff) {
  auto recs = brfp_scan(entry_map("koebe-zero-step"), 256);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_NEAR(std::abs(recs[0].sigma - 1.0), 0.0, 1e-6);
}

TEST(BRFPScan, StripMinusSlits) {
  auto recs = brfp_scan(entry_map("strip-minus-slits"), 256);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_NEAR(std::abs(recs[0].sigma - 1.0), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(recs[1].sigma + 1.0), 0.0, 1e-6);
  EXPECT_TRUE(recs[1].regular);
  EXPECT_NEAR(recs[1].angular_derivative, std::exp(0.5), 1e-4);
}

TEST(Property, CatalogDenjoyWolffConsistency) {
  for (const auto& name : catalog::names()) {
    const auto& e = catalog::catalog_build(name);
    if (!e.map) continue;
    auto rep = classify(*e.map);
    cplx tau = rep.dw_point;
    if (std::abs(tau) < 1.0 - 1e-9) continue;
    cplx radial = (*e.map)((1.0 - std::ldexp(1.0, -26)) * tau);
    EXPECT_LE(std::abs(radial - tau), 1e-6) << name;
    EXPECT_GT(rep.multiplier.real(), 0.0) << name;
    EXPECT_LE(rep.multiplier.real(), 1.0 + 1e-5) << name;
  }
}

TEST(Property, OrbitDistanceNonIncreasing) {
  for (const auto& name : {"mobius-hyperbolic", "koebe-zero-step", "strip-minus-slits", "elliptic", "phs-halfplane"}) {
    MapDescriptor m = entry_map(name);
    cplx a = 0.0, b = 0.3;
    double prev = rho_disc(a, b);
    for (int n = 0; n < 100; ++n) {
      a = m(a);
      b = m(b);
      // rho loses digits like eps/(1-|z|); stop before rounding dominates.
      if (std::abs(a) > 1.0 - 1e-6 || std::abs(b) > 1.0 - 1e-6) break;
      double d = rho_disc(a, b);
      EXPECT_LE(d, prev + 1e-9) << name << " n=" << n;
      prev = d;
    }
  }
}

TEST(Property, HyperbolicMultiplierPowerLaw) {
  const auto& s = catalog::semigroup("mobius-hyperbolic");
  double l1 = boundary_multiplier(MapDescriptor::semigroup_element(s, 1.0), 1.0);
  EXPECT_NEAR(l1, 1.0 / 3.0, 1e-6);
  for (double t : {0.5, 2.0})
    EXPECT_NEAR(boundary_multiplier(MapDescriptor::semigroup_element(s, t), 1.0), std::pow(l1, t), 1e-5);
}
