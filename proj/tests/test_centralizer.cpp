#include <gtest/gtest.h>

#include "holodyn/catalog.hpp"
#include "holodyn/centralizer.hpp"
#include "holodyn/criteria.hpp"

using namespace holodyn;

namespace {

const SemigroupSpec& koebe() { return catalog::semigroup("koebe-zero-step"); }

MapDescriptor elem(const std::string& name, double t) {
  return MapDescriptor::semigroup_element(catalog::semigroup(name), t);
}

const MapDescriptor& phs_phi() { return *catalog::catalog_build("phs-halfplane").map; }

/// psi = h^{-1} o (w + 1 + 0.05 e^{-2 pi i w}) o h on the Pommerenke model of phs.
struct Perturbed {
  MapDescriptor psi;
  std::vector<cplx> grid;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // h(z_j) = h(z_i) + 1
};

const Perturbed& perturbed() {
  static const Perturbed p = [] {
    KoenigsPtr H = catalog::phs_koenigs();
    Perturbed out{MapDescriptor::model_conjugate(
                      H, MapDescriptor::formula("z+1+0.05*exp(-6.283185307179586*i*z)", Domain::plane)),
                  {}, {}};
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 8; ++j) out.grid.push_back(H->invert(cplx(30.0 + 0.25 * j, -0.3 - 0.1 * k)));
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) out.pairs.emplace_back(8 * k + j, 8 * k + j + 4);
    return out;
  }();
  return p;
}

const AffinityReport& perturbed_report() {
  static const AffinityReport r = [] {
    FLimitOptions opt;
    opt.commute_tol = 1e-4;
    return f_limit(phs_phi(), perturbed().psi, perturbed().grid, opt);
  }();
  return r;
}

}  // namespace

TEST(Commutator, Examples) {
  EXPECT_LT(commutator_residual(elem("koebe-zero-step", 1.0), elem("koebe-zero-step", 0.7)), 1e-9);
  EXPECT_GT(commutator_residual(MapDescriptor::mobius(2, 1, 1, 2), MapDescriptor::mobius(kI, 0, 0, 1)), 0.1);
  EXPECT_EQ(commutator_residual(MapDescriptor::identity(), MapDescriptor::mobius(2, 1, 1, 2)), 0.0);
}

TEST(AffinityConstant, Examples) {
  auto a = affinity_constant(koebe().koenigs(), elem("koebe-zero-step", 1.5));
  EXPECT_NEAR(std::abs(a.c - 1.5), 0.0, 1e-12);
  EXPECT_LT(a.residual, 1e-9);
  auto id = affinity_constant(koebe().koenigs(), MapDescriptor::identity());
  EXPECT_EQ(id.c, cplx(0.0));
  EXPECT_GT(affinity_constant(koebe().koenigs(), MapDescriptor::mobius(2, 1, 1, 2)).residual, 0.1);
}

TEST(FLimit, IteratesGiveConstants) {
  auto grid = disc_grid(32, 0.9);
  for (unsigned k : {1u, 2u, 3u}) {
    AffinityReport r = f_limit(phs_phi(), iterate_n(phs_phi(), k), grid);
    EXPECT_TRUE(r.is_constant) << k;
    EXPECT_NEAR(std::abs(r.c_estimate - double(k)), 0.0, 1e-5) << k;
    for (const auto& [z, f] : r.f_samples) EXPECT_NEAR(std::abs(f - double(k)), 0.0, 1e-5);
  }
}

TEST(FLimit, Preconditions) {
  auto grid = disc_grid(32, 0.9);
  try {
    f_limit(MapDescriptor::mobius(2, 1, 1, 2), MapDescriptor::mobius(2, 1, 1, 2), grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::wrong_class);
  }
  try {
    f_limit(phs_phi(), MapDescriptor::mobius(2, 1, 1, 2), grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_commuting);
  }
  try {
    f_limit(phs_phi(), MapDescriptor::identity(), grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::is_identity);
  }
}

TEST(FLimit, NonAffinePartner) {
  const AffinityReport& r = perturbed_report();
  EXPECT_LT(r.commutator, 1e-8);
  EXPECT_FALSE(r.is_constant);
  EXPECT_GT(r.spread, 1e-3);
}

TEST(PeriodicExtension, AffinePartner) {
  auto H = catalog::phs_koenigs();
  AffinityReport r = f_limit(phs_phi(), iterate_n(phs_phi(), 2), perturbed().grid);
  auto pe = periodic_extension_check(r, *H, perturbed().pairs);
  EXPECT_LT(pe.periodicity, 1e-6);
  EXPECT_LT(pe.pair_mismatch, 1e-6);
  EXPECT_TRUE(pe.injectivity.passes);
}

TEST(PeriodicExtension, NonAffinePartner) {
  auto pe = periodic_extension_check(perturbed_report(), *catalog::phs_koenigs(), perturbed().pairs);
  EXPECT_LT(pe.periodicity, 1e-3);
  EXPECT_LT(pe.pair_mismatch, 1e-6);
  EXPECT_TRUE(pe.injectivity.passes);
}

TEST(PeriodicExtension, SyntheticViolationIsCaught) {
  // g(w) = w + 2 e^{4 pi i w} has g'(w0) = 0 at e^{4 pi i w0} = i/(8 pi), so it is
  // two-to-one near w0: points w0 +- d nearly collide.
  auto g = [](cplx w) { return w + 2.0 * std::exp(cplx(0, 4 * kPi) * w); };
  cplx w0 = std::log(cplx(0, 1.0 / (8 * kPi))) / cplx(0, 4 * kPi);
  ASSERT_GT(w0.imag(), 0.0);
  std::vector<cplx> w, gw;
  for (int k = 0; k < 16; ++k) {
    cplx p = w0 + std::polar(1e-3, 2 * kPi * k / 16);
    w.push_back(p);
    gw.push_back(g(p));
  }
  auto audit = injectivity_audit(w, gw);
  EXPECT_FALSE(audit.passes);
  EXPECT_LT(audit.min_ratio, 1e-4);
}

TEST(CFormula, Examples) {
  const auto& hyp = catalog::semigroup("mobius-hyperbolic");
  MapDescriptor p1 = MapDescriptor::semigroup_element(hyp, 1.0);
  EXPECT_NEAR(std::abs(c_formula(p1, MapDescriptor::semigroup_element(hyp, 2.0), 1.0, MapKind::hyperbolic) - 2.0),
              0.0, 1e-5);
  EXPECT_NEAR(std::abs(c_formula(p1, p1, 1.0, MapKind::hyperbolic) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c_formula(elem("koebe-zero-step", 1.0), elem("koebe-zero-step", 0.5), 1.0,
                                 MapKind::parabolic_zero_step) -
                       0.5),
              0.0, 1e-4);
}

TEST(CFormula, RejectsInteriorPoint) { EXPECT_THROW(c_formula(phs_phi(), phs_phi(), 0.5, MapKind::hyperbolic), Error); }

TEST(Criteria, SemigroupElementsSatisfyAllAvailableConditions) {
  for (const char* name : {"mobius-hyperbolic", "koebe-zero-step", "strip-minus-slits", "elliptic"}) {
    CriteriaReport r = criteria_battery(elem(name, 1.3), catalog::semigroup(name));
    EXPECT_TRUE(r.precondition_ok) << name;
    EXPECT_TRUE(r.a.holds) << name;
    EXPECT_TRUE(r.c.holds) << name;
    EXPECT_TRUE(r.conclusion_holds) << name;
    for (auto [t, res] : r.conclusion) EXPECT_LT(res, 1e-8) << name << " t=" << t;
  }
}

TEST(Criteria, HyperbolicGroupSharesRepellingPoint) {
  CriteriaReport r = criteria_battery(elem("mobius-hyperbolic", 1.0), catalog::semigroup("mobius-hyperbolic"));
  EXPECT_TRUE(r.b.holds);
  EXPECT_TRUE(r.f.holds);
  ASSERT_FALSE(r.common_points.empty());
  EXPECT_NEAR(std::abs(r.common_points.front() + 1.0), 0.0, 1e-6);
}

TEST(Criteria, NonCommutingPairFailsPrecondition) {
  CriteriaReport r = criteria_battery(MapDescriptor::mobius(2, 1, 1, 2), koebe());
  EXPECT_FALSE(r.precondition_ok);
  EXPECT_FALSE(r.conclusion_holds);
}

TEST(SemigroupsCommute, Examples) {
  auto same = semigroups_commute_check(koebe(), koebe());
  EXPECT_TRUE(same.precondition_ok);
  EXPECT_TRUE(same.commute);
  EXPECT_LT(same.residual, 1e-9);
  auto rescaled = SemigroupSpec::from_koenigs(koebe().koenigs_ptr(), "koebe-2t", ModelKind::translation, 2.0);
  EXPECT_TRUE(semigroups_commute_check(koebe(), rescaled).commute);
  auto other = semigroups_commute_check(koebe(), catalog::semigroup("strip-minus-slits"));
  EXPECT_FALSE(other.precondition_ok);
  EXPECT_FALSE(other.commute);
}

TEST(EllipticCentralizer, Examples) {
  const auto& s = catalog::semigroup("elliptic");
  auto half = elliptic_centralizer_check(s, elem("elliptic", 0.5));
  EXPECT_NEAR(std::abs(half.c - std::pow(2.0, -0.5)), 0.0, 1e-12);
  EXPECT_LT(half.residual, 1e-9);
  EXPECT_NEAR(std::abs(elliptic_centralizer_check(s, MapDescriptor::identity()).c - 1.0), 0.0, 1e-15);
  EXPECT_THROW(elliptic_centralizer_check(catalog::rotation_semigroup(), MapDescriptor::identity()), Error);
}

TEST(EllipticCentralizer, RotationCounterDemo) {
  auto d = catalog::rotation_counter_demo();
  EXPECT_LT(d.commutator_psi1, 1e-12);
  EXPECT_NEAR(d.commutator_half_at, 0.125, 1e-12);
}

TEST(Property, AffinityIffConclusion) {
  struct Case {
    MapDescriptor phi;
    std::string semigroup;
  };
  std::vector<Case> cases = {{elem("koebe-zero-step", 0.4), "koebe-zero-step"},
                             {elem("strip-minus-slits", 2.0), "strip-minus-slits"},
                             {elem("mobius-hyperbolic", 0.7), "mobius-hyperbolic"},
                             {elem("parabolic-automorphism", 1.7), "parabolic-automorphism"},
                             {MapDescriptor::mobius(2, 1, 1, 2), "koebe-zero-step"},
                             {elem("strip-minus-slits", 1.0), "koebe-zero-step"},
                             {MapDescriptor::formula("z/(2-z)"), "mobius-hyperbolic"}};
  for (const auto& c : cases) {
    const auto& s = catalog::semigroup(c.semigroup);
    bool affine = affinity_constant(s.koenigs(), c.phi).residual < 1e-8;
    bool commutes = true;
    for (double t : conclusion_times())
      commutes = commutes && commutator_residual(c.phi, MapDescriptor::semigroup_element(s, t)) < 1e-7;
    EXPECT_EQ(affine, commutes) << c.semigroup;
  }
}

TEST(Property, FLimitAgreesWithCFormula) {
  auto grid = disc_grid(32, 0.9);
  for (unsigned k : {1u, 2u, 3u}) {
    MapDescriptor psi = iterate_n(phs_phi(), k);
    AffinityReport r = f_limit(phs_phi(), psi, grid);
    ASSERT_TRUE(r.is_constant);
    cplx c = c_formula(phs_phi(), psi, 1.0, MapKind::parabolic_positive_step);
    EXPECT_LT(std::abs(c - r.c_estimate), 1e-3) << k;
  }
}

TEST(Property, IrrationalTimeForcesSemigroupCommutation) {
  const double r = std::sqrt(2.0) - 1.0;
  for (const char* name : {"koebe-zero-step", "strip-minus-slits", "mobius-hyperbolic"}) {
    const auto& s = catalog::semigroup(name);
    MapDescriptor phi = elem(name, 0.9);
    ASSERT_LT(commutator_residual(phi, MapDescriptor::semigroup_element(s, 1.0)), 1e-6);
    ASSERT_LT(commutator_residual(phi, MapDescriptor::semigroup_element(s, r)), 1e-6);
    for (double t : {0.1, 0.25, 0.5, 1.7})
      EXPECT_LT(commutator_residual(phi, MapDescriptor::semigroup_element(s, t)), 1e-6) << name;
  }
}
