// Petals of the Koebe semigroup h(z) = z/(1-z)^2, h o psi_t = h + t.

#include <cstdio>

#include <holodyn/catalog.hpp>
#include <holodyn/petals.hpp>

int main() {
  using namespace holodyn;
  const SemigroupSpec& s = catalog::semigroup("koebe-zero-step");
  std::vector<cplx> seeds = {cplx(0.0, 0.5), cplx(0.0, -0.5), cplx(0.3, 0.4), 0.0, 0.6, -0.6};
  PetalSurvey survey = petal_survey(s, seeds, 1.0);
  for (const auto& p : survey.petals) {
    std::printf("petal %+d  %-10s alpha = %.12f%+.3ei  witnesses:", p.petal_id.value_or(0), petal_kind_name(p.kind),
                p.alpha.real(), p.alpha.imag());
    for (cplx z : p.witnesses) std::printf(" %g%+gi", z.real(), z.imag());
    std::printf("\n");
  }
  std::printf("rejected:");
  for (cplx z : survey.rejected) std::printf(" %g%+gi", z.real(), z.imag());
  std::printf("\n\n");

  for (double t : {0.5, 1.0, 2.0}) {
    MapDescriptor psi = MapDescriptor::semigroup_element(s, t);
    for (cplx z : {cplx(0.0, 0.5), cplx(0.0, -0.5)}) {
      MembershipReport a = petal_membership_report(s, z), b = petal_membership_report(s, psi(z));
      std::printf("psi_%g(%g%+gi) stays in petal %+d: %s\n", t, z.real(), z.imag(), a.label.value_or(0),
                  a.label == b.label ? "yes" : "no");
    }
  }
  return 0;
}
