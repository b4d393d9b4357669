// Hyperbolic petal of H = L + e^L, L = 2 log((1+z)/(1-z)): alpha-point,
// spectral value, pre-model and the Cowen-Pommerenke sum.

#include <cmath>
#include <cstdio>

#include <holodyn/catalog.hpp>
#include <holodyn/petals.hpp>

int main() {
  using namespace holodyn;
  const SemigroupSpec& s = catalog::semigroup("strip-minus-slits");
  AlphaPoint a = alpha_point(s, 0.0, 1.0);
  std::printf("alpha-point       %.12f%+.3ei (%s)\n", a.sigma.real(), a.sigma.imag(), petal_kind_name(a.kind));
  double mult = boundary_multiplier(MapDescriptor::semigroup_element(s, 1.0), -1.0);
  std::printf("psi_1'(-1)        %.12f\n", mult);
  std::printf("spectral value    %.12f (strip width 2 pi gives %.12f)\n", spectral_value(s, -1.0),
              strip_spectral_value({-kPi, kPi}));
  PreModel pm = pre_model(s, -1.0, Strip{-kPi, kPi});
  std::printf("pre-model         lambda %.6f, conjugation residual %.2e, isogonal %s\n", pm.lambda,
              pm.conjugation_residual, pm.isogonal ? "yes" : "no");
  CowenPommerenkeReport cp = cowen_pommerenke_bound(s, {-1.0}, 1.0);
  std::printf("Cowen-Pommerenke  %.6f <= %.6f: %s\n", cp.lhs, cp.rhs, cp.holds ? "holds" : "fails");
  return 0;
}
