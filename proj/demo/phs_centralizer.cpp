// Centralizer of phi = C^{-1} o (w + i + 1/(w+1)) o C, a parabolic map of
// positive hyperbolic step. Iterates of phi give constant f_{phi,psi}; a map
// built from the Koenigs model with a 1-periodic perturbation does not.

#include <cstdio>

#include <holodyn/catalog.hpp>
#include <holodyn/centralizer.hpp>

int main() {
  using namespace holodyn;
  const MapDescriptor& phi = *catalog::catalog_build("phs-halfplane").map;
  const PommerenkeModel& model = catalog::phs_model();
  std::printf("Pommerenke model: n = %u, b = %.12f, Abel residual %.3e\n", model.n_used, model.b, model.residual);

  std::vector<cplx> grid = disc_grid(32, 0.9);
  for (unsigned k = 1; k <= 3; ++k) {
    AffinityReport r = f_limit(phi, iterate_n(phi, k), grid);
    std::printf("psi = phi^%u: f = %.9f%+.2ei, spread %.2e\n", k, r.c_estimate.real(), r.c_estimate.imag(), r.spread);
  }

  KoenigsPtr H = catalog::phs_koenigs();
  MapDescriptor g = MapDescriptor::formula("z+1+0.05*exp(-6.283185307179586*i*z)", Domain::plane);
  MapDescriptor psi = MapDescriptor::model_conjugate(H, g);
  std::vector<cplx> local;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 8; ++j) local.push_back(H->invert(cplx(30.0 + 0.25 * j, -0.3 - 0.1 * k)));
  FLimitOptions opt;
  opt.commute_tol = 1e-4;
  AffinityReport r = f_limit(phi, psi, local, opt);
  std::printf("perturbed psi: commutator %.2e, spread %.4f\n", r.commutator, r.spread);
  for (int j = 0; j < 4; ++j) {
    cplx w = (*H)(r.f_samples[j].first), f = r.f_samples[j].second;
    std::printf("  w = %6.2f%+.2fi   f = %.6f%+.6fi\n", w.real(), w.imag(), f.real(), f.imag());
  }
  return 0;
}
