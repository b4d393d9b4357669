// Translation semigroup on the comb C \ {x + ip : x <= 0, p in Z}.
// Psi(w) = w + i maps the domain onto itself and shifts every strip petal
// S(p, p+1) to S(p+1, p+2); the fractional shift w + i/2 does not preserve it.

#include <cstdio>

#include <holodyn/catalog.hpp>

int main() {
  using namespace holodyn;
  catalog::CombDemoReport r = catalog::comb_demo(6);
  std::printf("samples                  %zu\n", r.samples);
  std::printf("forward violations       %zu\n", r.forward_violations);
  std::printf("w + i automorphism       %s (%zu mismatches)\n", r.shift_automorphism ? "yes" : "no",
              r.shift_mismatches);
  std::printf("witness w = %g%+gi        in Omega: %s, w + i/2 in Omega: %s\n", r.witness.real(),
              r.witness.imag(), r.witness_in_omega ? "yes" : "no", r.witness_image_in_omega ? "yes" : "no");
  std::printf("\n  petal        image     alpha-analogue\n");
  for (const auto& row : r.cascade)
    std::printf("  S(%d,%d)  ->  S(%d,%d)   -inf %+gi\n", row.petal, row.petal + 1, row.image_petal,
                row.image_petal + 1, row.alpha_im);
  std::printf("\n  t        w + it preserves Omega\n");
  for (auto [t, ok] : r.vertical_shift_preserves) std::printf("  %-8.6f %s\n", t, ok ? "yes" : "no");
  return 0;
}
