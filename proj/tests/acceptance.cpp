// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "holodyn/catalog.hpp"
#include "holodyn/centralizer.hpp"
#include "holodyn/criteria.hpp"
#include "holodyn/koenigs.hpp"
#include "holodyn/metric.hpp"
#include "holodyn/petals.hpp"
#include "random_expr.hpp"

using namespace holodyn;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (time_limit > 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.3fs < %gs", secs, time_limit);
    o.require(secs < time_limit, buf);
  }
  if (!o.pass) ++failures;
  std::printf("C%-2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

MapDescriptor elem(const std::string& name, double t) {
  return MapDescriptor::semigroup_element(catalog::semigroup(name), t);
}

}  // namespace

int main() {
  criterion(1, "Mobius ground truth", 1.0, [](Outcome& o) {
    MapDescriptor phi = MapDescriptor::mobius(2, 1, 1, 2);
    ClassificationReport r = classify(phi);
    o.require(r.kind == MapKind::hyperbolic, std::string("kind ") + map_kind_name(r.kind));
    o.require(std::abs(r.dw_point - 1.0) < 1e-8, fmt("|tau-1| = %.2e", std::abs(r.dw_point - 1.0)));
    o.require(std::abs(r.multiplier - 1.0 / 3.0) < 1e-6, fmt("multiplier %.10f", r.multiplier.real()));
    bool found = false;
    for (const auto& b : brfp_scan(phi, 256))
      if (std::abs(b.sigma + 1.0) < 1e-6 && b.regular && std::abs(b.angular_derivative - 3.0) < 1e-6) found = true;
    o.require(found, "repelling -1 with derivative 3");
  });

  criterion(2, "Abel exactness", 1.0, [](Outcome& o) {
    const auto& s = catalog::semigroup("koebe-zero-step");
    auto grid = disc_grid(128, 0.9);
    double abel = 0.0, law = 0.0;
    for (double t : {0.5, 1.0, 2.0}) abel = std::max(abel, abel_residual(s.koenigs(), MapDescriptor::semigroup_element(s, t), t, grid));
    for (double a : {0.5, 1.0})
      for (double b : {0.5, 2.0})
        for (cplx z : grid) law = std::max(law, std::abs(s.flow(a, s.flow(b, z)) - s.flow(a + b, z)));
    o.require(abel < 1e-9, fmt("Abel residual %.2e", abel));
    o.require(law < 1e-9, fmt("semigroup law residual %.2e", law));
  });

  criterion(3, "Pommerenke construction", 30.0, [](Outcome& o) {
    const MapDescriptor& f = catalog::phs_half_plane_map();
    auto w = half_plane_grid();
    const PommerenkeModel& m1 = catalog::phs_model(1.0);
    const PommerenkeModel& m2 = catalog::phs_model(2.0);
    double r = abel_residual(*m1.h, f, cplx(0.0, m1.b), w);
    o.require(r < 1e-4, fmt("Abel residual %.2e", r));
    o.require(std::abs(m1.b) > 1e-6, fmt("b = %.6f", m1.b));
    o.require(m1.n_used <= 50000 && m2.n_used <= 50000, fmt("depth %g, %g", m1.n_used, m2.n_used));
    std::vector<cplx> h1, h2;
    for (cplx p : w) {
      h1.push_back((*m1.h)(p));
      h2.push_back((*m2.h)(p));
    }
    AffineFit fit = fit_real_affine(h1, h2);
    o.require(fit.residual < 1e-4, fmt("w0 = 1 vs 2 affine fit residual %.2e", fit.residual));
  });

  criterion(4, "Affine cases on phs-halfplane", 0, [](Outcome& o) {
    const MapDescriptor& phi = *catalog::catalog_build("phs-halfplane").map;
    auto grid = disc_grid(32, 0.9);
    for (unsigned k : {1u, 2u, 3u}) {
      MapDescriptor psi = iterate_n(phi, k);
      AffinityReport r = f_limit(phi, psi, grid);
      double dev = 0.0;
      for (const auto& [z, v] : r.f_samples) dev = std::max(dev, std::abs(v - double(k)));
      o.require(r.is_constant && dev < 1e-5, fmt("k=%g: max |f-k| %.2e", k, dev));
      cplx c = c_formula(phi, psi, 1.0, MapKind::parabolic_positive_step);
      o.require(std::abs(c - r.c_estimate) < 1e-3, fmt("k=%g: |c_est - c_formula| %.2e", k, std::abs(c - r.c_estimate)));
    }
  });

  criterion(5, "Non-affine commuting map", 0, [](Outcome& o) {
    KoenigsPtr H = catalog::phs_koenigs();
    const MapDescriptor& phi = *catalog::catalog_build("phs-halfplane").map;
    MapDescriptor psi =
        MapDescriptor::model_conjugate(H, MapDescriptor::formula("z+1+0.05*exp(-6.283185307179586*i*z)", Domain::plane));
    std::vector<cplx> grid;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 8; ++j) grid.push_back(H->invert(cplx(30.0 + 0.25 * j, -0.3 - 0.1 * k)));
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) pairs.emplace_back(8 * k + j, 8 * k + j + 4);
    double comm = commutator_residual(phi, psi, grid);
    o.require(comm < 1e-4, fmt("commutator %.2e", comm));
    FLimitOptions opt;
    opt.commute_tol = 1e-4;
    AffinityReport r = f_limit(phi, psi, grid, opt);
    o.require(r.spread > 1e-3, fmt("f_limit spread %.3e", r.spread));
    auto pe = periodic_extension_check(r, *H, pairs);
    o.require(pe.periodicity < 1e-3, fmt("1-periodicity residual %.2e", pe.periodicity));
  });

  criterion(6, "Hyperbolic c formula", 0, [](Outcome& o) {
    MapDescriptor p1 = elem("mobius-hyperbolic", 1.0);
    for (double s : {0.5, 2.0}) {
      cplx c = c_formula(p1, elem("mobius-hyperbolic", s), 1.0, MapKind::hyperbolic);
      o.require(std::abs(c - s) < 1e-5, fmt("s=%g: |c-s| %.2e", s, std::abs(c - s)));
    }
  });

  criterion(7, "Comb domain demo", 1.0, [](Outcome& o) {
    auto r = catalog::comb_demo();
    o.require(r.forward_violations == 0 && r.shift_automorphism && r.ray_logic_forward, "Psi(Omega) = Omega");
    o.require(r.witness == cplx(-1.0, 0.5) && r.witness_in_omega && !r.witness_image_in_omega,
              "witness -1 + i/2 leaves Omega at t = 1/2");
    o.require(r.cascade_ok, "cascade S(p,p+1) -> S(p+1,p+2)");
  });

  criterion(8, "Koebe petals", 0, [](Outcome& o) {
    const auto& s = catalog::semigroup("koebe-zero-step");
    auto sv = petal_survey(s, {cplx(0, 0.5), cplx(0, -0.5), 0.0, 0.5, -0.5});
    o.require(sv.petals.size() == 2, fmt("%g petal classes", double(sv.petals.size())));
    for (const auto& p : sv.petals)
      o.require(p.kind == PetalKind::parabolic && std::abs(p.alpha - 1.0) < 1e-4,
                fmt("parabolic, |alpha-1| %.2e", std::abs(p.alpha - 1.0)));
    o.require(sv.rejected.size() == 3, fmt("%g real seeds rejected", double(sv.rejected.size())));
    bool self = true;
    for (double t : {0.5, 1.0, 3.0})
      for (cplx z : {cplx(0, 0.5), cplx(0, -0.5)})
        self = self && petal_membership_report(s, s.flow(t, z)).label == petal_membership_report(s, z).label;
    o.require(self, "psi_t maps each petal into itself");
  });

  criterion(9, "Hyperbolic petal of strip-minus-slits", 0, [](Outcome& o) {
    const auto& s = catalog::semigroup("strip-minus-slits");
    auto a = alpha_point(s, 0.0, 1.0);
    o.require(std::abs(a.sigma + 1.0) < 1e-4, fmt("|alpha+1| %.2e", std::abs(a.sigma + 1.0)));
    double lam = spectral_value(s, -1.0);
    o.require(std::abs(lam - 1.0) < 1e-3, fmt("spectral value %.6f (expected 1)", lam));
    double mult = boundary_multiplier(MapDescriptor::semigroup_element(s, 1.0), -1.0);
    o.require(std::abs(mult - std::exp(1.0)) < 1e-3, fmt("multiplier %.6f (expected e)", mult));
    PreModel p = pre_model(s, -1.0);
    o.require(p.conjugation_residual < 1e-6, fmt("pre-model residual %.2e", p.conjugation_residual));
    auto cp = cowen_pommerenke_bound(s, {-1.0}, 1.0);
    o.require(cp.applicable && cp.holds, fmt("Cowen-Pommerenke %.4f <= %.4f", cp.lhs, cp.rhs));
  });

  criterion(10, "Common repelling point forces semigroup element", 0, [](Outcome& o) {
    const auto& s = catalog::semigroup("strip-minus-slits");
    MapDescriptor phi = MapDescriptor::semigroup_element(s, 1.3);
    auto has = [](const std::vector<BRFPRecord>& v) {
      for (const auto& r : v)
        if (std::abs(r.sigma + 1.0) < 1e-6 && r.regular) return true;
      return false;
    };
    o.require(has(brfp_scan(phi, 256)) && has(brfp_scan(MapDescriptor::semigroup_element(s, 1.0), 256)),
              "common sigma = -1");
    auto ac = affinity_constant(s.koenigs(), phi);
    o.require(std::abs(ac.c - 1.3) < 1e-6, fmt("|c-1.3| %.2e", std::abs(ac.c - 1.3)));
    o.require(ac.residual < 1e-8, fmt("residual %.2e", ac.residual));
  });

  criterion(11, "Elliptic centralizer", 0, [](Outcome& o) {
    const auto& s = catalog::semigroup("elliptic");
    auto r = elliptic_centralizer_check(s, elem("elliptic", 0.5));
    double dc = std::abs(r.c - std::pow(2.0, -0.5));
    o.require(dc < 1e-9, fmt("|c - 2^-1/2| %.2e", dc));
    o.require(r.residual < 1e-9, fmt("residual %.2e", r.residual));
    auto d = catalog::rotation_counter_demo();
    o.require(d.commutator_half_at > 1e-6, fmt("rotation commutator at 0.5: %.4f", d.commutator_half_at));
  });

  criterion(12, "Dual-number derivatives", 0, [](Outcome& o) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-5;
    int checked = 0;
    double worst = 0.0;
    for (int trial = 0; checked < 200 && trial < 5000; ++trial) {
      auto e = testing_support::random_tree(rng, 6);
      cplx z(u(rng), u(rng));
      try {
        auto d = formula::eval_dual(e, z);
        cplx fd = (formula::eval(e, z + h) - formula::eval(e, z - h)) / (2 * h);
        cplx fdi = (formula::eval(e, z + cplx(0, h)) - formula::eval(e, z - cplx(0, h))) / cplx(0, 2 * h);
        if (!std::isfinite(std::abs(d.deriv)) || std::abs(d.deriv) > 1e6) continue;
        if (std::abs(fd - fdi) > 1e-4 * (1 + std::abs(fd))) continue;
        ++checked;
        worst = std::max(worst, std::abs(d.deriv - fd) / (1 + std::abs(d.deriv)));
      } catch (const Error&) {
      }
    }
    o.require(checked == 200, fmt("%g pairs", checked));
    o.require(worst < 1e-6, fmt("max relative error %.2e", worst));
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
