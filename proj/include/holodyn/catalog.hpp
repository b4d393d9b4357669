#pragma once

/**
 * @file catalog.hpp
 * @brief Closed-form example families and the comb domain demo.
 *
 * Entries:
 *   mobius-hyperbolic       group of (2z+1)/(z+2), h = log((1+z)/(1-z)) / log 3
 *   parabolic-automorphism  h = i(1+z)/(1-z), translations of the upper half-plane
 *   koebe-zero-step         h = z/(1-z)^2, Omega = C minus (-inf, -1/4]
 *   strip-minus-slits       H = L + e^L, L = 2 log((1+z)/(1-z))
 *   phs-halfplane           w + i + 1/(w+1) on the right half-plane
 *   elliptic                h = z/(1-z) with h o psi_t = 2^{-t} h
 *   comb-model              C minus the rays {x + ip : x <= 0}, p integer
 */

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "centralizer.hpp"
#include "core.hpp"
#include "koenigs.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "semigroup.hpp"

namespace holodyn::catalog {

struct PetalInfo {
  int label;
  bool hyperbolic;
  cplx alpha;
  std::optional<std::pair<double, double>> strip;  // Im h over the petal
};

struct Metadata {
  cplx dw_point;
  MapKind kind;
  cplx multiplier;
  std::string koenigs_formula;
  std::string omega;
  std::string base_space;
  std::vector<PetalInfo> petals;
  std::string provenance;
};

struct CatalogEntry {
  std::string name;
  std::optional<SemigroupSpec> semigroup;
  std::optional<MapDescriptor> map;  // the generator psi_1 or the map itself
  Metadata meta;
  bool model_level = false;
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"mobius-hyperbolic", "parabolic-automorphism", "koebe-zero-step",
                                             "strip-minus-slits", "phs-halfplane",         "elliptic",
                                             "comb-model"};
  return n;
}

namespace detail {

inline double log3() { return std::log(3.0); }

inline CatalogEntry mobius_hyperbolic() {
  const double half = kPi / (2.0 * log3());
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "log((1+z)/(1-z))/log(3)";
  cfg.inverse_text = "(exp(log(3)*z)-1)/(exp(log(3)*z)+1)";
  cfg.base = BaseSpace::strip(-half, half);
  auto in_strip = [half](cplx w) { return std::abs(w.imag()) < half; };
  cfg.omega = {"strip", true, in_strip, in_strip, [in_strip](cplx w) -> std::optional<int> {
                 if (in_strip(w)) return 0;
                 return std::nullopt;
               }};
  auto s = SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "mobius-hyperbolic");
  CatalogEntry e{"mobius-hyperbolic", s, MapDescriptor::mobius(MobiusMap(2, 1, 1, 2)), {}};
  e.meta = {1.0, MapKind::hyperbolic, 1.0 / 3.0, cfg.forward_text, "strip |Im w| < pi/(2 log 3)", "strip",
            {{0, true, -1.0, std::make_pair(-half, half)}},
            "hyperbolic automorphism group; strip width pi/|log(1/3)|"};
  return e;
}

inline CatalogEntry parabolic_automorphism() {
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "i*(1+z)/(1-z)";
  cfg.inverse_text = "(z-i)/(z+i)";
  cfg.base = BaseSpace::upper();
  auto upper = [](cplx w) { return w.imag() > 0.0; };
  cfg.omega = {"upper-half-plane", true, upper, upper, [upper](cplx w) -> std::optional<int> {
                 if (upper(w)) return 0;
                 return std::nullopt;
               }};
  auto s = SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "parabolic-automorphism");
  MapDescriptor psi1 =
      MapDescriptor::conjugate(cayley_upper(), MapDescriptor::formula("z+1", Domain::upper_half_plane));
  CatalogEntry e{"parabolic-automorphism", s, psi1, {}};
  e.meta = {1.0, MapKind::parabolic_positive_step, 1.0, cfg.forward_text, "Im w > 0", "upper-half-plane",
            {{0, false, 1.0, std::nullopt}}, "Cayley conjugate of w -> w + t on the upper half-plane"};
  return e;
}

inline CatalogEntry koebe() {
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "z/(1-z)^2";
  cfg.inverse_text = "2*z/(2*z+1+sqrt(1+4*z))";
  cfg.base = BaseSpace::plane();
  cfg.omega = {"plane minus (-inf, -1/4]", true,
               [](cplx w) { return !(w.imag() == 0.0 && w.real() <= -0.25); },
               [](cplx w) { return w.imag() != 0.0; },
               [](cplx w) -> std::optional<int> {
                 if (w.imag() > 0.0) return 1;
                 if (w.imag() < 0.0) return -1;
                 return std::nullopt;
               }};
  auto s = SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "koebe-zero-step");
  CatalogEntry e{"koebe-zero-step", s, MapDescriptor::semigroup_element(s, 1.0), {}};
  e.meta = {1.0, MapKind::parabolic_zero_step, 1.0, cfg.forward_text, "C \\ (-inf, -1/4]", "plane",
            {{1, false, 1.0, std::nullopt}, {-1, false, 1.0, std::nullopt}},
            "Koebe function; two parabolic petals Im h > 0 and Im h < 0"};
  return e;
}

inline CatalogEntry strip_minus_slits() {
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "2*log((1+z)/(1-z))+((1+z)/(1-z))^2";
  cfg.chart = NewtonChart{formula::parse("2*log((1+z)/(1-z))"), formula::parse("(exp(z/2)-1)/(exp(z/2)+1)"),
                          formula::parse("z+exp(z)"), [](cplx u) { return std::abs(u.imag()) < kPi; }};
  cfg.seeds = {formula::parse("z"), formula::parse("log(z)")};
  cfg.base = BaseSpace::plane();
  auto on_ray = [](cplx w) { return std::abs(w.imag()) == kPi && w.real() <= -1.0; };
  cfg.omega = {"plane minus (-inf, -1] +- i pi", true, [on_ray](cplx w) { return !on_ray(w); },
               [](cplx w) { return std::abs(w.imag()) != kPi; },
               [](cplx w) -> std::optional<int> {
                 double y = w.imag();
                 if (std::abs(y) == kPi) return std::nullopt;
                 return y > kPi ? 1 : (y < -kPi ? -1 : 0);
               }};
  auto s = SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "strip-minus-slits");
  CatalogEntry e{"strip-minus-slits", s, MapDescriptor::semigroup_element(s, 1.0), {}};
  e.meta = {1.0, MapKind::parabolic_zero_step, 1.0, cfg.forward_text, "C \\ ((-inf, -1] +- i pi)", "plane",
            {{0, true, -1.0, std::make_pair(-kPi, kPi)}, {1, false, 1.0, std::nullopt}, {-1, false, 1.0, std::nullopt}},
            "H = s o L with s(u) = u + e^u univalent on |Im u| < pi; hyperbolic petal at -1"};
  return e;
}

inline CatalogEntry phs_halfplane() {
  MapDescriptor f = MapDescriptor::formula("z+i+1/(z+1)", Domain::right_half_plane);
  CatalogEntry e{"phs-halfplane", std::nullopt, MapDescriptor::conjugate(cayley(1.0), f), {}};
  e.meta = {1.0, MapKind::parabolic_positive_step, 1.0, "Pommerenke normalized iterates", "sampled",
            "lower-half-plane", {}, "Cayley conjugate of w + i + 1/(w+1) on the right half-plane"};
  return e;
}

inline CatalogEntry elliptic() {
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "z/(1-z)";
  cfg.inverse_text = "z/(1+z)";
  cfg.base = BaseSpace::plane();
  cfg.omega = {"Re w > -1/2", true, [](cplx w) { return w.real() > -0.5; }, {}, {}};
  auto s = SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "elliptic", ModelKind::dilation,
                                       -std::log(2.0));
  CatalogEntry e{"elliptic", s, MapDescriptor::semigroup_element(s, 1.0), {}};
  e.meta = {0.0, MapKind::elliptic, 0.5, cfg.forward_text, "Re w > -1/2", "plane", {},
            "psi_t(z) = 2^-t z/(1 - z + 2^-t z); psi_1(z) = z/(2-z)"};
  return e;
}

inline CatalogEntry comb() {
  CatalogEntry e{"comb-model", std::nullopt, std::nullopt, {}, true};
  e.meta = {0.0, MapKind::parabolic_zero_step, 1.0, "model level only", "C \\ {x + ip : x <= 0, p in Z}",
            "plane", {}, "translation semigroup w + t on the comb domain; Psi(w) = w + i"};
  return e;
}

inline void audit(const CatalogEntry& e) {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::build_audit_failed, e.name + ": " + what);
  };
  if (!e.semigroup) return;
  const SemigroupSpec& s = *e.semigroup;
  std::vector<cplx> grid = disc_grid(64, 0.9);
  MapDescriptor psi1 = MapDescriptor::semigroup_element(s, 1.0);
  double r = s.model_kind() == ModelKind::translation
                 ? abel_residual(s.koenigs(), psi1, s.rate(), grid)
                 : schroeder_residual(s.koenigs(), psi1, std::exp(s.rate()), grid);
  if (r > 1e-9) fail("Abel residual " + std::to_string(r));
  for (int k = 0; k < 512; ++k) {
    cplx z = std::polar(0.999, 2.0 * kPi * (k + 0.5) / 512.0);
    cplx w = e.map ? (*e.map)(z) : psi1(z);
    if (!(std::abs(w) < 1.0)) fail("self-map audit at angle index " + std::to_string(k));
  }
}

inline void audit_strip_map() {
  auto s = [](cplx u) { return u + std::exp(u); };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> X(-8.0, 4.0), Y(-kPi, kPi);
  for (int k = 0; k < 10000; ++k) {
    cplx a(X(rng), Y(rng)), b(X(rng), Y(rng));
    if (std::abs(s(a) - s(b)) < 1e-9 && std::abs(a - b) >= 1e-7)
      throw Error(Errc::build_audit_failed, "strip-minus-slits: s(u) = u + e^u not injective on samples");
    cplx w = s(a);
    if (std::abs(std::abs(w.imag()) - kPi) < 1e-12 && w.real() <= -1.0)
      throw Error(Errc::build_audit_failed, "strip-minus-slits: interior sample maps onto a ray");
  }
  for (double x = -20.0; x <= 5.0; x += 0.25)
    for (double sign : {-1.0, 1.0}) {
      cplx w = s(cplx(x, sign * kPi));
      if (std::abs(w.imag() - sign * kPi) > 1e-12 || w.real() > -1.0 + 1e-12)
        throw Error(Errc::build_audit_failed, "strip-minus-slits: boundary line misses the ray");
    }
}

}  // namespace detail

/// Builds (once) and returns the named entry; audits run on first build.
inline const CatalogEntry& catalog_build(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, CatalogEntry> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  CatalogEntry e;
  if (name == "mobius-hyperbolic") e = detail::mobius_hyperbolic();
  else if (name == "parabolic-automorphism") e = detail::parabolic_automorphism();
  else if (name == "koebe-zero-step") e = detail::koebe();
  else if (name == "strip-minus-slits") {
    detail::audit_strip_map();
    e = detail::strip_minus_slits();
  } else if (name == "phs-halfplane") e = detail::phs_halfplane();
  else if (name == "elliptic") e = detail::elliptic();
  else if (name == "comb-model") e = detail::comb();
  else throw Error(Errc::unknown_entry, "no catalog entry named '" + name + "'");
  detail::audit(e);
  return cache.emplace(name, std::move(e)).first->second;
}

inline const SemigroupSpec& semigroup(const std::string& name) {
  const CatalogEntry& e = catalog_build(name);
  if (!e.semigroup) throw Error(Errc::unknown_entry, "'" + name + "' has no semigroup");
  return *e.semigroup;
}

// ---------------------------------------------------------------------------
// The positive-step half-plane example

inline const MapDescriptor& phs_half_plane_map() {
  static const MapDescriptor f = MapDescriptor::formula("z+i+1/(z+1)", Domain::right_half_plane);
  return f;
}

/// Pommerenke model of the phs-halfplane entry (built once per w0).
inline const PommerenkeModel& phs_model(cplx w0 = 1.0) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, PommerenkeModel> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(w0.real(), w0.imag());
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  PommerenkeOptions opt;
  opt.verify_class = false;
  return cache.emplace(key, pommerenke_koenigs(phs_half_plane_map(), w0, opt)).first->second;
}

/// Disc-level Koenigs map of the phs-halfplane entry, h o phi = h + 1.
inline KoenigsPtr phs_koenigs(cplx w0 = 1.0) { return phs_model(w0).disc_koenigs(cayley(1.0)); }

// ---------------------------------------------------------------------------
// Rotation counter-example for the elliptic case

struct RotationDemo {
  double commutator_psi1;      // phi vs z -> -z on the standard grid
  double commutator_half_at;   // |phi(iz) - i phi(z)| at z = 0.5
  cplx z;
};

inline SemigroupSpec rotation_semigroup() {
  FormulaKoenigsConfig cfg;
  cfg.forward_text = "z";
  cfg.inverse_text = "z";
  cfg.base = BaseSpace::disc();
  cfg.omega = {"disc", true, [](cplx w) { return std::norm(w) < 1.0; }, {}, {}};
  return SemigroupSpec::from_koenigs(std::make_shared<FormulaKoenigs>(cfg), "rotation", ModelKind::dilation,
                                     cplx(0.0, kPi));
}

inline RotationDemo rotation_counter_demo() {
  SemigroupSpec s = rotation_semigroup();
  MapDescriptor phi = MapDescriptor::formula("z*(1+z^2)/2");
  RotationDemo d;
  d.z = 0.5;
  d.commutator_psi1 = commutator_residual(phi, MapDescriptor::semigroup_element(s, 1.0));
  MapDescriptor half = MapDescriptor::semigroup_element(s, 0.5);
  d.commutator_half_at = std::abs(phi(half(d.z)) - half(phi(d.z)));
  return d;
}

// ---------------------------------------------------------------------------
// Comb domain (model level)

struct CombDomain {
  static bool on_ray(cplx w) { return w.imag() == std::floor(w.imag()) && w.real() <= 0.0; }
  static bool contains(cplx w) { return !on_ray(w); }
  /// w - t stays in the domain for every t >= 0.
  static bool backward_invariant(cplx w) { return w.imag() != std::floor(w.imag()); }
  /// Petal S(p, p+1) containing w.
  static std::optional<int> petal_label(cplx w) {
    if (!backward_invariant(w)) return std::nullopt;
    return static_cast<int>(std::floor(w.imag()));
  }
};

struct CascadeRow {
  int petal;         // S(p, p+1)
  cplx witness;
  int image_petal;   // petal of Psi(witness)
  double alpha_im;   // alpha-analogue -inf + i(p + 1/2)
};

struct CombDemoReport {
  std::size_t samples = 0;
  std::size_t forward_violations = 0;  // w in Omega, w + t not in Omega
  bool ray_logic_forward = false;
  std::size_t shift_mismatches = 0;    // membership of w vs w + i and w - i
  bool shift_automorphism = false;
  cplx witness;
  bool witness_in_omega = false;
  bool witness_image_in_omega = true;
  std::vector<CascadeRow> cascade;
  bool cascade_ok = false;
  // t -> whether w + it preserves Omega (a counter-sample is searched for).
  std::vector<std::pair<double, bool>> vertical_shift_preserves;
};

inline CombDemoReport comb_demo(int cascade_rows = 6) {
  CombDemoReport r;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> X(-5.0, 5.0), Y(-5.0, 5.0);
  std::uniform_int_distribution<int> P(-5, 5);
  std::vector<cplx> samples;
  for (int k = 0; k < 10000; ++k) {
    // A third of the samples sit on lattice lines so that rays are exercised.
    double y = (k % 3 == 0) ? double(P(rng)) : Y(rng);
    samples.emplace_back(X(rng), y);
  }
  r.samples = samples.size();
  const double ts[] = {0.25, 0.5, 1.0, 2.0, 7.5};
  for (cplx w : samples) {
    if (!CombDomain::contains(w)) continue;
    for (double t : ts)
      if (!CombDomain::contains(w + t)) ++r.forward_violations;
  }
  // Rays point left: a left shift of a ray is contained in the same ray.
  r.ray_logic_forward = true;
  for (int p = -50; p <= 50; ++p)
    for (double x : {0.0, -1.0, -1e6})
      for (double t : ts) r.ray_logic_forward = r.ray_logic_forward && CombDomain::on_ray(cplx(x - t, p));
  for (cplx w : samples) {
    bool in = CombDomain::contains(w);
    if (in != CombDomain::contains(w + kI)) ++r.shift_mismatches;
    if (in != CombDomain::contains(w - kI)) ++r.shift_mismatches;
  }
  r.shift_automorphism = r.shift_mismatches == 0;
  r.witness = cplx(-1.0, 0.5);
  r.witness_in_omega = CombDomain::contains(r.witness);
  r.witness_image_in_omega = CombDomain::contains(r.witness + cplx(0.0, 0.5));
  r.cascade_ok = true;
  for (int p = 0; p < cascade_rows; ++p) {
    cplx w(-1.0, p + 0.5);
    auto img = CombDomain::petal_label(w + kI);
    CascadeRow row{p, w, img.value_or(std::numeric_limits<int>::min()), p + 0.5};
    r.cascade_ok = r.cascade_ok && img && *img == p + 1;
    r.cascade.push_back(row);
  }
  for (double t : {0.5, std::sqrt(2.0) - 1.0, 1.0, 2.0}) {
    bool preserves = true;
    for (cplx w : samples)
      if (CombDomain::contains(w) && !CombDomain::contains(w + cplx(0.0, t))) {
        preserves = false;
        break;
      }
    // Targeted probe: points just below a ray at distance t.
    for (int p = -3; p <= 3 && preserves; ++p)
      if (!CombDomain::contains(cplx(-1.0, p) + cplx(0.0, t)) && CombDomain::contains(cplx(-1.0, p)))
        preserves = false;
    for (int p = -3; p <= 3 && preserves; ++p) {
      cplx w(-1.0, p - t);
      if (CombDomain::contains(w) && !CombDomain::contains(w + cplx(0.0, t))) preserves = false;
    }
    r.vertical_shift_preserves.emplace_back(t, preserves);
  }
  return r;
}

}  // namespace holodyn::catalog
