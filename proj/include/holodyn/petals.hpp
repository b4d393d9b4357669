#pragma once

/**
 * @file petals.hpp
 * @brief Petals of a semigroup: membership, alpha-points, images under
 * commuting maps, cascades, isogonality, pre-models, spectral values and
 * the Cowen-Pommerenke sum.
 *
 * A petal is a connected component of the interior of W = intersection of
 * psi_t(D). It is identified by its alpha-point when hyperbolic and by the
 * Omega predicate's label when parabolic.
 */

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "centralizer.hpp"
#include "core.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "numerics.hpp"
#include "semigroup.hpp"

namespace holodyn {

enum class PetalKind { hyperbolic, parabolic };

inline const char* petal_kind_name(PetalKind k) { return k == PetalKind::hyperbolic ? "hyperbolic" : "parabolic"; }

using Strip = std::pair<double, double>;

// ---------------------------------------------------------------------------
// Membership

struct MembershipReport {
  bool member = false;
  bool exact = false;  // decided by an exact predicate rather than a t-grid
  std::optional<int> label;
};

inline MembershipReport petal_membership_report(const SemigroupSpec& s, cplx z) {
  if (!in_domain(Domain::disc, z)) throw Error(Errc::outside_domain, "membership point outside the disc");
  const OmegaPredicate& om = s.koenigs().omega();
  cplx w = s.koenigs()(z);
  if (om.exact && om.backward_invariant) {
    MembershipReport r{om.backward_invariant(w), true, std::nullopt};
    if (r.member && om.petal_label) r.label = om.petal_label(w);
    return r;
  }
  if (!om.contains) throw Error(Errc::predicate_unavailable, "semigroup has no Omega predicate");
  for (double t = 0.0; t <= 50.0; t += 1.0 / 16.0)
    if (!om.contains(s.model_step(w, -t))) return {false, false, std::nullopt};
  return {true, false, std::nullopt};
}

inline bool petal_membership(const SemigroupSpec& s, cplx z) { return petal_membership_report(s, z).member; }

// ---------------------------------------------------------------------------
// Denjoy-Wolff point and alpha-points

namespace detail {

/// Boundary limit of an orbit read off the radial projections.
inline cplx project_limit(const std::vector<cplx>& orbit) {
  cplx last = orbit.back();
  if (1.0 - std::abs(last) < 1e-10 || orbit.size() < 3) return last / std::abs(last);
  std::size_t n = orbit.size();
  cplx p0 = orbit[n - 3] / std::abs(orbit[n - 3]);
  cplx p1 = orbit[n - 2] / std::abs(orbit[n - 2]);
  cplx p2 = last / std::abs(last);
  cplx a = aitken(p0, p1, p2);
  return a / std::abs(a);
}

}  // namespace detail

/// Denjoy-Wolff point of the semigroup: lim psi_t(0) along t = 2^k.
inline cplx semigroup_dw_point(const SemigroupSpec& s) {
  if (s.model_kind() == ModelKind::dilation) return s.koenigs().invert(0.0);
  std::vector<cplx> orbit;
  for (int k = 0; k <= 40; ++k) {
    cplx z;
    try {
      z = s.flow(std::ldexp(1.0, k), 0.0);
    } catch (const Error&) {
      if (orbit.size() < 3) throw;
      break;
    }
    orbit.push_back(z);
    if (1.0 - std::abs(z) < 1e-13) break;
  }
  return detail::project_limit(orbit);
}

struct AlphaPoint {
  cplx sigma;
  PetalKind kind;
  cplx tau;
  std::vector<cplx> orbit;  // psi_{-2^k}(z0)
};

/// Follows the backward orbit at t = 2^k and projects it to the boundary.
inline AlphaPoint alpha_point(const SemigroupSpec& s, cplx z0, std::optional<cplx> tau = std::nullopt,
                              int k_max = 20) {
  if (!petal_membership(s, z0)) throw Error(Errc::outside_omega, "seed is not in a petal");
  cplx t_dw = tau ? *tau : semigroup_dw_point(s);
  std::vector<cplx> orbit;
  // Past this distance to the circle a failed inversion means the preimage
  // is no longer representable, not that the orbit left the petal.
  auto near_boundary = [&] { return orbit.size() >= 3 && 1.0 - std::abs(orbit.back()) < 1e-6; };
  for (int k = 0; k <= k_max; ++k) {
    std::optional<cplx> z;
    try {
      z = s.backward_flow(std::ldexp(1.0, k), z0);
    } catch (const Error& e) {
      if (e.code() != Errc::inversion_failed || !near_boundary()) throw;
      break;
    }
    if (!z && near_boundary()) break;
    if (!z) throw Error(Errc::backward_exit, "backward orbit left Omega inside a petal");
    orbit.push_back(*z);
    if (1.0 - std::abs(*z) < 1e-13) break;
  }
  AlphaPoint a;
  a.sigma = detail::project_limit(orbit);
  a.tau = t_dw;
  a.kind = std::abs(a.sigma - t_dw) < 1e-6 ? PetalKind::parabolic : PetalKind::hyperbolic;
  a.orbit = std::move(orbit);
  return a;
}

// ---------------------------------------------------------------------------
// Spectral value

inline double spectral_value(const SemigroupSpec& s, cplx sigma) {
  BoundaryMultiplier m = boundary_multiplier_report(MapDescriptor::semigroup_element(s, 1.0), sigma);
  if (m.infinite) throw Error(Errc::not_repelling, "infinite angular derivative");
  if (!(m.value > 1.0 + 1e-9)) throw Error(Errc::not_repelling, "boundary multiplier is not > 1");
  return std::log(m.value);
}

/// Spectral value implied by the width of the strip h(petal).
inline double strip_spectral_value(const Strip& ab) { return kPi / (ab.second - ab.first); }

// ---------------------------------------------------------------------------
// Petal reports

struct PetalReport {
  std::optional<int> petal_id;
  PetalKind kind;
  cplx alpha;
  std::optional<double> spectral;
  std::optional<Strip> strip;
  std::vector<cplx> witnesses;
  bool exact_membership = false;
};

inline PetalReport petal_report(const SemigroupSpec& s, cplx z0, std::optional<cplx> tau = std::nullopt) {
  MembershipReport m = petal_membership_report(s, z0);
  if (!m.member) throw Error(Errc::outside_omega, "seed is not in a petal");
  AlphaPoint a = alpha_point(s, z0, tau);
  PetalReport r{m.label, a.kind, a.sigma, std::nullopt, std::nullopt, {z0}, m.exact};
  if (a.kind == PetalKind::hyperbolic) {
    try {
      r.spectral = spectral_value(s, a.sigma);
    } catch (const Error&) {
    }
  }
  return r;
}

inline bool same_petal(const PetalReport& a, const PetalReport& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PetalKind::hyperbolic) return std::abs(a.alpha - b.alpha) < 1e-6;
  if (a.petal_id && b.petal_id) return *a.petal_id == *b.petal_id;
  return std::abs(a.alpha - b.alpha) < 1e-6;
}

struct PetalSurvey {
  std::vector<PetalReport> petals;
  std::vector<cplx> rejected;  // seeds outside every petal
};

/// Groups seeds into petal classes.
inline PetalSurvey petal_survey(const SemigroupSpec& s, const std::vector<cplx>& seeds,
                                std::optional<cplx> tau = std::nullopt) {
  cplx t_dw = tau ? *tau : semigroup_dw_point(s);
  PetalSurvey out;
  for (cplx z : seeds) {
    if (!petal_membership(s, z)) {
      out.rejected.push_back(z);
      continue;
    }
    PetalReport r = petal_report(s, z, t_dw);
    bool merged = false;
    for (auto& p : out.petals)
      if (same_petal(p, r)) {
        p.witnesses.push_back(z);
        merged = true;
        break;
      }
    if (!merged) out.petals.push_back(r);
  }
  return out;
}

/// (inf, sup) of Im h over sampled points of the petal containing z0.
inline Strip fit_petal_strip(const SemigroupSpec& s, cplx z0, std::size_t n = 10000, unsigned seed = 1) {
  MembershipReport ref = petal_membership_report(s, z0);
  if (!ref.member || !ref.label) throw Error(Errc::strip_unknown, "no labelled petal at the witness");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> R(0.0, 1.0), A(0.0, 2.0 * kPi);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < n; ++k) {
    cplx z = std::polar(std::sqrt(R(rng)) * 0.999, A(rng));
    MembershipReport m = petal_membership_report(s, z);
    if (!m.member || m.label != ref.label) continue;
    double y = s.koenigs()(z).imag();
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  if (!(lo < hi)) throw Error(Errc::strip_unknown, "too few petal samples");
  return {lo - 1e-3, hi + 1e-3};
}

// ---------------------------------------------------------------------------
// Isogonality

struct IsogonalityReport {
  bool isogonal = false;
  cplx contact;
  std::array<double, 3> angles{0.0, kPi / 4.0, -kPi / 4.0};  // ray directions
  std::array<std::vector<double>, 3> args;                      // Arg quotient along each ray
  double disagreement = 0.0;
};

/// Arg[(1 - conj(m(zeta)) m(z)) / (1 - conj(zeta) z)] along the radius and
/// two Stolz rays at +-pi/4, r = 1 - 2^-k, k <= 22.
inline IsogonalityReport isogonality_test(const MapDescriptor& m, cplx zeta, double tol = 1e-2, int k_max = 22) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) throw Error(Errc::invalid_argument, "zeta must be unimodular");
  std::vector<cplx> radial;
  for (int k = k_max - 2; k <= k_max; ++k) radial.push_back(m((1.0 - std::ldexp(1.0, -k)) * zeta));
  cplx c = aitken(radial[0], radial[1], radial[2]);
  if (!std::isfinite(c.real()) || std::abs(std::abs(c) - 1.0) > 1e-3)
    throw Error(Errc::no_contact_point, "radial limit is not on the unit circle");
  IsogonalityReport r;
  r.contact = c / std::abs(c);
  for (int j = 0; j < 3; ++j) {
    cplx dir = std::polar(1.0, r.angles[j]);
    for (int k = 4; k <= k_max; ++k) {
      double eps = std::ldexp(1.0, -k);
      cplx z = zeta * (1.0 - eps * dir);
      r.args[j].push_back(std::arg((1.0 - std::conj(r.contact) * m(z)) / (eps * dir)));
    }
  }
  r.isogonal = true;
  for (int j = 0; j < 3; ++j) {
    r.isogonal = r.isogonal && std::abs(r.args[j].back()) < tol;
    for (int l = 0; l < j; ++l)
      r.disagreement = std::max(r.disagreement, std::abs(r.args[j].back() - r.args[l].back()));
  }
  r.isogonal = r.isogonal && r.disagreement < tol;
  return r;
}

/// Arg[(1 - conj(sigma) Psi(w)) / w] along three rays into 0 in the right half-plane.
inline std::array<double, 3> half_plane_isogonality(const std::function<cplx(cplx)>& Psi, cplx sigma,
                                                    int k_max = 22) {
  std::array<double, 3> out{};
  const double angles[3] = {0.0, kPi / 4.0, -kPi / 4.0};
  for (int j = 0; j < 3; ++j) {
    cplx w = std::polar(std::ldexp(1.0, -k_max), angles[j]);
    out[j] = std::arg((1.0 - std::conj(sigma) * Psi(w)) / w);
  }
  return out;
}

/// lim_{x -> 0+} T(beta x)/T(x) for a self-map T of the right half-plane fixing 0.
inline Extrapolation isogonal_ratio_limit(const std::function<cplx(cplx)>& T, double beta, int k_min = 4,
                                          int k_max = 30) {
  std::vector<cplx> q;
  for (int k = k_min; k <= k_max; ++k) {
    double x = std::ldexp(1.0, -k);
    q.push_back(T(beta * x) / T(x));
  }
  return richardson(q);
}

// ---------------------------------------------------------------------------
// Pre-models

struct PreModel {
  cplx sigma;
  double lambda = 0.0;   // pi/(b - a); equals G'(sigma)
  MapDescriptor Psi;     // right half-plane -> petal
  double s_shift = 0.0;
  Strip strip;
  bool strip_fitted = false;
  double conjugation_residual = 0.0;  // sup |Psi(e^{lambda t} w) - psi_t(Psi(w))|
  std::array<double, 3> isogonality_args{};
  bool isogonal = false;
};

inline PreModel pre_model(const SemigroupSpec& s, cplx sigma, std::optional<Strip> strip = std::nullopt,
                          double s_shift = 0.0) {
  BoundaryMultiplier bm = boundary_multiplier_report(MapDescriptor::semigroup_element(s, 1.0), sigma);
  if (bm.infinite || !(bm.value > 1.0 + 1e-9)) throw Error(Errc::not_repelling, "sigma is not repelling");
  PreModel p;
  p.sigma = sigma;
  p.s_shift = s_shift;
  if (strip) {
    p.strip = *strip;
  } else {
    p.strip = fit_petal_strip(s, 0.9 * sigma);
    p.strip_fitted = true;
  }
  auto [a, b] = p.strip;
  p.lambda = kPi / (b - a);
  using formula::Expr;
  using formula::Op;
  Expr inner = Expr::binary(Op::add, Expr::binary(Op::mul, Expr::constant((b - a) / kPi), Expr::unary(Op::log, Expr::var())),
                            Expr::constant(cplx(s_shift, (b + a) / 2.0)));
  p.Psi = MapDescriptor::compose(
      {MapDescriptor::koenigs_inverse(s.koenigs_ptr()), MapDescriptor::formula(inner, Domain::right_half_plane)});
  const MapDescriptor& Psi = p.Psi;
  for (cplx w : {cplx(1.0, 0.0), cplx(0.5, 0.5), cplx(0.2, -0.7), cplx(2.0, 1.0), cplx(0.05, 0.01), cplx(1.0, -3.0)})
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
      cplx lhs = Psi(std::exp(p.lambda * t) * w);
      cplx rhs = s.flow(t, Psi(w));
      p.conjugation_residual = std::max(p.conjugation_residual, std::abs(lhs - rhs));
    }
  p.isogonality_args = half_plane_isogonality([&](cplx w) { return Psi(w); }, sigma);
  p.isogonal = true;
  for (double x : p.isogonality_args) p.isogonal = p.isogonal && std::abs(x) < 1e-2;
  return p;
}

// ---------------------------------------------------------------------------
// Cowen-Pommerenke sum

struct CowenPommerenkeReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool applicable = true;        // false for automorphism groups
  std::vector<cplx> excluded;    // points with divergent multipliers
};

/// sum |tau - sigma|^2/(psi_1'(sigma) - 1) <= 2 Re(1/psi_1(0) - 1).
inline CowenPommerenkeReport cowen_pommerenke_bound(const SemigroupSpec& s, const std::vector<cplx>& sigmas,
                                                    std::optional<cplx> tau = std::nullopt) {
  CowenPommerenkeReport r;
  if (is_group(s)) {
    r.applicable = false;
    return r;
  }
  cplx t_dw = tau ? *tau : semigroup_dw_point(s);
  MapDescriptor psi1 = MapDescriptor::semigroup_element(s, 1.0);
  cplx p0 = psi1(0.0);
  if (std::abs(p0) < 1e-300) throw Error(Errc::invalid_argument, "psi_1(0) = 0");
  r.rhs = 2.0 * (1.0 / p0 - 1.0).real();
  for (cplx sg : sigmas) {
    BoundaryMultiplier m = boundary_multiplier_report(psi1, sg);
    if (m.infinite || !(m.value > 1.0)) {
      r.excluded.push_back(sg);
      continue;
    }
    r.lhs += std::norm(t_dw - sg) / (m.value - 1.0);
  }
  r.holds = r.lhs <= r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Images of petals under commuting maps

enum class PetalImageVerdict { same_petal, hyperbolic_target, parabolic_target };

inline const char* petal_image_verdict_name(PetalImageVerdict v) {
  switch (v) {
    case PetalImageVerdict::same_petal: return "same-petal";
    case PetalImageVerdict::hyperbolic_target: return "hyperbolic-target";
    case PetalImageVerdict::parabolic_target: return "parabolic-target";
  }
  return "";
}

struct PetalImageReport {
  PetalImageVerdict verdict;
  PetalReport source;
  PetalReport target;
  std::optional<cplx> t0;             // c with h o phi = h + c, same-petal case
  double affinity_residual = 0.0;
  std::optional<cplx> radial_limit;   // angular limit of phi at the source alpha-point
  bool irregular_contact = false;     // parabolic target and phi'(sigma) = infinity
  double commutator = 0.0;
};

inline PetalImageReport petal_image(const SemigroupSpec& s, const MapDescriptor& phi, cplx z0,
                                    std::optional<cplx> tau = std::nullopt) {
  MapDescriptor psi1 = MapDescriptor::semigroup_element(s, 1.0);
  double comm = commutator_residual(phi, psi1);
  if (!(comm < 1e-6)) throw Error(Errc::not_commuting, "phi does not commute with psi_1");
  cplx t_dw = tau ? *tau : semigroup_dw_point(s);
  PetalReport src = petal_report(s, z0, t_dw);
  cplx z1 = phi(z0);
  if (!petal_membership(s, z1)) throw Error(Errc::outside_omega, "image of the witness left every petal");
  PetalReport dst = petal_report(s, z1, t_dw);
  PetalImageReport r{PetalImageVerdict::same_petal, src, dst, std::nullopt, 0.0, std::nullopt, false, comm};
  if (same_petal(src, dst)) {
    AffinityConstant ac = affinity_constant(s.koenigs(), phi);
    r.t0 = ac.c;
    r.affinity_residual = ac.residual;
    return r;
  }
  if (dst.kind == PetalKind::hyperbolic) {
    r.verdict = PetalImageVerdict::hyperbolic_target;
    std::vector<cplx> q;
    for (int k = 10; k <= 26; k += 2) q.push_back(phi((1.0 - std::ldexp(1.0, -k)) * src.alpha));
    r.radial_limit = richardson(q).value;
    return r;
  }
  r.verdict = PetalImageVerdict::parabolic_target;
  try {
    r.irregular_contact = boundary_multiplier_report(phi, src.alpha).infinite;
  } catch (const Error&) {
    r.irregular_contact = true;
  }
  return r;
}

enum class CascadeCase { fixed_petal, finite, infinite };

inline const char* cascade_case_name(CascadeCase c) {
  switch (c) {
    case CascadeCase::fixed_petal: return "fixed-petal";
    case CascadeCase::finite: return "finite";
    case CascadeCase::infinite: return "infinite";
  }
  return "";
}

struct CascadeReport {
  CascadeCase kind = CascadeCase::fixed_petal;
  std::vector<PetalReport> petals;  // Delta_1, Delta_2, ...
  double min_separation = std::numeric_limits<double>::infinity();
  double tau_distance_trend = 0.0;  // |tau - sigma_n| at the last step
};

/// Iterates petal_image from the petal of z0 until a parabolic petal is hit,
/// the map fixes the petal, or n_max steps.
inline CascadeReport petal_cascade(const SemigroupSpec& s, const MapDescriptor& phi, cplx z0, int n_max = 16,
                                   std::optional<cplx> tau = std::nullopt) {
  cplx t_dw = tau ? *tau : semigroup_dw_point(s);
  CascadeReport out;
  cplx z = z0;
  for (int n = 0; n < n_max; ++n) {
    PetalImageReport step = petal_image(s, phi, z, t_dw);
    if (step.verdict == PetalImageVerdict::same_petal) {
      out.kind = n == 0 ? CascadeCase::fixed_petal : CascadeCase::finite;
      return out;
    }
    out.petals.push_back(step.target);
    for (std::size_t j = 0; j + 1 < out.petals.size(); ++j)
      out.min_separation = std::min(out.min_separation, std::abs(out.petals[j].alpha - step.target.alpha));
    out.tau_distance_trend = std::abs(t_dw - step.target.alpha);
    if (step.verdict == PetalImageVerdict::parabolic_target) {
      out.kind = CascadeCase::finite;
      return out;
    }
    z = phi(z);
  }
  out.kind = CascadeCase::infinite;
  return out;
}

// ---------------------------------------------------------------------------
// Omega audits

/// Searches for w in Omega with w + c outside Omega; such a c cannot come
/// from a self-map commuting with the whole semigroup.
inline std::optional<cplx> omega_shift_violation(const SemigroupSpec& s, cplx c, std::size_t n = 4000,
                                                 unsigned seed = 3) {
  const OmegaPredicate& om = s.koenigs().omega();
  if (!om.contains) throw Error(Errc::predicate_unavailable, "semigroup has no Omega predicate");
  std::vector<cplx> probes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> X(-10.0, 10.0), Y(-10.0, 10.0);
  for (std::size_t k = 0; k < n; ++k) probes.emplace_back(X(rng), Y(rng));
  // Points whose shift lands exactly on a sampled boundary point.
  for (std::size_t k = 0; k < n; ++k) {
    cplx b(X(rng), Y(rng));
    if (!om.contains(b)) probes.push_back(b - c);
  }
  for (double x = -10.0; x <= 10.0; x += 0.125)
    for (double y = -4.0; y <= 4.0; y += 0.125) {
      cplx b(x, y);
      if (!om.contains(b) || !om.contains(cplx(x, 0.0))) probes.push_back(b - c);
    }
  for (double x = -10.0; x <= 0.0; x += 0.25)
    for (double y : {0.0, kPi, -kPi}) probes.push_back(cplx(x, y) - c);
  for (cplx w : probes)
    if (om.contains(w) && !om.contains(w + c)) return w;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Comb model (model level)

struct ModelPetalImage {
  int source;
  int target;
  cplx witness;
  cplx image;
  PetalImageVerdict verdict;
};

/// Petal S(p, p+1) of the comb under Psi(w) = w + i.
inline ModelPetalImage comb_petal_image(int p) {
  cplx w(-1.0, p + 0.5);
  cplx img = w + kI;
  auto lbl = catalog::CombDomain::petal_label(img);
  if (!lbl) throw Error(Errc::outside_omega, "image left the backward-invariant set");
  return {p, *lbl, w, img, *lbl == p ? PetalImageVerdict::same_petal : PetalImageVerdict::hyperbolic_target};
}

struct ModelCascadeRow {
  int petal;
  double alpha_im;  // alpha-analogue -inf + i(p + 1/2)
};

inline std::vector<ModelCascadeRow> comb_cascade(int start = 0, int n = 8) {
  std::vector<ModelCascadeRow> rows{{start, start + 0.5}};
  int p = start;
  for (int k = 0; k < n; ++k) {
    p = comb_petal_image(p).target;
    rows.push_back({p, p + 0.5});
  }
  return rows;
}

struct SurjectivityWitness {
  cplx point;           // in the target petal
  cplx preimage;        // its only candidate preimage under Psi
  bool preimage_in_source = true;
};

/// Comb with rays only at p <= 1: S(0,1) is a strip petal and {Im w > 1} a
/// half-plane (parabolic-type) petal. Psi(w) = w + i maps the strip into the
/// half-plane without covering it.
inline SurjectivityWitness comb_surjectivity_witness() {
  auto in_strip = [](cplx w) { return w.imag() > 0.0 && w.imag() < 1.0; };
  SurjectivityWitness r;
  r.point = cplx(-1.0, 2.5);
  r.preimage = r.point - kI;
  r.preimage_in_source = in_strip(r.preimage);
  return r;
}

}  // namespace holodyn
