#pragma once

/**
 * @file centralizer.hpp
 * @brief Commuting maps: commutator residuals, affinity, the limit
 *        f = lim R(phi^n(z)) of the quotient R = (psi - id)/(phi - id),
 *        the constant c, and semigroup-level commutation checks.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "koenigs.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "numerics.hpp"

namespace holodyn {

inline double commutator_residual(const MapDescriptor& phi, const MapDescriptor& psi,
                                  const std::vector<cplx>& grid = disc_grid(128, 0.9)) {
  double r = 0.0;
  for (cplx z : grid) r = std::max(r, std::abs(phi(psi(z)) - psi(phi(z))));
  return r;
}

struct AffinityConstant {
  cplx c;
  double residual;
};

/// c = H(phi(z0)) - H(z0) and the sup of |H o phi - H - c| over the grid.
inline AffinityConstant affinity_constant(const KoenigsMap& H, const MapDescriptor& phi,
                                          const std::vector<cplx>& grid = disc_grid(128, 0.9),
                                          cplx z0 = 0.0) {
  cplx c = H(phi(z0)) - H(z0);
  return {c, abel_residual(H, phi, c, grid)};
}

// ---------------------------------------------------------------------------
// Charts at the Denjoy-Wolff point

namespace detail {

inline bool same_mobius(const MobiusMap& a, const MobiusMap& b) {
  auto d = [](const MobiusMap& x, const MobiusMap& y, double s) {
    return std::abs(x.a() - s * y.a()) + std::abs(x.b() - s * y.b()) + std::abs(x.c() - s * y.c()) +
           std::abs(x.d() - s * y.d());
  };
  return d(a, b, 1.0) < 1e-13 || d(a, b, -1.0) < 1e-13;
}

/// Whether C sends the disc onto the right half-plane with pole at tau.
inline bool is_half_plane_chart(const MobiusMap& C, cplx tau) {
  if (std::abs(C.c()) == 0.0) return false;
  cplx pole = -C.d() / C.c();
  if (std::abs(pole - tau) > 1e-6) return false;
  if (!(C(0.0).real() > 0.0)) return false;
  return std::abs(C(-pole).real()) < 1e-9;
}

inline std::optional<MobiusMap> descriptor_chart(const MapDescriptor& m, cplx tau) {
  if (auto* c = m.as<node::Conjugate>(); c && is_half_plane_chart(c->outer, tau)) return c->outer;
  if (auto* mc = m.as<node::ModelConjugate>())
    if (auto* ak = dynamic_cast<const AffineKoenigs*>(mc->koenigs.get());
        ak && ak->pre() && is_half_plane_chart(*ak->pre(), tau))
      return *ak->pre();
  if (auto* it = m.as<node::Iterate>()) return descriptor_chart(*it->base, tau);
  if (auto* cm = m.as<node::Compose>()) return descriptor_chart(cm->maps.front(), tau);
  return std::nullopt;
}

/// Chart form that is exact (no generic conjugation wrapper), if any.
inline std::optional<MapDescriptor> exact_chart_form(const MapDescriptor& m, const MobiusMap& C) {
  if (auto* c = m.as<node::Conjugate>(); c && same_mobius(c->outer, C)) return *c->inner;
  if (auto* mc = m.as<node::ModelConjugate>())
    if (auto* ak = dynamic_cast<const AffineKoenigs*>(mc->koenigs.get());
        ak && ak->pre() && same_mobius(*ak->pre(), C))
      return chart_form(m, C);
  if (auto* it = m.as<node::Iterate>()) {
    auto b = exact_chart_form(*it->base, C);
    if (b) return MapDescriptor::iterate(*b, it->n);
    return std::nullopt;
  }
  if (auto* cm = m.as<node::Compose>()) {
    std::vector<MapDescriptor> parts;
    for (const auto& p : cm->maps) {
      auto e = exact_chart_form(p, C);
      if (!e) return std::nullopt;
      parts.push_back(*e);
    }
    return MapDescriptor::compose(std::move(parts));
  }
  if (m.as<node::Mobius>() || m.as<node::Identity>()) return chart_form(m, C);
  return std::nullopt;
}

/// (psi(z) - z)/(phi(z) - z) written in the chart w = C(z).
inline cplx chart_quotient(const MobiusMap& Cinv, cplx w, cplx fw, cplx gw) {
  cplx num = (gw - w) * (Cinv.c() * fw + Cinv.d());
  cplx den = (fw - w) * (Cinv.c() * gw + Cinv.d());
  if (std::abs(den) == 0.0) throw Error(Errc::divergent_quotient, "phi fixes a sample point");
  return num / den;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The limit function f_{phi, psi}

struct FLimitOptions {
  unsigned n_max = 1u << 16;
  unsigned n_start = 16;
  double tol = 1e-6;         // sup change of the extrapolated samples between levels
  double tol_const = 1e-5;   // spread below which f is declared constant
  double commute_tol = 1e-6;
  bool verify_class = true;
};

struct AffinityReport {
  std::vector<std::pair<cplx, cplx>> f_samples;  // (z, f(z))
  unsigned n_used = 0;
  bool is_constant = false;
  double spread = 0.0;
  cplx c_estimate;
  std::vector<double> residual_history;
  double commutator = 0.0;
  bool converged = false;
  bool chart_exact = false;
};

inline double sample_spread(const std::vector<cplx>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) s = std::max(s, std::abs(v[i] - v[j]));
  return s;
}

inline AffinityReport f_limit(const MapDescriptor& phi, const MapDescriptor& psi,
                              const std::vector<cplx>& grid, const FLimitOptions& opt = {}) {
  cplx tau;
  if (opt.verify_class) {
    ClassificationReport rep = classify(phi);
    if (rep.kind != MapKind::parabolic_positive_step)
      throw Error(Errc::wrong_class, std::string("phi must be parabolic of positive step, got ") +
                                         map_kind_name(rep.kind));
    tau = rep.dw_point;
  } else {
    tau = denjoy_wolff(phi);
  }
  AffinityReport rep;
  double moved = 0.0;
  for (cplx z : grid) moved = std::max(moved, std::abs(psi(z) - z));
  if (moved < 1e-12) throw Error(Errc::is_identity, "psi is the identity on the grid");
  rep.commutator = commutator_residual(phi, psi, grid);
  if (rep.commutator > opt.commute_tol)
    throw Error(Errc::not_commuting, "commutator residual " + std::to_string(rep.commutator));

  MobiusMap C = detail::descriptor_chart(phi, tau).value_or(cayley(tau / std::abs(tau)));
  MobiusMap Cinv = C.inverse();
  auto f_exact = detail::exact_chart_form(phi, C);
  auto g_exact = detail::exact_chart_form(psi, C);
  rep.chart_exact = f_exact && g_exact;
  MapDescriptor f = f_exact ? *f_exact : chart_form(phi, C);
  MapDescriptor g = g_exact ? *g_exact : chart_form(psi, C);

  std::vector<cplx> w(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) w[j] = C(grid[j]);
  std::vector<std::vector<cplx>> seq(grid.size());
  std::vector<cplx> prev_est;
  unsigned n = 0;
  for (unsigned target = opt.n_start; target <= opt.n_max; target *= 2) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (unsigned k = n; k < target; ++k) w[j] = f(w[j]);
      seq[j].push_back(detail::chart_quotient(Cinv, w[j], f(w[j]), g(w[j])));
    }
    n = target;
    std::vector<cplx> est(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) est[j] = richardson_last(seq[j]);
    if (!prev_est.empty()) {
      double change = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) change = std::max(change, std::abs(est[j] - prev_est[j]));
      rep.residual_history.push_back(change);
      if (change < opt.tol) {
        rep.converged = true;
        prev_est = est;
        break;
      }
    }
    prev_est = est;
  }
  rep.n_used = n;
  cplx mean = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    rep.f_samples.emplace_back(grid[j], prev_est[j]);
    mean += prev_est[j];
  }
  rep.c_estimate = mean / double(grid.size());
  rep.spread = sample_spread(prev_est);
  rep.is_constant = rep.spread < opt.tol_const;
  return rep;
}

// ---------------------------------------------------------------------------
// Periodic extension and the univalence of g(w) = w + G(w)

struct InjectivityAudit {
  double min_ratio = std::numeric_limits<double>::infinity();  // min |g(a)-g(b)|/|a-b|
  std::pair<cplx, cplx> worst_pair;
  bool passes = false;
};

/// Pairwise separation ratios of g over the samples; fails when some pair
/// nearly collides relative to its source separation.
inline InjectivityAudit injectivity_audit(const std::vector<cplx>& w, const std::vector<cplx>& gw,
                                          double threshold = 1e-2) {
  InjectivityAudit a;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      double src = std::abs(w[i] - w[j]);
      if (src == 0.0) continue;
      double ratio = std::abs(gw[i] - gw[j]) / src;
      if (ratio < a.min_ratio) {
        a.min_ratio = ratio;
        a.worst_pair = {w[i], w[j]};
      }
    }
  a.passes = a.min_ratio > threshold;
  return a;
}

struct PeriodicExtensionReport {
  double periodicity = 0.0;     // sup |f(h^{-1}(w+1)) - f(h^{-1}(w))|
  double pair_mismatch = 0.0;   // sup |h(z_j) - h(z_i) - 1| over the supplied pairs
  InjectivityAudit injectivity;
  double min_im_G = 0.0;        // min of Im G in the upper half-plane orientation
  bool range_ok = false;
};

/// pairs index report.f_samples with h(z_j) = h(z_i) + 1. G(w) = f(h^{-1}(w))
/// is read in the orientation where the base space is the upper half-plane.
inline PeriodicExtensionReport periodic_extension_check(const AffinityReport& report, const KoenigsMap& h,
                                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                        double range_tol = 1e-6) {
  PeriodicExtensionReport out;
  for (auto [i, j] : pairs) {
    const auto& [zi, fi] = report.f_samples.at(i);
    const auto& [zj, fj] = report.f_samples.at(j);
    out.periodicity = std::max(out.periodicity, std::abs(fj - fi));
    out.pair_mismatch = std::max(out.pair_mismatch, std::abs(h(zj) - h(zi) - 1.0));
  }
  double orient = h.base_space().kind == BaseSpace::Kind::lower_half_plane ? -1.0 : 1.0;
  std::vector<cplx> w, gw;
  out.min_im_G = std::numeric_limits<double>::infinity();
  for (const auto& [z, f] : report.f_samples) {
    cplx wz = h(z);
    cplx G = f;
    w.push_back(wz);
    gw.push_back(wz + G);
    out.min_im_G = std::min(out.min_im_G, orient * G.imag());
  }
  out.injectivity = injectivity_audit(w, gw);
  out.range_ok = out.min_im_G >= -range_tol;
  return out;
}

// ---------------------------------------------------------------------------
// The constant c

struct CFormulaOptions {
  int k_min = 2;
  int k_max = 26;
  double guard = 1e-7;  // smallest |phi(z) - z| used in the disc route
};

inline cplx c_formula(const MapDescriptor& phi, const MapDescriptor& psi, cplx tau, MapKind kind,
                      const CFormulaOptions& opt = {}) {
  if (!(std::abs(std::abs(tau) - 1.0) < 1e-9)) throw Error(Errc::not_a_fixed_point, "tau must be unimodular");
  if (kind == MapKind::hyperbolic) {
    BoundaryMultiplier a = boundary_multiplier_report(phi, tau);
    BoundaryMultiplier b = boundary_multiplier_report(psi, tau);
    if (a.infinite || b.infinite || std::abs(std::log(a.value)) < 1e-12)
      throw Error(Errc::divergent_quotient, "multiplier of phi is 1 or infinite");
    return std::log(b.value) / std::log(a.value);
  }
  if (!is_parabolic(kind)) throw Error(Errc::wrong_class, "c formula needs a non-elliptic map");
  std::vector<cplx> q;
  MobiusMap C = detail::descriptor_chart(phi, tau).value_or(cayley(tau));
  auto f = detail::exact_chart_form(phi, C);
  auto g = detail::exact_chart_form(psi, C);
  for (int k = opt.k_min; k <= opt.k_max; ++k) {
    double r = 1.0 - std::ldexp(1.0, -k);
    cplx z = r * tau;
    if (f && g) {
      cplx w = C(z);
      q.push_back(detail::chart_quotient(C.inverse(), w, (*f)(w), (*g)(w)));
    } else {
      cplx dphi = phi(z) - z;
      if (std::abs(dphi) < opt.guard) break;
      q.push_back((psi(z) - z) / dphi);
    }
  }
  if (q.size() < 3) throw Error(Errc::divergent_quotient, "too few usable radial samples");
  Extrapolation e = richardson(q);
  if (!std::isfinite(e.value.real()) || e.error > 1e-3)
    throw Error(Errc::divergent_quotient, "radial quotient does not settle");
  return e.value;
}

// ---------------------------------------------------------------------------
// Unrestricted-limit proxy and semigroup commutation

struct UnrestrictedLimitProxy {
  cplx radial, tangential_left, tangential_right;
  double disagreement = 0.0;
  bool agrees = false;
};

/// Limits of (phi(z) - z)/(psi(z) - z) at tau along the radius and along the
/// circle of radius 1/2 internally tangent at tau, approached from both sides.
inline UnrestrictedLimitProxy unrestricted_limit_proxy(const MapDescriptor& phi, const MapDescriptor& psi,
                                                      cplx tau, double tol = 1e-3) {
  auto quotient_limit = [&](auto point) {
    std::vector<cplx> q;
    for (int k = 2; k <= 26; ++k) {
      cplx z = point(std::ldexp(1.0, -k));
      cplx dpsi = psi(z) - z;
      if (std::abs(dpsi) < 1e-7) break;
      q.push_back((phi(z) - z) / dpsi);
    }
    if (q.empty()) throw Error(Errc::divergent_quotient, "no usable samples");
    return richardson(q).value;
  };
  UnrestrictedLimitProxy p;
  p.radial = quotient_limit([&](double u) { return (1.0 - u) * tau; });
  p.tangential_left = quotient_limit([&](double u) {
    return tau * (1.0 - 0.5 * (1.0 - std::polar(1.0, u * kPi)));
  });
  p.tangential_right = quotient_limit([&](double u) {
    return tau * (1.0 - 0.5 * (1.0 - std::polar(1.0, -u * kPi)));
  });
  p.disagreement = std::max({std::abs(p.radial - p.tangential_left), std::abs(p.radial - p.tangential_right),
                             std::abs(p.tangential_left - p.tangential_right)});
  p.agrees = p.disagreement < tol;
  return p;
}

struct SemigroupsCommuteReport {
  double generator_commutator = 0.0;  // phi_1 vs psi_1
  bool precondition_ok = false;
  std::optional<UnrestrictedLimitProxy> limit;
  double residual = 0.0;  // sup over (s, t) of |phi_s o psi_t - psi_t o phi_s|
  bool commute = false;
};

inline SemigroupsCommuteReport semigroups_commute_check(const SemigroupSpec& s1, const SemigroupSpec& s2,
                                                        const std::vector<cplx>& grid = disc_grid(128, 0.9),
                                                        double tol = 1e-6) {
  SemigroupsCommuteReport rep;
  MapDescriptor p1 = MapDescriptor::semigroup_element(s1, 1.0);
  MapDescriptor q1 = MapDescriptor::semigroup_element(s2, 1.0);
  rep.generator_commutator = commutator_residual(p1, q1, grid);
  rep.precondition_ok = rep.generator_commutator < tol;
  if (!rep.precondition_ok) return rep;
  try {
    cplx tau = denjoy_wolff(q1);
    if (std::abs(tau) > 1.0 - 1e-9) rep.limit = unrestricted_limit_proxy(p1, q1, tau / std::abs(tau));
  } catch (const Error&) {
  }
  const double times[] = {0.5, 1.0, std::sqrt(2.0)};
  for (double s : times)
    for (double t : times)
      rep.residual = std::max(rep.residual, commutator_residual(MapDescriptor::semigroup_element(s1, s),
                                                                MapDescriptor::semigroup_element(s2, t), grid));
  rep.commute = rep.residual < tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Elliptic case: H o phi = c H

inline AffinityConstant elliptic_centralizer_check(const SemigroupSpec& s, const MapDescriptor& phi,
                                                   const std::vector<cplx>& grid = disc_grid(128, 0.9)) {
  if (s.model_kind() != ModelKind::dilation)
    throw Error(Errc::wrong_class, "elliptic check needs a dilation model");
  if (std::abs(std::abs(std::exp(s.rate())) - 1.0) < 1e-12)
    throw Error(Errc::elliptic_automorphism, "psi_1 is an automorphism");
  const KoenigsMap& H = s.koenigs();
  cplx z0 = 0.5;
  for (cplx cand : {cplx(0.5), cplx(0.3, 0.3), cplx(-0.4)}) {
    if (std::abs(H(cand)) > 1e-6) {
      z0 = cand;
      break;
    }
  }
  cplx c = H(phi(z0)) / H(z0);
  return {c, schroeder_residual(H, phi, c, grid)};
}

}  // namespace holodyn
