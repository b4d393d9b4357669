#pragma once

/**
 * @file criteria.hpp
 * @brief Sufficient conditions for psi_t in Z(phi) for all t, evaluated
 * numerically, and the sampled conclusion they predict.
 *
 *   (a) h o phi = h + c (c h for dilation models)
 *   (b) psi_1 hyperbolic or zero-step        classify(psi_1)
 *   (c) psi_r commutes with phi, r = sqrt 2 - 1
 *   (d) (phi(z)-z)/(psi_1(z)-z) has an unrestricted limit at tau (proxy)
 *   (e) phi has an isogonal repelling fixed point
 *   (f) phi and psi_1 share a boundary fixed point other than tau
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "centralizer.hpp"
#include "core.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "petals.hpp"
#include "semigroup.hpp"

namespace holodyn {

struct Condition {
  bool holds = false;
  bool evaluated = true;  // false when the test does not apply to this pair
  double evidence = 0.0;  // residual, disagreement or separation behind the verdict
  std::string note;
};

struct CriteriaReport {
  double precondition_commutator = 0.0;
  bool precondition_ok = false;
  Condition a, b, c, d, e, f;
  cplx affinity_c;
  MapKind psi1_kind = MapKind::parabolic_undecided;
  cplx tau;
  std::vector<cplx> isogonal_points;  // repelling points of phi passing the isogonality test
  std::vector<cplx> common_points;    // shared boundary fixed points other than tau
  std::vector<std::pair<double, double>> conclusion;  // (t, commutator residual with psi_t)
  bool conclusion_holds = false;
};

struct CriteriaOptions {
  double affine_tol = 1e-8;
  double commute_tol = 1e-6;
  double conclusion_tol = 1e-7;
  double common_point_tol = 1e-5;
  int scan_angles = 256;
};

inline const std::vector<double>& conclusion_times() {
  static const std::vector<double> t = {0.25, 1.0 / 3.0, std::exp(1.0) - 2.0, std::sqrt(2.0) - 1.0};
  return t;
}

inline CriteriaReport criteria_battery(const MapDescriptor& phi, const SemigroupSpec& s,
                                       const CriteriaOptions& opt = {}) {
  CriteriaReport r;
  MapDescriptor psi1 = MapDescriptor::semigroup_element(s, 1.0);
  r.precondition_commutator = commutator_residual(phi, psi1);
  r.precondition_ok = r.precondition_commutator < opt.commute_tol;

  bool dilation = s.model_kind() == ModelKind::dilation;
  AffinityConstant ac = dilation ? elliptic_centralizer_check(s, phi) : affinity_constant(s.koenigs(), phi);
  r.affinity_c = ac.c;
  r.a = {ac.residual < opt.affine_tol, true, ac.residual, dilation ? "sup |h(phi) - c h|" : "sup |h(phi) - h - c|"};

  std::optional<ClassificationReport> cls;
  try {
    cls = classify(psi1);
    r.psi1_kind = cls->kind;
    r.tau = cls->dw_point;
    r.b = {cls->kind == MapKind::hyperbolic || cls->kind == MapKind::parabolic_zero_step, true,
           cls->step.q.empty() ? 0.0 : cls->step.q.back(), map_kind_name(cls->kind)};
  } catch (const Error& e) {
    r.b = {false, false, 0.0, e.what()};
  }

  double rc = commutator_residual(phi, MapDescriptor::semigroup_element(s, std::sqrt(2.0) - 1.0));
  r.c = {rc < opt.commute_tol, true, rc, "r = sqrt(2) - 1"};

  bool boundary_tau = cls && std::abs(std::abs(r.tau) - 1.0) < 1e-6;
  if (boundary_tau) {
    try {
      UnrestrictedLimitProxy p = unrestricted_limit_proxy(phi, psi1, r.tau / std::abs(r.tau));
      r.d = {p.agrees, true, p.disagreement, "radial vs two tangential circles"};
    } catch (const Error& e) {
      r.d = {false, true, std::numeric_limits<double>::infinity(), e.what()};
    }
  } else {
    r.d = {false, false, 0.0, "interior Denjoy-Wolff point"};
  }

  std::vector<BRFPRecord> phi_pts, psi_pts;
  try {
    phi_pts = brfp_scan(phi, opt.scan_angles);
    psi_pts = brfp_scan(psi1, opt.scan_angles, boundary_tau ? std::optional<cplx>(r.tau) : std::nullopt);
  } catch (const Error& e) {
    r.e = {false, false, 0.0, e.what()};
    r.f = {false, false, 0.0, e.what()};
  }
  double best_e = std::numeric_limits<double>::infinity();
  for (const auto& p : phi_pts) {
    if (p.is_dw || !p.regular || !(p.angular_derivative > 1.0)) continue;
    try {
      IsogonalityReport iso = isogonality_test(phi, p.sigma);
      double worst = 0.0;
      for (const auto& a : iso.args) worst = std::max(worst, std::abs(a.back()));
      best_e = std::min(best_e, worst);
      if (iso.isogonal) r.isogonal_points.push_back(p.sigma);
    } catch (const Error&) {
    }
  }
  if (r.e.evaluated) r.e = {!r.isogonal_points.empty(), true, best_e, "three-ray isogonality at repelling points"};

  double best_f = std::numeric_limits<double>::infinity();
  for (const auto& p : phi_pts) {
    if (p.is_dw || (boundary_tau && std::abs(p.sigma - r.tau) < 1e-4)) continue;
    for (const auto& q : psi_pts) {
      if (q.is_dw) continue;
      double d = std::abs(p.sigma - q.sigma);
      best_f = std::min(best_f, d);
      if (d < opt.common_point_tol) r.common_points.push_back(p.sigma);
    }
  }
  if (r.f.evaluated) r.f = {!r.common_points.empty(), true, best_f, "closest pair of non-DW fixed points"};

  r.conclusion_holds = true;
  for (double t : conclusion_times()) {
    double res = commutator_residual(phi, MapDescriptor::semigroup_element(s, t));
    r.conclusion.emplace_back(t, res);
    r.conclusion_holds = r.conclusion_holds && res < opt.conclusion_tol;
  }
  return r;
}

}  // namespace holodyn
