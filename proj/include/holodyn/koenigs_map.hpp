#pragma once

// Koenigs maps h : D -> Omega and their numerical inverses.

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "formula.hpp"
#include "mobius.hpp"

namespace holodyn {

struct BaseSpace {
  enum class Kind { plane, strip, upper_half_plane, lower_half_plane, disc };
  Kind kind = Kind::plane;
  double a = 0.0, b = 0.0;  // strip bounds for Im w

  static BaseSpace plane() { return {Kind::plane}; }
  static BaseSpace strip(double a, double b) { return {Kind::strip, a, b}; }
  static BaseSpace upper() { return {Kind::upper_half_plane}; }
  static BaseSpace lower() { return {Kind::lower_half_plane}; }
  static BaseSpace disc() { return {Kind::disc}; }

  const char* name() const {
    switch (kind) {
      case Kind::plane: return "plane";
      case Kind::strip: return "strip";
      case Kind::upper_half_plane: return "upper-half-plane";
      case Kind::lower_half_plane: return "lower-half-plane";
      case Kind::disc: return "disc";
    }
    return "plane";
  }
};

/// Membership data for Omega = h(D). Exact predicates come from the catalog;
/// otherwise membership is decided by attempting an inversion.
struct OmegaPredicate {
  std::string name = "sampled";
  bool exact = false;
  std::function<bool(cplx)> contains;
  // w - t in Omega for every t >= 0.
  std::function<bool(cplx)> backward_invariant;
  // Petal class of a backward-invariant point.
  std::function<std::optional<int>(cplx)> petal_label;
};

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 60;
  int max_halvings = 40;
};

struct NewtonResult {
  cplx z;
  double residual;
  bool converged;
};

using DualFn = std::function<DualValue(const DualValue&)>;
using RegionFn = std::function<bool(cplx)>;

/// Damped Newton for F(z) = w. Steps are halved when they leave the region
/// or fail to reduce the residual.
inline NewtonResult newton_solve(const DualFn& F, cplx w, cplx seed, const RegionFn& region,
                                 const NewtonOptions& opt = {}) {
  const double target = opt.tol * (1.0 + std::abs(w));
  auto resid = [&](cplx z, DualValue& fz) -> double {
    try {
      fz = F(DualValue::variable(z));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
    double r = std::abs(fz.value - w);
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
  };
  cplx z = seed;
  DualValue fz;
  if (!region(z)) return {z, std::numeric_limits<double>::infinity(), false};
  double r = resid(z, fz);
  for (int it = 0; it < opt.max_iter && std::isfinite(r); ++it) {
    if (r < target) return {z, r, true};
    if (std::abs(fz.deriv) == 0.0) break;
    cplx step = (fz.value - w) / fz.deriv;
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      cplx cand = z - lambda * step;
      if (!region(cand)) continue;
      DualValue fc;
      double rc = resid(cand, fc);
      if (rc < r || (rc <= target)) {
        z = cand; fz = fc; r = rc; moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {z, r, r < target};
}

/// Continues a preimage from (z_ref, w_ref) to w. The default path is the
/// L-shape w_ref -> X + i Im w_ref -> X + i Im w -> w with X to the right of
/// both, which stays inside the right-invariant domains of translation
/// models; `straight` follows the segment instead (star-shaped domains).
inline NewtonResult continue_preimage(const DualFn& F, cplx w, cplx z_ref, cplx w_ref,
                                      const RegionFn& region, const NewtonOptions& opt = {},
                                      bool straight = false) {
  double X = std::max(w_ref.real(), w.real()) + 1.0;
  std::vector<cplx> nodes = {w_ref, cplx(X, w_ref.imag()), cplx(X, w.imag()), w};
  if (straight) nodes = {w_ref, w};
  cplx z = z_ref;
  for (std::size_t leg = 0; leg + 1 < nodes.size(); ++leg) {
    cplx a = nodes[leg], b = nodes[leg + 1];
    double len = std::abs(b - a);
    if (len == 0.0) continue;
    double s = 0.0, ds = std::min(1.0, 0.25 / len);
    while (s < 1.0) {
      double s_next = std::min(1.0, s + ds);
      cplx target = a + s_next * (b - a);
      NewtonResult r = newton_solve(F, target, z, region, {opt.tol, 30, opt.max_halvings});
      if (r.converged) {
        z = r.z;
        s = s_next;
        ds = std::min(2.0 * ds, 0.5 / len + ds);
      } else {
        ds *= 0.5;
        if (ds * len < 1e-9) return {z, r.residual, false};
      }
    }
  }
  DualValue fz = F(DualValue::variable(z));
  return {z, std::abs(fz.value - w), true};
}

class KoenigsMap {
 public:
  virtual ~KoenigsMap() = default;

  virtual DualValue eval_dual(const DualValue& z) const = 0;
  /// h^{-1}(w). Throws OutsideOmega when an exact predicate rejects w and
  /// InversionFailed when the numerics give up.
  virtual cplx invert(cplx w, std::optional<cplx> seed = std::nullopt) const = 0;
  virtual Domain domain() const { return Domain::disc; }
  virtual std::string describe() const = 0;

  cplx operator()(cplx z) const { return eval_dual(DualValue::constant(z)).value; }
  cplx derivative(cplx z) const { return eval_dual(DualValue::variable(z)).deriv; }

  DualValue invert_dual(const DualValue& w) const {
    cplx z = invert(w.value);
    return {z, w.deriv / derivative(z)};
  }

  const BaseSpace& base_space() const { return base_; }
  const OmegaPredicate& omega() const { return omega_; }

  /// Exact membership when available, otherwise by attempted inversion.
  bool omega_contains(cplx w) const {
    if (omega_.exact && omega_.contains) return omega_.contains(w);
    try {
      invert(w);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

 protected:
  KoenigsMap(BaseSpace base, OmegaPredicate omega)
      : base_(base), omega_(std::move(omega)) {}

  void check_omega(cplx w) const {
    if (omega_.exact && omega_.contains && !omega_.contains(w))
      throw Error(Errc::outside_omega, "point outside the Koenigs domain");
  }

  BaseSpace base_;
  OmegaPredicate omega_;
};

using KoenigsPtr = std::shared_ptr<const KoenigsMap>;

/// h = outer o to_chart with Newton solved in the chart coordinate, where
/// outer is well conditioned and to_chart has the closed-form inverse from_chart.
struct NewtonChart {
  formula::Expr to_chart;
  formula::Expr from_chart;
  formula::Expr outer;
  RegionFn region;  // admissible chart coordinates
};

struct FormulaKoenigsConfig {
  std::string forward_text;
  std::optional<std::string> inverse_text;
  std::optional<NewtonChart> chart;
  std::vector<formula::Expr> seeds;  // initial guesses as functions of w (chart coordinates if charted)
  BaseSpace base = BaseSpace::plane();
  OmegaPredicate omega;
  NewtonOptions newton;
};

class FormulaKoenigs final : public KoenigsMap {
 public:
  explicit FormulaKoenigs(FormulaKoenigsConfig cfg)
      : KoenigsMap(cfg.base, cfg.omega),
        forward_text_(cfg.forward_text),
        forward_(formula::parse(cfg.forward_text)),
        chart_(std::move(cfg.chart)),
        seeds_(std::move(cfg.seeds)),
        newton_(cfg.newton) {
    if (cfg.inverse_text) {
      inverse_text_ = *cfg.inverse_text;
      inverse_ = formula::parse(*cfg.inverse_text);
    }
    // Anchor for continuation.
    anchor_z_ = chart_ ? formula::eval(chart_->to_chart, cplx(0.0)) : cplx(0.0);
    anchor_w_ = solve_fn()(DualValue::constant(anchor_z_)).value;
  }

  DualValue eval_dual(const DualValue& z) const override {
    if (!in_domain(Domain::disc, z.value))
      throw Error(Errc::outside_domain, "Koenigs map evaluated outside the disc");
    return formula::eval_dual(forward_, z);
  }

  cplx invert(cplx w, std::optional<cplx> seed = std::nullopt) const override {
    check_omega(w);
    if (inverse_) return invert_closed(w);
    return invert_newton(w, seed);
  }

  std::string describe() const override { return forward_text_; }
  const std::string& forward_text() const { return forward_text_; }
  const std::optional<std::string>& inverse_text() const { return inverse_text_; }
  const formula::Expr& forward() const { return forward_; }

 private:
  DualFn solve_fn() const {
    if (chart_) {
      const formula::Expr& outer = chart_->outer;
      return [&outer](const DualValue& u) { return formula::eval_dual(outer, u); };
    }
    const formula::Expr& fwd = forward_;
    return [&fwd](const DualValue& u) { return formula::eval_dual(fwd, u); };
  }

  RegionFn region() const {
    if (chart_) return chart_->region;
    return [](cplx z) { return std::norm(z) < 1.0; };
  }

  cplx from_solution(cplx u) const {
    return chart_ ? formula::eval(chart_->from_chart, u) : u;
  }

  cplx invert_closed(cplx w) const {
    cplx z;
    try {
      z = formula::eval(*inverse_, w);
    } catch (const Error&) {
      throw Error(Errc::outside_omega, "closed-form inverse singular");
    }
    if (!(std::norm(z) < 1.0)) throw Error(Errc::outside_omega, "preimage outside the disc");
    // Polish against the forward map.
    NewtonResult r = newton_solve(solve_fn(), w, z, region(), {newton_.tol, 3, 4});
    return r.converged ? r.z : z;
  }

  cplx invert_newton(cplx w, std::optional<cplx> seed) const {
    DualFn F = solve_fn();
    RegionFn reg = region();
    NewtonResult best{anchor_z_, std::numeric_limits<double>::infinity(), false};
    auto attempt = [&](cplx u0) {
      if (!reg(u0) || !std::isfinite(u0.real()) || !std::isfinite(u0.imag())) return false;
      NewtonResult r = newton_solve(F, w, u0, reg, newton_);
      if (r.residual < best.residual) best = r;
      return r.converged;
    };
    bool ok = false;
    if (seed) {
      cplx u0 = chart_ ? formula::eval(chart_->to_chart, *seed) : *seed;
      ok = attempt(u0);
    }
    for (const auto& s : seeds_) {
      if (ok) break;
      try {
        ok = attempt(formula::eval(s, w));
      } catch (const Error&) {
      }
    }
    if (!ok) ok = attempt(anchor_z_);
    if (!ok) {
      NewtonResult r = continue_preimage(F, w, anchor_z_, anchor_w_, reg, newton_);
      if (r.residual < best.residual) best = r;
      ok = r.converged;
    }
    if (!ok) throw InversionFailed(w, from_solution(best.z), best.residual);
    cplx z = from_solution(best.z);
    if (!(std::norm(z) < 1.0)) throw Error(Errc::outside_omega, "preimage outside the disc");
    return z;
  }

  std::string forward_text_;
  std::optional<std::string> inverse_text_;
  formula::Expr forward_;
  std::optional<formula::Expr> inverse_;
  std::optional<NewtonChart> chart_;
  std::vector<formula::Expr> seeds_;
  NewtonOptions newton_;
  cplx anchor_z_, anchor_w_;
};

/// h(z) = scale * inner(pre(z)) + shift, for renormalizing a model or
/// pulling a half-plane Koenigs map back to the disc.
class AffineKoenigs final : public KoenigsMap {
 public:
  AffineKoenigs(KoenigsPtr inner, std::optional<MobiusMap> pre, cplx scale, cplx shift,
                BaseSpace base, OmegaPredicate omega = {})
      : KoenigsMap(base, std::move(omega)),
        inner_(std::move(inner)), pre_(pre), scale_(scale), shift_(shift) {}

  DualValue eval_dual(const DualValue& z) const override {
    if (pre_ && !in_domain(Domain::disc, z.value))
      throw Error(Errc::outside_domain, "Koenigs map evaluated outside the disc");
    DualValue u = pre_ ? (*pre_)(z) : z;
    return inner_->eval_dual(u) * scale_ + shift_;
  }

  cplx invert(cplx w, std::optional<cplx> seed = std::nullopt) const override {
    check_omega(w);
    std::optional<cplx> inner_seed;
    if (seed) inner_seed = pre_ ? (*pre_)(*seed) : *seed;
    cplx u = inner_->invert((w - shift_) / scale_, inner_seed);
    return pre_ ? pre_->inverse()(u) : u;
  }

  Domain domain() const override { return pre_ ? Domain::disc : inner_->domain(); }
  std::string describe() const override { return "affine(" + inner_->describe() + ")"; }

  const KoenigsPtr& inner() const { return inner_; }
  const std::optional<MobiusMap>& pre() const { return pre_; }
  cplx scale() const { return scale_; }
  cplx shift() const { return shift_; }

 private:
  KoenigsPtr inner_;
  std::optional<MobiusMap> pre_;
  cplx scale_, shift_;
};

}  // namespace holodyn
