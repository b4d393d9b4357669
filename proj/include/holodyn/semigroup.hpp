#pragma once

/**
 * @file semigroup.hpp
 * @brief Continuous one-parameter semigroups of the disc.
 *
 * A semigroup is given either by a Koenigs map h with
 * h(psi_t(z)) = h(z) + rate * t (translation model) or
 * h(psi_t(z)) = exp(rate * t) * h(z) (dilation model), or by an
 * infinitesimal generator G with d psi_t / dt = G(psi_t).
 */

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "core.hpp"
#include "formula.hpp"
#include "koenigs_map.hpp"

namespace holodyn {

enum class ModelKind { translation, dilation };

/// h(z) = integral of 1/G along the segment [0, z]; h' = 1/G exactly.
class QuadratureKoenigs final : public KoenigsMap {
 public:
  explicit QuadratureKoenigs(formula::Expr G)
      : KoenigsMap(BaseSpace::plane(), OmegaPredicate{}), G_(std::move(G)) {}

  DualValue eval_dual(const DualValue& z) const override {
    if (!in_domain(Domain::disc, z.value))
      throw Error(Errc::outside_domain, "Koenigs map evaluated outside the disc");
    return {integral(z.value), z.deriv / formula::eval(G_, z.value)};
  }

  cplx invert(cplx w, std::optional<cplx> seed = std::nullopt) const override {
    DualFn F = [this](const DualValue& u) { return eval_dual(u); };
    RegionFn disc = [](cplx u) { return std::norm(u) < 1.0; };
    NewtonResult r = newton_solve(F, w, seed.value_or(cplx(0.0)), disc);
    if (!r.converged) r = continue_preimage(F, w, cplx(0.0), cplx(0.0), disc);
    if (!r.converged) throw InversionFailed(w, r.z, r.residual);
    return r.z;
  }

  std::string describe() const override { return "quadrature(1/(" + formula::to_string(G_) + "))"; }

 private:
  cplx integral(cplx z) const {
    if (z == cplx(0.0)) return 0.0;
    auto f = [&](double s) { return z / formula::eval(G_, s * z); };
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
  }

  formula::Expr G_;
};

class SemigroupSpec {
 public:
  static SemigroupSpec from_koenigs(KoenigsPtr h, std::string name = {},
                                    ModelKind kind = ModelKind::translation, cplx rate = 1.0) {
    SemigroupSpec s;
    s.h_ = std::move(h);
    s.name_ = std::move(name);
    s.kind_ = kind;
    s.rate_ = rate;
    return s;
  }

  static SemigroupSpec from_generator(const std::string& generator, std::string name = {}) {
    SemigroupSpec s;
    s.generator_ = formula::parse(generator);
    s.generator_text_ = generator;
    s.h_ = std::make_shared<QuadratureKoenigs>(*s.generator_);
    s.name_ = std::move(name);
    return s;
  }

  const std::string& name() const { return name_; }
  ModelKind model_kind() const { return kind_; }
  cplx rate() const { return rate_; }
  bool has_generator_form() const { return generator_.has_value(); }
  const std::string& generator_text() const { return generator_text_; }
  const KoenigsMap& koenigs() const { return *h_; }
  const KoenigsPtr& koenigs_ptr() const { return h_; }

  /// The model automorphism applied to a Koenigs coordinate.
  cplx model_step(cplx w, double t) const {
    return kind_ == ModelKind::translation ? w + rate_ * t : std::exp(rate_ * t) * w;
  }
  DualValue model_step(const DualValue& w, double t) const {
    if (kind_ == ModelKind::translation) return w + cplx(rate_ * t);
    return w * std::exp(rate_ * t);
  }

  DualValue flow_dual(double t, const DualValue& z) const {
    if (t < 0.0) throw Error(Errc::invalid_argument, "negative flow time");
    if (!in_domain(Domain::disc, z.value)) throw Error(Errc::outside_domain, "flow start outside the disc");
    if (t == 0.0) return z;
    if (generator_) {
      cplx v = flow_ode(t, z.value);
      return {v, z.deriv * formula::eval(*generator_, v) / formula::eval(*generator_, z.value)};
    }
    DualValue w = model_step(h_->eval_dual(z), t);
    cplx v = h_->invert(w.value);
    return {v, w.deriv / h_->derivative(v)};
  }

  cplx flow(double t, cplx z) const { return flow_dual(t, DualValue::constant(z)).value; }

  /// Integrates dz/dt = G(z) with an adaptive Dormand-Prince 5(4) pair.
  cplx flow_ode(double t, cplx z, double tol = 1e-12) const {
    namespace odeint = boost::numeric::odeint;
    using stepper = odeint::runge_kutta_dopri5<cplx, double, cplx, double, odeint::vector_space_algebra>;
    auto rhs = [this](const cplx& x, cplx& dx, double) {
      if (!(std::norm(x) < 1.0)) throw Error(Errc::step_underflow, "trajectory reached the boundary");
      dx = generator_at(x);
    };
    cplx x = z;
    odeint::integrate_adaptive(odeint::make_controlled<stepper>(tol, tol), rhs, x, 0.0, t,
                               std::min(0.01, t));
    return x;
  }

  /// psi_{-t}(z) when defined; nullopt when h(z) backed up by t leaves Omega.
  std::optional<cplx> backward_flow(double t, cplx z) const {
    if (t < 0.0) throw Error(Errc::invalid_argument, "negative flow time");
    if (t == 0.0) return z;
    cplx w = model_step(h_->eval_dual(DualValue::constant(z)).value, -t);
    const OmegaPredicate& om = h_->omega();
    if (om.exact && om.contains && !om.contains(w)) return std::nullopt;
    try {
      return h_->invert(w);
    } catch (const Error& e) {
      if (e.code() == Errc::outside_omega || !om.exact) return std::nullopt;
      throw;
    }
  }

  /// G with d psi_t/dt = G o psi_t.
  cplx generator_at(cplx z) const {
    if (generator_) return formula::eval(*generator_, z);
    DualValue hz = h_->eval_dual(DualValue::variable(z));
    if (kind_ == ModelKind::translation) return rate_ / hz.deriv;
    return rate_ * hz.value / hz.deriv;
  }

 private:
  SemigroupSpec() = default;

  KoenigsPtr h_;
  std::string name_;
  ModelKind kind_ = ModelKind::translation;
  cplx rate_ = 1.0;
  std::optional<formula::Expr> generator_;
  std::string generator_text_;
};

inline cplx flow(const SemigroupSpec& s, double t, cplx z) { return s.flow(t, z); }

inline std::optional<cplx> backward_flow(const SemigroupSpec& s, double t, cplx z) {
  return s.backward_flow(t, z);
}

inline cplx generator_eval(const SemigroupSpec& s, cplx z) { return s.generator_at(z); }

/// Group test: psi_1 is an automorphism iff it is a hyperbolic isometry,
/// audited on sample pairs.
inline bool is_group(const SemigroupSpec& s) {
  std::vector<cplx> samples;
  for (int ring = 1; ring <= 4; ++ring)
    for (int k = 0; k < 12; ++k)
      samples.push_back(std::polar(0.22 * ring, 2.0 * kPi * (k + 0.5 * ring) / 12.0));
  auto pseudo = [](cplx a, cplx b) { return std::abs((a - b) / (1.0 - std::conj(b) * a)); };
  try {
    for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
      cplx a = s.flow(1.0, samples[i]), b = s.flow(1.0, samples[i + 1]);
      if (std::abs(pseudo(a, b) - pseudo(samples[i], samples[i + 1])) > 1e-8) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace holodyn
