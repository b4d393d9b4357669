#pragma once

/**
 * @file koenigs.hpp
 * @brief Numerical holomorphic models.
 *
 * Parabolic maps of positive step on the right half-plane are linearized
 * by normalized iterates h_n(w) = (f^n(w) - i Im f^n(w0)) / Re f^n(w0),
 * which converge to h with h o f = h + ib. Elliptic maps are linearized
 * by lambda^{-n} (f^n - tau), with h o f = lambda h and h'(tau) = 1.
 */

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "map.hpp"
#include "metric.hpp"
#include "numerics.hpp"

namespace holodyn {

/// sup over the grid of |h(f(z)) - h(z) - step|.
inline double abel_residual(const KoenigsMap& h, const MapDescriptor& f, cplx step,
                            const std::vector<cplx>& grid) {
  double r = 0.0;
  for (cplx z : grid) r = std::max(r, std::abs(h(f(z)) - h(z) - step));
  return r;
}

/// sup over the grid of |h(f(z)) - lambda h(z)|.
inline double schroeder_residual(const KoenigsMap& h, const MapDescriptor& f, cplx lambda,
                                 const std::vector<cplx>& grid) {
  double r = 0.0;
  for (cplx z : grid) r = std::max(r, std::abs(h(f(z)) - lambda * h(z)));
  return r;
}

inline cplx invert_koenigs(const KoenigsMap& k, cplx w, std::optional<cplx> seed = std::nullopt) {
  return k.invert(w, seed);
}

// ---------------------------------------------------------------------------
// Pommerenke construction

/// h_N on the right half-plane with the inverse computed by N backward
/// Newton steps of f.
class PommerenkeKoenigs final : public KoenigsMap {
 public:
  PommerenkeKoenigs(MapDescriptor f, unsigned depth, cplx orbit_w0)
      : KoenigsMap(BaseSpace::plane(), OmegaPredicate{}),
        f_(std::move(f)), depth_(depth), x_(orbit_w0.real()), y_(orbit_w0.imag()) {}

  DualValue eval_dual(const DualValue& w) const override {
    if (!(w.value.real() > 0.0)) throw Error(Errc::outside_domain, "point outside the right half-plane");
    DualValue u = w;
    for (unsigned k = 0; k < depth_; ++k) u = f_.eval_dual(u);
    return (u - cplx(0.0, y_)) / cplx(x_);
  }

  cplx invert(cplx v, std::optional<cplx> = std::nullopt) const override {
    cplx u = x_ * v + cplx(0.0, y_);
    DualFn F = [this](const DualValue& p) { return f_.eval_dual(p); };
    RegionFn half = [](cplx p) { return p.real() > 0.0; };
    for (unsigned k = 0; k < depth_; ++k) {
      cplx guess = u - (f_(u) - u);
      if (!half(guess)) guess = cplx(std::max(u.real(), 1e-3), u.imag()) - kI;
      NewtonResult r = newton_solve(F, u, guess, half, {1e-13, 40, 40});
      if (!r.converged) r = newton_solve(F, u, cplx(std::max(u.real(), 1e-3), u.imag()), half, {1e-13, 60, 50});
      if (!r.converged) throw Error(Errc::outside_omega, "backward orbit left the half-plane");
      u = r.z;
    }
    return u;
  }

  Domain domain() const override { return Domain::right_half_plane; }
  std::string describe() const override { return "pommerenke(depth=" + std::to_string(depth_) + ")"; }

  unsigned depth() const { return depth_; }
  const MapDescriptor& map() const { return f_; }

 private:
  MapDescriptor f_;
  unsigned depth_;
  double x_, y_;
};

struct PommerenkeOptions {
  unsigned n_max = 50000;
  double cauchy_tol = 1e-6;  // sup |h_n - h_{n-8}| over the grid
  double abel_tol = 5e-5;    // sup |h_n(f(w)) - h_n(w) - i b_n| over the grid
  bool verify_class = true;
  std::size_t grid_size = 64;
};

struct PommerenkeModel {
  std::vector<std::pair<cplx, cplx>> grid;  // (w, h(w))
  double b = 0.0;
  unsigned n_used = 0;
  double residual = 0.0;
  double cauchy = 0.0;
  bool converged = false;
  cplx w0;
  std::shared_ptr<const PommerenkeKoenigs> h;

  /// Disc-level Koenigs map of C^{-1} o f o C normalized to h o phi = h + 1.
  KoenigsPtr disc_koenigs(const MobiusMap& C) const {
    BaseSpace base = b > 0 ? BaseSpace::lower() : BaseSpace::upper();
    return std::make_shared<AffineKoenigs>(h, C, 1.0 / cplx(0.0, b), 0.0, base);
  }
};

/// Points of the right half-plane: the Cayley image of a disc grid.
inline std::vector<cplx> half_plane_grid(std::size_t n = 64, double radius = 0.9) {
  MobiusMap C = cayley(1.0);
  std::vector<cplx> out;
  for (cplx z : disc_grid(n, radius)) out.push_back(C(z));
  return out;
}

inline PommerenkeModel pommerenke_koenigs(const MapDescriptor& f, cplx w0,
                                          const PommerenkeOptions& opt = {}) {
  if (!(w0.real() > 0.0)) throw Error(Errc::invalid_argument, "w0 must lie in the right half-plane");
  if (opt.verify_class) {
    ClassificationReport rep = classify(MapDescriptor::conjugate(cayley(1.0), f));
    if (rep.kind != MapKind::parabolic_positive_step || std::abs(rep.dw_point - 1.0) > 1e-6)
      throw Error(Errc::wrong_class, std::string("expected parabolic positive step with Denjoy-Wolff point at infinity, got ") +
                                         map_kind_name(rep.kind));
  }
  std::vector<cplx> grid = half_plane_grid(opt.grid_size);
  std::vector<cplx> orbit = grid;
  cplx o0 = w0;
  std::vector<cplx> h_prev(grid.size());
  PommerenkeModel model;
  model.w0 = w0;
  unsigned n = 0;
  double b_n = 0.0;
  for (;;) {
    // Orbits advance one step; compare to the stored h at n - 8.
    cplx o1 = f(o0);
    double x = o0.real();
    b_n = (o1.imag() - o0.imag()) / x;
    double abel = 0.0, cauchy = 0.0;
    bool check = n % 8 == 0;
    std::vector<cplx> next(orbit.size());
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      next[j] = f(orbit[j]);
      if (check) {
        cplx h = (orbit[j] - cplx(0.0, o0.imag())) / x;
        abel = std::max(abel, std::abs((next[j] - orbit[j]) / x - cplx(0.0, b_n)));
        if (n >= 8) cauchy = std::max(cauchy, std::abs(h - h_prev[j]));
        h_prev[j] = h;
      }
    }
    if (check) {
      model.residual = abel;
      model.cauchy = n >= 8 ? cauchy : std::numeric_limits<double>::infinity();
      if (n >= 8 && cauchy < opt.cauchy_tol && abel < opt.abel_tol) {
        model.converged = true;
        break;
      }
      if (n >= opt.n_max) break;
    }
    orbit.swap(next);
    o0 = o1;
    ++n;
  }
  model.n_used = n;
  model.b = b_n;
  model.h = std::make_shared<PommerenkeKoenigs>(f, n, o0);
  for (std::size_t j = 0; j < grid.size(); ++j)
    model.grid.emplace_back(grid[j], (orbit[j] - cplx(0.0, o0.imag())) / o0.real());
  return model;
}

struct AffineFit {
  double a = 0.0;
  cplx c;
  double residual = 0.0;
};

/// Least-squares fit h2 = a h1 + c with real a and complex c.
inline AffineFit fit_real_affine(const std::vector<cplx>& h1, const std::vector<cplx>& h2) {
  if (h1.size() != h2.size() || h1.empty()) throw Error(Errc::invalid_argument, "sample size mismatch");
  cplx m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) { m1 += h1[i]; m2 += h2[i]; }
  m1 /= double(h1.size());
  m2 /= double(h2.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) {
    num += std::real(std::conj(h1[i] - m1) * (h2[i] - m2));
    den += std::norm(h1[i] - m1);
  }
  AffineFit fit;
  fit.a = den > 0 ? num / den : 0.0;
  fit.c = m2 - fit.a * m1;
  for (std::size_t i = 0; i < h1.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(h2[i] - fit.a * h1[i] - fit.c));
  return fit;
}

// ---------------------------------------------------------------------------
// Elliptic (Schroeder) construction

class SchroederKoenigs final : public KoenigsMap {
 public:
  SchroederKoenigs(MapDescriptor f, cplx tau, cplx lambda, unsigned n_max, double tol)
      : KoenigsMap(BaseSpace::plane(), OmegaPredicate{}),
        f_(std::move(f)), tau_(tau), lambda_(lambda), n_max_(n_max), tol_(tol) {}

  DualValue eval_dual(const DualValue& z) const override {
    if (!in_domain(Domain::disc, z.value)) throw Error(Errc::outside_domain, "point outside the disc");
    DualValue u = z;
    cplx scale = 1.0;
    DualValue h = z - tau_;
    for (unsigned n = 1; n <= n_max_; ++n) {
      u = f_.eval_dual(u);
      scale /= lambda_;
      DualValue next = (u - tau_) * scale;
      double diff = std::abs(next.value - h.value);
      h = next;
      if (diff < tol_ * (1.0 + std::abs(h.value))) return h;
    }
    throw Error(Errc::slow_convergence, "Schroeder iteration did not settle");
  }

  cplx invert(cplx w, std::optional<cplx> seed = std::nullopt) const override {
    DualFn F = [this](const DualValue& u) { return eval_dual(u); };
    RegionFn disc = [](cplx u) { return std::norm(u) < 1.0; };
    NewtonResult r = newton_solve(F, w, seed.value_or(tau_ + w), disc);
    if (!r.converged) r = continue_preimage(F, w, tau_, 0.0, disc, {}, true);
    if (!r.converged) throw InversionFailed(w, r.z, r.residual);
    return r.z;
  }

  std::string describe() const override { return "schroeder"; }
  cplx lambda() const { return lambda_; }
  cplx tau() const { return tau_; }

 private:
  MapDescriptor f_;
  cplx tau_, lambda_;
  unsigned n_max_;
  double tol_;
};

inline std::shared_ptr<const SchroederKoenigs> elliptic_koenigs(const MapDescriptor& f, cplx tau,
                                                                unsigned n_max = 4000, double tol = 1e-10) {
  if (!(std::abs(tau) < 1.0)) throw Error(Errc::wrong_class, "elliptic construction needs an interior fixed point");
  if (std::abs(f(tau) - tau) > 1e-9) throw Error(Errc::not_a_fixed_point, "tau is not fixed");
  cplx lambda = f.derivative(tau);
  if (std::abs(lambda) >= 1.0 - 1e-12) throw Error(Errc::wrong_class, "multiplier on the unit circle");
  if (std::abs(lambda) < 1e-12) throw Error(Errc::wrong_class, "superattracting fixed point");
  return std::make_shared<SchroederKoenigs>(f, tau, lambda, n_max, tol);
}

}  // namespace holodyn
