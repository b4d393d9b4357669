#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "core.hpp"
#include "dual.hpp"

namespace holodyn {

enum class PointLocation { interior, boundary, exterior, infinity };

struct FixedPoint {
  cplx z;
  PointLocation location;
};

/// z -> (a z + b) / (c z + d), normalized so that ad - bc = 1.
class MobiusMap {
 public:
  MobiusMap() : a_(1), b_(0), c_(0), d_(1) {}
  MobiusMap(cplx a, cplx b, cplx c, cplx d) {
    cplx det = a * d - b * c;
    if (std::abs(det) == 0.0) throw Error(Errc::invalid_argument, "degenerate Mobius map");
    cplx s = std::sqrt(det);
    a_ = a / s; b_ = b / s; c_ = c / s; d_ = d / s;
  }

  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx d() const { return d_; }
  cplx det() const { return a_ * d_ - b_ * c_; }

  cplx operator()(cplx z) const { return (a_ * z + b_) / (c_ * z + d_); }

  Dual<cplx> operator()(const Dual<cplx>& z) const {
    cplx den = c_ * z.value + d_;
    return {(a_ * z.value + b_) / den, z.deriv / (den * den)};
  }

  cplx derivative(cplx z) const {
    cplx den = c_ * z + d_;
    return 1.0 / (den * den);
  }

  MobiusMap inverse() const { return MobiusMap(d_, -b_, -c_, a_); }

  /// (*this) o other, i.e. the coefficient-matrix product.
  MobiusMap compose(const MobiusMap& o) const {
    return MobiusMap(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                     c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
  }

  bool is_identity(double tol = 1e-14) const {
    // Normalization leaves a sign ambiguity: +-I both represent the identity.
    return std::abs(b_) < tol && std::abs(c_) < tol && std::abs(a_ - d_) < tol;
  }

  /// Disc automorphism test: preserves the unit circle.
  bool is_disc_automorphism(double tol = 1e-12) const {
    for (double th : {0.0, 2.1, 4.2}) {
      cplx w = (*this)(std::polar(1.0, th));
      if (std::abs(std::abs(w) - 1.0) > tol) return false;
    }
    return std::abs((*this)(cplx(0.0))) < 1.0;
  }

 private:
  cplx a_, b_, c_, d_;
};

inline PointLocation locate(cplx z, double tol = 1e-12) {
  double r = std::abs(z);
  if (!std::isfinite(r)) return PointLocation::infinity;
  if (r < 1.0 - tol) return PointLocation::interior;
  if (r <= 1.0 + tol) return PointLocation::boundary;
  return PointLocation::exterior;
}

/// Roots of c z^2 + (d - a) z - b = 0; a parabolic map repeats its root.
inline std::array<FixedPoint, 2> mobius_fixed_points(const MobiusMap& m) {
  if (m.is_identity()) throw Error(Errc::is_identity, "identity has no isolated fixed points");
  cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
  auto fp = [](cplx z) { return FixedPoint{z, locate(z)}; };
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (std::abs(c) < 1e-15) {
    // Affine: one finite fixed point b/(d-a) plus infinity.
    if (std::abs(d - a) < 1e-15) return {fp(cplx(inf, 0)), fp(cplx(inf, 0))};
    return {fp(b / (d - a)), fp(cplx(inf, 0))};
  }
  cplx disc = std::sqrt((d - a) * (d - a) + 4.0 * b * c);
  cplx q = -0.5 * ((d - a) + (std::real(std::conj(d - a) * disc) >= 0 ? disc : -disc));
  // Stable pair: roots q/c and -b/q.
  cplx r1 = q / c;
  cplx r2 = std::abs(q) > 0 ? -b / q : r1;
  if (std::abs(disc) < 1e-9) r2 = r1;
  return {fp(r1), fp(r2)};
}

/// C(z) = (tau + z) / (tau - z): disc onto the right half-plane, tau -> inf, 0 -> 1.
inline MobiusMap cayley(cplx tau) {
  if (std::abs(std::abs(tau) - 1.0) > 1e-12)
    throw Error(Errc::invalid_argument, "cayley centre must be unimodular");
  return MobiusMap(1.0, tau, -1.0, tau);
}

/// C(z) = i (1 + z) / (1 - z): disc onto the upper half-plane.
inline MobiusMap cayley_upper() { return MobiusMap(kI, kI, -1.0, 1.0); }

}  // namespace holodyn
