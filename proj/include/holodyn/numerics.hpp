#pragma once

// Sequence acceleration, 1-D search and sample grids.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "core.hpp"

namespace holodyn {

struct Extrapolation {
  cplx value;
  double error;  // difference between the two best neighbouring estimates
};

/// Richardson tableau for samples Q_k taken at step 2^{-k} with an error
/// expansion in integer powers of the step. Returns the tableau entry whose
/// difference from its predecessor in the same column is smallest.
inline Extrapolation richardson(const std::vector<cplx>& q, int max_order = 3) {
  if (q.empty()) throw Error(Errc::invalid_argument, "empty sequence");
  if (q.size() == 1) return {q[0], std::numeric_limits<double>::infinity()};
  std::vector<std::vector<cplx>> T(q.size());
  Extrapolation best{q.back(), std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < q.size(); ++k) {
    T[k].push_back(q[k]);
    for (int j = 1; j <= max_order && static_cast<std::size_t>(j) <= k; ++j) {
      double f = std::ldexp(1.0, j) - 1.0;
      T[k].push_back(T[k][j - 1] + (T[k][j - 1] - T[k - 1][j - 1]) / f);
    }
    if (k == 0) continue;
    for (std::size_t j = 0; j < T[k].size() && j < T[k - 1].size(); ++j) {
      double e = std::abs(T[k][j] - T[k - 1][j]);
      if (e < best.error) best = {T[k][j], e};
    }
  }
  return best;
}

/// Highest-order entry of the last tableau row.
inline cplx richardson_last(const std::vector<cplx>& q, int max_order = 3) {
  if (q.empty()) throw Error(Errc::invalid_argument, "empty sequence");
  std::vector<cplx> row(q.begin(), q.end());
  for (int j = 1; j <= max_order && static_cast<std::size_t>(j) < row.size(); ++j) {
    double f = std::ldexp(1.0, j) - 1.0;
    for (std::size_t k = row.size() - 1; k >= static_cast<std::size_t>(j); --k) row[k] += (row[k] - row[k - 1]) / f;
  }
  return row.back();
}

/// Aitken delta-squared on the last three terms.
inline cplx aitken(cplx a, cplx b, cplx c) {
  cplx d1 = b - a, d2 = c - b, den = d2 - d1;
  if (std::abs(den) < 1e-300 || std::abs(den) < 1e-14 * std::abs(d2)) return c;
  return c - d2 * d2 / den;
}

/// Golden-section minimization of f on [a, b].
inline double golden_section(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-12, int max_iter = 200) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

/// Staggered polar grid in the disc: rings of equally spaced angles with
/// alternate rings rotated by half a step. A seed adds reproducible jitter.
inline std::vector<cplx> disc_grid(std::size_t n = 128, double radius = 0.9,
                                   std::optional<std::uint64_t> seed = std::nullopt) {
  std::size_t rings = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(n / 2.0))));
  std::size_t per = (n + rings - 1) / rings;
  std::vector<cplx> pts;
  pts.reserve(n);
  std::mt19937_64 rng(seed.value_or(0));
  std::uniform_real_distribution<double> jit(-0.3, 0.3);
  const double dr = radius / rings, dth = 2.0 * kPi / per;
  for (std::size_t j = 0; j < rings && pts.size() < n; ++j) {
    for (std::size_t k = 0; k < per && pts.size() < n; ++k) {
      double r = dr * (j + 1), th = dth * (k + 0.5 * (j % 2));
      if (seed) {
        r = std::min(radius, r + jit(rng) * dr);
        th += jit(rng) * dth;
      }
      pts.push_back(std::polar(r, th));
    }
  }
  return pts;
}

}  // namespace holodyn
