#pragma once

/**
 * @file metric.hpp
 * @brief Hyperbolic distance, Denjoy-Wolff point, boundary multipliers,
 *        type classification and boundary fixed point scans.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "map.hpp"
#include "numerics.hpp"

namespace holodyn {

/// Hyperbolic distance with curvature -4: (1/2) log((1+m)/(1-m)).
inline double rho_disc(cplx z, cplx w) {
  if (!(std::norm(z) < 1.0) || !(std::norm(w) < 1.0))
    throw Error(Errc::outside_domain, "rho_disc needs points of the open disc");
  double m = std::abs((z - w) / (1.0 - std::conj(w) * z));
  return std::atanh(std::min(m, 1.0));
}

// ---------------------------------------------------------------------------
// Denjoy-Wolff point

struct DenjoyWolffOptions {
  unsigned max_iter = 1u << 16;
  double interior_tol = 1e-12;
  double cross_check = 1e-6;
};

struct DenjoyWolffReport {
  cplx tau;
  bool interior = false;
  bool elliptic_automorphism = false;
  unsigned iterations = 0;
  double seed_spread = 0.0;
};

namespace detail {

struct SeedRun {
  enum class Outcome { interior, boundary, stuck } outcome;
  cplx point;
  unsigned iterations;
};

inline SeedRun run_seed(const MapDescriptor& m, cplx z, const DenjoyWolffOptions& opt) {
  std::vector<cplx> proj;  // z_{2^k}/|z_{2^k}|
  std::vector<cplx> est;
  unsigned next_record = 1;
  for (unsigned n = 1; n <= opt.max_iter; ++n) {
    cplx zn = m(z);
    if (!std::isfinite(zn.real()) || !std::isfinite(zn.imag()))
      throw Error(Errc::no_convergence, "orbit left the plane");
    double step = std::abs(zn - z);
    z = zn;
    double r = std::abs(z);
    if (step < opt.interior_tol && r < 1.0 - 1e-6) return {SeedRun::Outcome::interior, z, n};
    if (r > 1.0 - 1e-14) return {SeedRun::Outcome::boundary, z / r, n};
    if (n == next_record) {
      next_record *= 2;
      proj.push_back(z / r);
      if (proj.size() >= 3) {
        std::size_t s = proj.size();
        cplx e = aitken(proj[s - 3], proj[s - 2], proj[s - 1]);
        e /= std::abs(e);
        est.push_back(e);
        if (n >= 256 && est.size() >= 2 && std::abs(est.back() - est[est.size() - 2]) < 1e-10 &&
            r > 0.95)
          return {SeedRun::Outcome::boundary, est.back(), n};
      }
    }
  }
  std::size_t s = est.size();
  if (s >= 2 && std::abs(z) > 0.95 && std::abs(est[s - 1] - est[s - 2]) < 1e-6)
    return {SeedRun::Outcome::boundary, est.back(), opt.max_iter};
  return {SeedRun::Outcome::stuck, z, opt.max_iter};
}

/// Newton for an interior fixed point of m.
inline std::optional<cplx> interior_fixed_point(const MapDescriptor& m, cplx seed) {
  DualFn F = [&m](const DualValue& u) { return m.eval_dual(u) - u; };
  NewtonResult r = newton_solve(F, 0.0, seed, [](cplx u) { return std::norm(u) < 1.0; });
  if (r.converged) return r.z;
  return std::nullopt;
}

}  // namespace detail

inline DenjoyWolffReport denjoy_wolff_report(const MapDescriptor& m, const DenjoyWolffOptions& opt = {}) {
  if (auto* mb = m.as<node::Mobius>()) {
    if (mb->m.is_identity()) throw Error(Errc::is_identity, "identity has no Denjoy-Wolff point");
    for (const FixedPoint& p : mobius_fixed_points(mb->m))
      if (p.location == PointLocation::interior &&
          std::abs(std::abs(mb->m.derivative(p.z)) - 1.0) < 1e-12)
        return {p.z, true, true, 0, 0.0};
  }
  const cplx seeds[] = {0.0, 0.4, -0.4, cplx(0, 0.4), cplx(0, -0.4)};
  std::vector<detail::SeedRun> runs;
  for (cplx s : seeds) runs.push_back(detail::run_seed(m, s, opt));

  std::optional<cplx> interior;
  bool stuck = false;
  for (const auto& r : runs) {
    if (r.outcome == detail::SeedRun::Outcome::interior) interior = r.point;
    if (r.outcome == detail::SeedRun::Outcome::stuck) stuck = true;
  }
  if (stuck) {
    // Bounded non-convergent orbits: look for a neutral interior fixed point.
    std::optional<cplx> p = interior;
    if (!p) p = detail::interior_fixed_point(m, 0.0);
    if (p && std::abs(std::abs(m.derivative(*p)) - 1.0) < 1e-9) return {*p, true, true, opt.max_iter, 0.0};
    throw Error(Errc::no_convergence, "orbits did not settle within " + std::to_string(opt.max_iter) + " iterations");
  }
  unsigned iters = 0;
  double spread = 0.0;
  for (const auto& r : runs) {
    iters = std::max(iters, r.iterations);
    spread = std::max(spread, std::abs(r.point - runs[0].point));
  }
  if (spread > opt.cross_check) {
    if (interior && std::abs(std::abs(m.derivative(*interior)) - 1.0) < 1e-9)
      return {*interior, true, true, iters, spread};
    throw Error(Errc::no_convergence, "seeds disagree on the Denjoy-Wolff point (spread " +
                                          std::to_string(spread) + ")");
  }
  cplx tau = runs[0].point;
  bool in = runs[0].outcome == detail::SeedRun::Outcome::interior;
  if (in) {
    auto p = detail::interior_fixed_point(m, tau);
    if (p) tau = *p;
  }
  return {tau, in, false, iters, spread};
}

/// Attracting point of the iterates; throws for elliptic automorphisms.
inline cplx denjoy_wolff(const MapDescriptor& m, const DenjoyWolffOptions& opt = {}) {
  DenjoyWolffReport r = denjoy_wolff_report(m, opt);
  if (r.elliptic_automorphism)
    throw Error(Errc::elliptic_automorphism, "map is an elliptic automorphism");
  return r.tau;
}

// ---------------------------------------------------------------------------
// Angular derivative at a boundary fixed point

struct BoundaryMultiplier {
  double value = 0.0;
  bool infinite = false;
  double error = 0.0;
  std::vector<double> quotients;  // (1 - |m(r_k tau)|)/(1 - r_k), k = k_min..k_max
};

inline BoundaryMultiplier boundary_multiplier_report(const MapDescriptor& m, cplx tau, int k_min = 8,
                                                     int k_max = 26) {
  std::vector<double> disp;
  std::vector<cplx> q;
  BoundaryMultiplier out;
  for (int k = k_min; k <= k_max; ++k) {
    double u = std::ldexp(1.0, -k);
    cplx w = m((1.0 - u) * tau);
    disp.push_back(std::abs(w - tau));
    double Q = (1.0 - std::abs(w)) / u;
    out.quotients.push_back(Q);
    q.push_back(Q);
  }
  std::size_t n = disp.size();
  if (!(disp[n - 1] < 1e-3 && disp[n - 1] < disp[n / 2] && disp[n / 2] < disp[0]))
    throw Error(Errc::not_a_fixed_point, "radial limit does not approach the point");
  const auto& Qs = out.quotients;
  if (Qs.back() > 1e8) {
    bool mono = true;
    for (std::size_t i = n - 5; i < n; ++i) mono = mono && Qs[i] > Qs[i - 1];
    if (mono) {
      out.infinite = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  Extrapolation e = richardson(q);
  out.value = e.value.real();
  out.error = e.error;
  return out;
}

inline double boundary_multiplier(const MapDescriptor& m, cplx tau) {
  return boundary_multiplier_report(m, tau).value;
}

// ---------------------------------------------------------------------------
// Hyperbolic step

enum class StepVerdict { zero, positive, undecided };

inline const char* step_verdict_name(StepVerdict v) {
  switch (v) {
    case StepVerdict::zero: return "zero";
    case StepVerdict::positive: return "positive";
    case StepVerdict::undecided: return "undecided";
  }
  return "undecided";
}

struct StepReport {
  StepVerdict verdict = StepVerdict::undecided;
  std::vector<double> q;  // q_n = rho(z_n, z_{n+1})
  bool underflow = false;
  double decay_slope = 0.0;  // fitted d log q / d log n over the tail
};

inline StepReport hyperbolic_step(const MapDescriptor& m, cplx z0 = 0.0, unsigned N = 400,
                                  double threshold = 0.02) {
  StepReport rep;
  cplx z = z0;
  for (unsigned n = 0; n < N; ++n) {
    cplx zn;
    try {
      zn = m(z);
    } catch (const Error&) {
      rep.underflow = true;
      break;
    }
    if (!(std::abs(zn) < 1.0 - 1e-15)) {
      rep.underflow = true;
      break;
    }
    double q = rho_disc(z, zn);
    rep.q.push_back(q);
    z = zn;
    std::size_t s = rep.q.size();
    if (s >= 2 && std::abs(rep.q[s - 1] - rep.q[s - 2]) < 1e-10 && q >= threshold) break;
  }
  const auto& q = rep.q;
  if (q.size() < 2) return rep;
  double last = q.back();
  if (last >= threshold) {
    std::size_t tail = std::max<std::size_t>(1, q.size() / 4);
    double lo = last, hi = last;
    for (std::size_t i = q.size() - tail; i < q.size(); ++i) {
      lo = std::min(lo, q[i]);
      hi = std::max(hi, q[i]);
    }
    if ((hi - lo) < 0.05 * last) rep.verdict = StepVerdict::positive;
    return rep;
  }
  if (q.size() < 20) return rep;
  std::size_t start = q.size() - q.size() / 4;
  bool mono = true;
  for (std::size_t i = start + 1; i < q.size(); ++i) mono = mono && q[i] <= q[i - 1] * (1.0 + 1e-9);
  // Least-squares slope of log q against log n on the tail.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = start; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    double x = std::log(static_cast<double>(i + 1)), y = std::log(q[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) rep.decay_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  if (mono && rep.decay_slope < -0.3) rep.verdict = StepVerdict::zero;
  return rep;
}

// ---------------------------------------------------------------------------
// Classification

enum class MapKind {
  elliptic_automorphism,
  elliptic,
  hyperbolic,
  parabolic_zero_step,
  parabolic_positive_step,
  parabolic_undecided,
};

inline const char* map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::elliptic_automorphism: return "elliptic-automorphism";
    case MapKind::elliptic: return "elliptic";
    case MapKind::hyperbolic: return "hyperbolic";
    case MapKind::parabolic_zero_step: return "parabolic-zero-step";
    case MapKind::parabolic_positive_step: return "parabolic-positive-step";
    case MapKind::parabolic_undecided: return "parabolic-undecided-step";
  }
  return "unknown";
}

inline bool is_parabolic(MapKind k) {
  return k == MapKind::parabolic_zero_step || k == MapKind::parabolic_positive_step ||
         k == MapKind::parabolic_undecided;
}

struct ClassifyOptions {
  double tol_mult = 1e-5;
  unsigned max_iter = 1u << 16;
  unsigned step_samples = 400;
};

struct ClassificationReport {
  cplx dw_point;
  MapKind kind;
  cplx multiplier;
  StepReport step;
  unsigned dw_iterations = 0;
  double dw_seed_spread = 0.0;
  double multiplier_error = 0.0;
};

inline ClassificationReport classify(const MapDescriptor& m, const ClassifyOptions& opt = {}) {
  DenjoyWolffOptions dwo;
  dwo.max_iter = opt.max_iter;
  DenjoyWolffReport dw = denjoy_wolff_report(m, dwo);
  ClassificationReport rep;
  rep.dw_point = dw.tau;
  rep.dw_iterations = dw.iterations;
  rep.dw_seed_spread = dw.seed_spread;
  if (dw.interior) {
    rep.multiplier = m.derivative(dw.tau);
    rep.kind = dw.elliptic_automorphism ? MapKind::elliptic_automorphism : MapKind::elliptic;
    return rep;
  }
  BoundaryMultiplier bm = boundary_multiplier_report(m, dw.tau);
  rep.multiplier = bm.value;
  rep.multiplier_error = bm.error;
  if (bm.value < 1.0 - opt.tol_mult) {
    rep.kind = MapKind::hyperbolic;
    return rep;
  }
  rep.step = hyperbolic_step(m, 0.0, opt.step_samples);
  switch (rep.step.verdict) {
    case StepVerdict::zero: rep.kind = MapKind::parabolic_zero_step; break;
    case StepVerdict::positive: rep.kind = MapKind::parabolic_positive_step; break;
    case StepVerdict::undecided: rep.kind = MapKind::parabolic_undecided; break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary fixed point scan

struct BRFPRecord {
  cplx sigma;
  double angular_derivative;  // +inf for super-repelling points
  bool regular;               // finite and repelling
  bool is_dw;
};

namespace detail {

inline double wrap_angle(double th) {
  th = std::fmod(th, 2.0 * kPi);
  return th < 0 ? th + 2.0 * kPi : th;
}

inline std::vector<double> local_extrema(const std::vector<double>& v, bool minima) {
  std::vector<double> idx;
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    double a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
    if (!std::isfinite(b)) continue;
    bool ext = minima ? (b <= a && b < c) : (b >= a && b > c);
    if (ext) idx.push_back(static_cast<double>(i));
  }
  return idx;
}

}  // namespace detail

inline std::vector<BRFPRecord> brfp_scan(const MapDescriptor& m, int n_angles = 256,
                                         std::optional<cplx> dw_hint = std::nullopt) {
  const double dth = 2.0 * kPi / n_angles;
  const double r20 = 1.0 - std::ldexp(1.0, -20);
  auto displacement = [&](double th, double r) {
    cplx s = std::polar(1.0, th);
    try {
      return std::abs(m(r * s) - s);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<double> d(n_angles);
  for (int i = 0; i < n_angles; ++i) d[i] = displacement(i * dth, r20);
  std::vector<double> cands;
  for (double i : detail::local_extrema(d, true)) {
    double th = golden_section([&](double t) { return displacement(t, r20); }, (i - 1) * dth, (i + 1) * dth, 1e-13);
    const double r26 = 1.0 - std::ldexp(1.0, -26);
    th = golden_section([&](double t) { return displacement(t, r26); }, th - 1e-5, th + 1e-5, 1e-15);
    cands.push_back(th);
  }

  // Koenigs criterion: |h(r sigma)| -> infinity at fixed points of a semigroup.
  if (auto* se = m.as<node::SemigroupElement>()) {
    const KoenigsMap& h = se->spec.koenigs();
    auto habs = [&](double th, double r) {
      try {
        return std::abs(h(r * std::polar(1.0, th)));
      } catch (const Error&) {
        return 0.0;
      }
    };
    std::vector<double> hv(n_angles);
    for (int i = 0; i < n_angles; ++i) hv[i] = habs(i * dth, r20);
    for (double i : detail::local_extrema(hv, false)) {
      double th = golden_section([&](double t) { return -habs(t, r20); }, (i - 1) * dth, (i + 1) * dth, 1e-13);
      // Increments of |h| along r_k must not decay.
      double prev = habs(th, 1.0 - std::ldexp(1.0, -12)), inc_prev = 0.0;
      bool diverges = true;
      for (int k = 14; k <= 24 && diverges; k += 2) {
        double cur = habs(th, 1.0 - std::ldexp(1.0, -k));
        double inc = cur - prev;
        if (inc <= 0.0 || (k > 14 && inc < 0.85 * inc_prev && cur < 1e6)) diverges = false;
        prev = cur;
        inc_prev = inc;
      }
      if (diverges) cands.push_back(th);
    }
  }

  // Near-coincident candidates are one point; keep the better-located one.
  const double r26 = 1.0 - std::ldexp(1.0, -26);
  std::vector<BRFPRecord> out;
  std::vector<double> seen, quality;
  for (double th : cands) {
    th = detail::wrap_angle(th);
    double q = displacement(th, r26);
    std::optional<std::size_t> dup;
    for (std::size_t k = 0; k < seen.size(); ++k) {
      double diff = std::abs(th - seen[k]);
      if (std::min(diff, 2.0 * kPi - diff) < 0.25 * dth) dup = k;
    }
    if (dup && quality[*dup] <= q) continue;
    cplx sigma = std::polar(1.0, th);
    BoundaryMultiplier bm;
    try {
      bm = boundary_multiplier_report(m, sigma);
    } catch (const Error&) {
      continue;
    }
    bool is_dw = bm.value <= 1.0 + 1e-6;
    if (dw_hint) is_dw = std::abs(sigma - *dw_hint) < 1e-6;
    BRFPRecord rec{sigma, bm.value, !bm.infinite && bm.value > 1.0 + 1e-6, is_dw};
    if (dup) {
      out[*dup] = rec;
      seen[*dup] = th;
      quality[*dup] = q;
    } else {
      out.push_back(rec);
      seen.push_back(th);
      quality.push_back(q);
    }
  }
  std::sort(out.begin(), out.end(), [](const BRFPRecord& a, const BRFPRecord& b) {
    return detail::wrap_angle(std::arg(a.sigma)) < detail::wrap_angle(std::arg(b.sigma));
  });
  return out;
}

}  // namespace holodyn
