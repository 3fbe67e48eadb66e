#include "potts/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "potts/pairwise.hpp"
#include "potts/series.hpp"

namespace potts {

int default_n_max(int d) {
  if (d == 2) return 14;
  if (d == 3) return 9;
  int n = 1;
  double c = d;
  while (c * d <= 2e5) {
    c *= d;
    ++n;
  }
  return n;
}

double PeriodicOrbitSet::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

double PeriodicOrbitSet::min_mult_mod() const {
  double m = 1e300;
  for (const cplx& v : multipliers) m = std::min(m, std::abs(v));
  return m;
}

double PeriodicOrbitSet::min_pair_gap() const {
  const size_t M = points.size();
  if (M < 2) return 1e300;
  std::vector<size_t> idx(M);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return std::arg(points[a]) < std::arg(points[b]);
  });
  double gap = 1e300;
  for (size_t i = 0; i < M; ++i) {
    const size_t k = i + 1 == M ? 0 : i + 1;
    gap = std::min(gap, std::abs(points[idx[i]] - points[idx[k]]));
  }
  return gap;
}

namespace {

struct NewtonOut {
  cplx z;
  double res;
  bool ok;
};

// one Newton solve of f_alpha^n(z) = z from seed z0, rejected if any step or
// the total displacement leaves the capture disk around the seed
NewtonOut newton_fixed(const FamilyParams& p, int n, cplx z0, double tol,
                       int max_steps, double capture) {
  cplx z = z0;
  double res = 1e300;
  for (int it = 0; it < max_steps; ++it) {
    cplx w = z, dp{1.0, 0.0};
    bool bad = false;
    for (int m = 0; m < n; ++m) {
      if (w == 0.0 || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        bad = true;
        break;
      }
      dp *= eval_f_alpha_prime(p, w);
      w = eval_f_alpha(p, w);
    }
    if (bad) return {z, 1e300, false};
    const cplx F = w - z;
    res = std::abs(F);
    if (res < tol) return {z, res, true};
    const cplx Fp = dp - 1.0;
    if (std::abs(Fp) < 1e-14) return {z, res, false};
    const cplx step = F / Fp;
    z -= step;
    if (std::abs(step) > capture || std::abs(z - z0) > capture)
      return {z, res, false};  // hopping toward a neighboring root
    // the orbit product amplifies roundoff by ~|mult|, so the residual can
    // floor just above tol; a collapsed step means Newton is done
    if (std::abs(step) < 4e-16 * (1.0 + std::abs(z)))
      return {z, res, res < 1e3 * tol};
  }
  return {z, res, false};
}

// Leg count for the continuation from alpha = 0. The predictor below keeps
// the per-leg seed error near 6|alpha|^3/K^2, which must sit well inside the
// lattice spacing 2 pi / M or Newton can capture a neighboring root.
int choose_legs(double amod, double M, double leg) {
  const double k1 = std::ceil(amod / leg);
  const double k2 = std::ceil(std::sqrt(25.0 * amod * amod * amod * M));
  return static_cast<int>(std::max({3.0, k1, k2}));
}

struct TrackOut {
  cplx z, mult;
  double res = 0.0;
  double t_fail = 0.0;
  bool ok = false;
};

// Track one root from alpha = 0 to the target along the ray t*alpha. Legs are
// seeded from the second-order circle motion plus a linearly extrapolated
// defect, so Newton starts far inside the capture disk of its own root; on a
// rejected leg the whole track restarts with doubled leg count.
TrackOut track_point(int d, cplx alpha, int n, const ContinuationOpts& o,
                     cplx sigma, cplx u1j, cplx u2j, int K0, double spacing) {
  const double capture = 0.45 * spacing;
  TrackOut out;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const int K = K0 << attempt;
    cplx z{}, d1{}, d2{};
    bool ok = true;
    for (int k = 1; k <= K; ++k) {
      const cplx a = alpha * (static_cast<double>(k) / K);
      const cplx base = sigma * (1.0 + u1j * a + u2j * a * a);
      cplx pred = base;
      if (k == 2) pred += d1;
      if (k > 2) pred += 2.0 * d1 - d2;
      const auto pa = FamilyParams::from_alpha(d, a);
      const auto r =
          newton_fixed(pa, n, pred, o.newton_tol, o.max_newton_steps, capture);
      if (!r.ok) {
        ok = false;
        out.t_fail = static_cast<double>(k) / K;
        break;
      }
      d2 = d1;
      d1 = r.z - base;
      z = r.z;
    }
    if (!ok) continue;
    const auto pt = FamilyParams::from_alpha(d, alpha);
    cplx w = z, dp{1.0, 0.0};
    for (int m = 0; m < n; ++m) {
      dp *= eval_f_alpha_prime(pt, w);
      w = eval_f_alpha(pt, w);
    }
    out.z = z;
    out.mult = dp;
    out.res = std::abs(w - z);
    out.ok = true;
    return out;
  }
  return out;
}

PeriodicOrbitSet build_orbits(const FamilyParams& p, int n,
                              const ContinuationOpts& o, bool parallel) {
  if (p.degenerate)
    throw std::domain_error("periodic_points: needs the rescaled family");
  const int nmax = o.n_max_override > 0 ? o.n_max_override : default_n_max(p.d);
  if (n < 1 || n > nmax) {
    char buf[96];
    snprintf(buf, sizeof buf, "periodic_points: n=%d outside [1, %d]", n, nmax);
    throw std::invalid_argument(buf);
  }
  if (std::abs(p.alpha) > o.alpha_ceiling)
    throw std::invalid_argument(
        "periodic_points: |alpha| above the continuation ceiling");

  AverageContext ctx(-p.d, n);
  const int64_t M = ctx.modulus;
  PeriodicOrbitSet s;
  s.d = p.d;
  s.n = n;
  s.alpha = p.alpha;
  s.points.resize(M);
  s.multipliers.resize(M);
  s.residuals.resize(M);
  s.log_mod.resize(M);

  if (p.alpha == 0.0) {
    // f_0^n fixes the roots of unity exactly, multiplier q^n sigma^(q^n-1) = q^n
    double qn = 1.0;
    for (int m = 0; m < n; ++m) qn *= -p.d;
    const double lm = n * std::log(static_cast<double>(p.d));
    for (int64_t j = 1; j <= M; ++j) {
      s.points[j - 1] = ctx.point(j);
      s.multipliers[j - 1] = {qn, 0.0};
      s.residuals[j - 1] = 0.0;
      s.log_mod[j - 1] = lm;
    }
    return s;
  }

  const auto u1_tab = u1_lattice(ctx);
  const auto u2_tab = u2_lattice(ctx, u1_tab);
  const double spacing = 2.0 * M_PI / static_cast<double>(M);
  const int K0 = choose_legs(std::abs(p.alpha), static_cast<double>(M), o.leg);

  std::vector<double> fail_t(M, -1.0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (int64_t j = 1; j <= M; ++j) {
    const int64_t r = j % M;
    const auto tr = track_point(p.d, p.alpha, n, o, ctx.point(j), u1_tab[r],
                                u2_tab[r], K0, spacing);
    if (tr.ok) {
      s.points[j - 1] = tr.z;
      s.multipliers[j - 1] = tr.mult;
      s.residuals[j - 1] = tr.res;
      s.log_mod[j - 1] = std::log(std::abs(tr.mult));
    } else {
      fail_t[j - 1] = tr.t_fail;
    }
  }
  for (int64_t j = 1; j <= M; ++j) {
    if (fail_t[j - 1] >= 0.0) {
      char buf[128];
      snprintf(buf, sizeof buf,
               "periodic_points: Newton stalled at j=%lld, alpha-step t=%.4f",
               static_cast<long long>(j), fail_t[j - 1]);
      throw std::runtime_error(buf);
    }
  }
  if (s.min_pair_gap() <= 1e-8)
    throw std::runtime_error("periodic_points: point collision, min gap <= 1e-8");
  return s;
}

double pressure_of_logs(const std::vector<double>& logs, double D,
                        bool parallel) {
  const int64_t M = static_cast<int64_t>(logs.size());
  std::vector<double> terms(M);
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t i = 0; i < M; ++i) terms[i] = std::exp(-D * logs[i]);
  return pairwise_sum(terms);
}

// bisection for P(s) = 1 with P strictly decreasing
double moran_root(const std::vector<double>& logs, double lo, double hi,
                  const char* who) {
  if (!(pressure_of_logs(logs, lo, true) >= 1.0 &&
        pressure_of_logs(logs, hi, true) <= 1.0)) {
    char buf[128];
    snprintf(buf, sizeof buf, "%s: bracket [%g, %g] does not straddle 1", who,
             lo, hi);
    throw std::runtime_error(buf);
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (pressure_of_logs(logs, mid, true) >= 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PeriodicOrbitSet periodic_points(const FamilyParams& p, int n,
                                 const ContinuationOpts& opts) {
  return build_orbits(p, n, opts, true);
}

PeriodicOrbitSet periodic_points_serial(const FamilyParams& p, int n,
                                        const ContinuationOpts& opts) {
  return build_orbits(p, n, opts, false);
}

double pressure_sum(const PeriodicOrbitSet& orbits, double D) {
  return pressure_of_logs(orbits.log_mod, D, true);
}

double pressure_sum_serial(const PeriodicOrbitSet& orbits, double D) {
  return pressure_of_logs(orbits.log_mod, D, false);
}

DimensionEstimate bowen_dimension_from(const PeriodicOrbitSet& orbits) {
  if (orbits.min_mult_mod() <= 1.0)
    throw std::runtime_error("bowen_dimension: non-repelling multiplier");
  double lo = 0.5, hi = 2.0;
  if (!(pressure_sum(orbits, lo) >= 1.0 && pressure_sum(orbits, hi) <= 1.0))
    throw std::runtime_error(
        "bowen_dimension: bracket [0.5, 2] does not straddle A_n = 1");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (pressure_sum(orbits, mid) >= 1.0 ? lo : hi) = mid;
  }
  DimensionEstimate e;
  e.D = 0.5 * (lo + hi);
  e.n_used = orbits.n;
  e.residual = std::abs(pressure_sum(orbits, e.D) - 1.0);
  e.bracket_lo = lo;
  e.bracket_hi = hi;
  e.alpha = orbits.alpha;
  return e;
}

DimensionEstimate bowen_dimension(const FamilyParams& p, int n,
                                  const ContinuationOpts& opts) {
  return bowen_dimension_from(periodic_points(p, n, opts));
}

double asymptotic_dimension(const FamilyParams& p) {
  if (p.degenerate)
    throw std::invalid_argument("asymptotic_dimension: lambda must be nonzero");
  if (p.alpha_zero) return 1.0;  // lambda = infinity limit
  return 1.0 + std::pow(std::abs(p.lambda), -2.0 / (p.d + 1)) /
                   (4.0 * std::log(static_cast<double>(p.d)));
}

IfsBounds ifs_sandwich(const PeriodicOrbitSet& orbits) {
  const size_t M = orbits.size();
  if (M < 3) throw std::invalid_argument("ifs_sandwich: needs >= 3 points");
  std::vector<size_t> idx(M);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return std::arg(orbits.points[a]) < std::arg(orbits.points[b]);
  });
  std::vector<double> hi_log(M), lo_log(M);
  for (size_t i = 0; i < M; ++i) {
    const double a = orbits.log_mod[idx[(i + M - 1) % M]];
    const double b = orbits.log_mod[idx[i]];
    const double c = orbits.log_mod[idx[(i + 1) % M]];
    hi_log[i] = std::max({a, b, c});
    lo_log[i] = std::min({a, b, c});
  }
  IfsBounds bounds;
  bounds.s_lo = moran_root(hi_log, 0.25, 3.0, "ifs_sandwich");
  bounds.s_hi = moran_root(lo_log, 0.25, 3.0, "ifs_sandwich");
  return bounds;
}

double julia_circle_deviation(const FamilyParams& p, int n_samples,
                              const ContinuationOpts& opts) {
  if (n_samples < 1)
    throw std::invalid_argument("julia_circle_deviation: n_samples >= 1");
  const int nmax =
      opts.n_max_override > 0 ? opts.n_max_override : default_n_max(p.d);
  int n = 0;
  double count = 0.0, qn = 1.0;
  for (int k = 1; k <= nmax; ++k) {
    qn *= -p.d;
    count = std::abs(qn - 1.0);
    if (count >= n_samples) {
      n = k;
      break;
    }
  }
  if (n == 0)
    throw std::invalid_argument(
        "julia_circle_deviation: n_samples unreachable within n_max");
  const auto orbits = periodic_points(p, n, opts);
  double dev = 0.0;
  for (const cplx& z : orbits.points)
    dev = std::max(dev, std::abs(std::abs(z) - 1.0));
  return dev;
}

}  // namespace potts
