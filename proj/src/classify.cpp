#include "potts/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace potts {

namespace {

bool in_trap_1(const SpherePoint& w, double eps) {
  return w.is_finite() && std::abs(w.z - 1.0) < eps;
}

bool in_trap_inf(const SpherePoint& w, double R) {
  return w.is_infinity() || std::abs(w.z) > R;
}

}  // namespace

void BasinTestConfig::validate() const {
  if (!(attract_eps > 0.0 && attract_eps < 1.0))
    throw std::invalid_argument("BasinTestConfig: attract_eps must be in (0,1)");
  if (!(escape_R > 10.0))
    throw std::invalid_argument("BasinTestConfig: escape_R must be > 10");
  if (max_iter < 1)
    throw std::invalid_argument("BasinTestConfig: max_iter must be >= 1");
}

std::string to_string(BasinVerdict v) {
  switch (v) {
    case BasinVerdict::AttractedTo1:
      return "AttractedTo1";
    case BasinVerdict::AttractedToInfinity:
      return "AttractedToInfinity";
    default:
      return "Undetermined";
  }
}

std::string to_string(const ParamVerdict& v) {
  char buf[64];
  switch (v.kind) {
    case ParamKind::CaptureDepth:
      snprintf(buf, sizeof buf, "CaptureDepth(%d)", v.depth);
      return buf;
    case ParamKind::NonEscapingWithinBudget:
      snprintf(buf, sizeof buf, "NonEscapingWithinBudget(%d)", v.budget);
      return buf;
    default:
      return "Degenerate";
  }
}

double certified_escape_radius(const FamilyParams& p) {
  if (p.degenerate)
    throw std::invalid_argument("certified_escape_radius: lambda must be nonzero");
  const double al = std::abs(p.lambda);
  const double floor_rho = std::max(4.0, std::abs(1.0 - p.lambda) + 1.0);
  for (double rho = 4.0; rho <= 1e30; rho *= 2.0) {
    if (rho < floor_rho) continue;
    // |z| >= rho puts T(z) within s of 1, and (|lambda|/s - 1)^d >= rho sends
    // the second application back past rho, so the region is U-invariant
    const double u0 = al / (rho - 1.0);
    const double s = std::pow(1.0 + u0, p.d) - 1.0;
    if (al / s <= 1.0) continue;
    if (std::pow(al / s - 1.0, p.d) >= rho) return rho;
  }
  throw std::runtime_error("certified_escape_radius: search exhausted");
}

ClassifyContext::ClassifyContext(const FamilyParams& p_,
                                 const BasinTestConfig& cfg_)
    : p(p_), cfg(cfg_) {
  cfg.validate();
  if (!p.degenerate) {
    rho = certified_escape_radius(p);
    // the escape trap doubles as an A(inf) certificate in classify_parameter
    if (rho > 0.5 * cfg.escape_R)
      throw std::invalid_argument(
          "ClassifyContext: |lambda| too large for the escape trap");
  }
}

int cycle_phase(const ClassifyContext& c, const SpherePoint& w0) {
  SpherePoint w = w0;
  for (int j = 0; j <= c.cfg.max_iter; ++j) {
    if (in_trap_1(w, c.cfg.attract_eps)) return j % 2;
    if (in_trap_inf(w, c.cfg.escape_R)) return (j + 1) % 2;
    w = eval_T(c.p, w);
  }
  return -1;
}

namespace {

// one outward path from start: radius from 1 grows 5% per step, the heading
// detours by up to delta radians, ramped in over the first 15 steps
bool march_path(const ClassifyContext& c, cplx start, double delta) {
  for (int s = 1; s < 4000; ++s) {
    const double turn = delta * std::min(s, 15) / 15.0;
    const cplx w = 1.0 + (start - 1.0) * std::polar(std::pow(1.05, s), turn);
    if (cycle_phase(c, SpherePoint(w)) != 1) return false;
    if (std::abs(w - 1.0) >= c.rho + 1.0) return true;
  }
  return false;
}

}  // namespace

bool in_A_infinity(const ClassifyContext& c, const SpherePoint& z) {
  if (z.is_infinity()) return true;
  if (std::abs(z.z) >= c.rho) return true;
  if (std::abs(z.z - 1.0) == 0.0) return false;  // z = 1 sits in A(1)
  if (cycle_phase(c, z) != 1) return false;
  // march away from 1 through z; the phase must stay in the infinity state
  // all the way into the certified region. A straight ray can clip a fold of
  // the basin of 1, so detoured headings get a try before giving up.
  for (const double delta :
       {0.0, 0.25, -0.25, 0.5, -0.5, 0.8, -0.8, 1.2, -1.2})
    if (march_path(c, z.z, delta)) return true;
  return false;
}

PointOrbitResult classify_point_orbit(const ClassifyContext& c,
                                      const SpherePoint& z) {
  PointOrbitResult r;
  SpherePoint w = z;
  for (int k = 0; k <= c.cfg.max_iter; ++k) {
    const bool t1 = in_trap_1(w, c.cfg.attract_eps);
    const bool tinf = in_trap_inf(w, c.cfg.escape_R);
    if (t1 || tinf) {
      const SpherePoint next = eval_U(c.p, w);
      if (t1 && !in_trap_1(next, c.cfg.attract_eps))
        throw std::runtime_error("classify_point: trap at 1 not invariant");
      if (tinf && !in_trap_inf(next, c.cfg.escape_R))
        throw std::runtime_error("classify_point: escape trap not invariant");
      r.verdict = t1 ? BasinVerdict::AttractedTo1
                     : BasinVerdict::AttractedToInfinity;
      r.iters = k;
      r.last = w;
      return r;
    }
    if (k == c.cfg.max_iter) break;
    w = eval_U(c.p, w);
  }
  r.verdict = BasinVerdict::Undetermined;
  r.iters = c.cfg.max_iter;
  r.last = w;
  return r;
}

BasinVerdict classify_point(const ClassifyContext& c, const SpherePoint& z) {
  const auto r = classify_point_orbit(c, z);
  if (!c.cfg.certify_immediate || r.verdict == BasinVerdict::Undetermined)
    return r.verdict;
  if (r.verdict == BasinVerdict::AttractedToInfinity)
    return in_A_infinity(c, z) ? BasinVerdict::AttractedToInfinity
                               : BasinVerdict::Undetermined;
  // z in A(1) exactly when T(z) is in A(inf)
  return in_A_infinity(c, eval_T(c.p, z)) ? BasinVerdict::AttractedTo1
                                          : BasinVerdict::Undetermined;
}

BasinVerdict classify_point(const FamilyParams& p, const SpherePoint& z,
                            const BasinTestConfig& cfg) {
  return classify_point(ClassifyContext(p, cfg), z);
}

ParamVerdict classify_parameter(const ClassifyContext& c) {
  ParamVerdict v;
  if (c.p.degenerate) {
    v.kind = ParamKind::Degenerate;
    return v;
  }
  // T-orbit of 0 to the first trap hit
  std::vector<SpherePoint> orbit;
  orbit.reserve(256);
  orbit.emplace_back(cplx{0.0, 0.0});
  int hit = -1;
  bool hit_inf = false;
  for (int j = 1; j <= c.cfg.max_iter; ++j) {
    orbit.push_back(eval_T(c.p, orbit.back()));
    const SpherePoint& w = orbit.back();
    if (in_trap_1(w, c.cfg.attract_eps)) {
      hit = j;
      break;
    }
    if (in_trap_inf(w, c.cfg.escape_R)) {
      hit = j;
      hit_inf = true;
      break;
    }
  }
  if (hit < 0) {
    v.kind = ParamKind::NonEscapingWithinBudget;
    v.budget = c.cfg.max_iter;
    v.iterations_used = c.cfg.max_iter;
    return v;
  }
  // trap in the 1 phase means T^hit(0) is in A(1); trap in the infinity
  // phase certifies T^hit(0) in A(inf) (|w| > escape_R >= rho), so the
  // previous orbit point is in A(1)
  int n = hit_inf ? hit - 1 : hit;
  v.witness = orbit[hit];
  v.has_witness = true;
  v.iterations_used = hit;
  if (c.cfg.certify_immediate) {
    // minimal depth: the orbit indices certified inside A(inf) form an up-set
    // under steps of 2 (U maps the immediate basin into itself), so the depth
    // is decided by the least certifiable index. Scan from the bottom; a
    // conservative failure low in the chain only raises the bound, it cannot
    // block a certification higher up the way a downward walk would.
    // index 0 is excluded: the free critical point never sits in A(inf)
    const int parity = hit_inf ? hit % 2 : (hit - 1) % 2;
    for (int m = parity == 0 ? 2 : 1; m <= hit; m += 2) {
      if (in_A_infinity(c, orbit[m])) {
        n = m - 1;
        break;
      }
    }
  }
  v.kind = ParamKind::CaptureDepth;
  v.depth = n;
  return v;
}

ParamVerdict classify_parameter(const FamilyParams& p,
                                const BasinTestConfig& cfg) {
  return classify_parameter(ClassifyContext(p, cfg));
}

bool is_quasicircle(const FamilyParams& p, const BasinTestConfig& cfg) {
  const auto v = classify_parameter(p, cfg);
  return v.kind == ParamKind::CaptureDepth && v.depth == 0;
}

EquivReport equiv_condition_check(const FamilyParams& p,
                                  const BasinTestConfig& cfg) {
  const ClassifyContext c(p, cfg);
  const auto crit = critical_data(p);
  EquivReport rep;
  bool undet = false;
  auto check = [&](const SpherePoint& z, BasinVerdict want) {
    const auto got = classify_point(c, z);
    if (got == BasinVerdict::Undetermined) undet = true;
    return got == want;
  };
  rep.xi_in_Ainf = true;
  for (const auto& xi : crit.xi)
    rep.xi_in_Ainf = check(xi, BasinVerdict::AttractedToInfinity) && rep.xi_in_Ainf;
  rep.omega_in_A1 = true;
  for (const auto& om : crit.omega)
    rep.omega_in_A1 = check(om, BasinVerdict::AttractedTo1) && rep.omega_in_A1;
  rep.critval_in_Ainf =
      check(SpherePoint(1.0 - p.lambda), BasinVerdict::AttractedToInfinity);
  rep.zero_in_A1 = check(SpherePoint(0.0, 0.0), BasinVerdict::AttractedTo1);
  rep.quasicircle = is_quasicircle(p, cfg);
  rep.undetermined = undet;
  return rep;
}

GreenResult green_function(const FamilyParams& p, const SpherePoint& z,
                           int k_max, const BasinTestConfig& cfg) {
  cfg.validate();
  GreenResult g;
  if (z.is_infinity()) return g;  // NotAttracted
  if (std::abs(z.z - 1.0) < cfg.attract_eps) {
    g.kind = GreenResult::Center;
    return g;
  }
  const double dd = p.d;
  // superattracting log-recursion: |U(w)-1| = d|lambda|^(1-d) |w-1|^d with
  // O(|w-1|) relative error. Engaged at trap entry, because for large
  // |lambda| the very next raw iterate can round to exactly 1 and destroy
  // the magnitude the estimate needs.
  const double logc = std::log(dd) - (dd - 1.0) * std::log(std::abs(p.lambda));
  const double leps = std::log(cfg.attract_eps);
  SpherePoint w = z;
  double l = std::log(std::abs(w.z - 1.0));
  bool on_log = false;
  double dmk = 1.0, prev = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    if (on_log) {
      l = dd * l + logc;
    } else {
      w = eval_U(p, w);
      if (w.is_infinity()) return g;
      const double raw = std::log(std::abs(w.z - 1.0));
      if (raw < leps) {
        l = dd * l + logc;
        on_log = true;
      } else {
        l = raw;
      }
    }
    dmk /= dd;
    const double est = -dmk * l;
    if (on_log && k > 1 && std::abs(est - prev) < 1e-6) {
      g.kind = GreenResult::Value;
      g.value = est;
      g.k_used = k;
      return g;
    }
    prev = est;
  }
  return g;  // NotAttracted: never trapped or never converged within k_max
}

namespace {

// T^n(0) - 1 as a function of lambda, huge when the orbit blows up
cplx center_residual(int d, int n, cplx lambda) {
  if (lambda == 0.0) return {1e300, 0.0};
  const auto p = FamilyParams::from_lambda(d, lambda);
  SpherePoint z(0.0, 0.0);
  for (int k = 0; k < n; ++k) z = eval_T(p, z);
  if (z.is_infinity()) return {1e300, 0.0};
  return z.z - 1.0;
}

}  // namespace

FindCenterResult find_center(const FamilyParams& p0, int n, cplx seed,
                             const BasinTestConfig& cfg) {
  if (n < 1) throw std::invalid_argument("find_center: n must be >= 1");
  const int d = p0.d;
  const double h = 1e-7;
  FindCenterResult r;
  cplx lam = seed;
  for (int it = 0; it < 100; ++it) {
    const cplx F = center_residual(d, n, lam);
    r.residual = std::abs(F);
    r.steps = it;
    if (r.residual < 1e-10) {
      r.converged = true;
      break;
    }
    const cplx Fp =
        (center_residual(d, n, lam + h) - center_residual(d, n, lam - h)) /
        (2.0 * h);
    if (std::abs(Fp) < 1e-30) break;
    lam -= F / Fp;
  }
  r.lambda_star = lam;
  if (r.converged) {
    const auto v = classify_parameter(FamilyParams::from_lambda(d, lam), cfg);
    r.confirmed = v.kind == ParamKind::CaptureDepth && v.depth == n;
  }
  return r;
}

namespace {

// U(x) - x on the real axis; nan marks a pole or overflow
double real_gap(const FamilyParams& p, double x) {
  const SpherePoint u = eval_U(p, SpherePoint(x, 0.0));
  if (u.is_infinity()) return std::nan("");
  return u.z.real() - x;
}

StabilityClass classify_multiplier(double m) {
  const double am = std::abs(m);
  if (std::abs(am - 1.0) <= 1e-9) return StabilityClass::Parabolic;
  return am < 1.0 ? StabilityClass::Attracting : StabilityClass::Repelling;
}

}  // namespace

RealFixedPointReport real_fixed_points(const FamilyParams& p, double a,
                                       double b) {
  if (p.lambda.imag() != 0.0)
    throw std::invalid_argument("real_fixed_points: lambda must be real");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("real_fixed_points: bad interval");
  const int N = 10000;
  RealFixedPointReport rep;
  rep.a = a;
  rep.b = b;
  std::vector<double> xs(N + 1), gs(N + 1);
  for (int i = 0; i <= N; ++i) {
    xs[i] = a + (b - a) * i / N;
    gs[i] = real_gap(p, xs[i]);
  }
  auto push_root = [&](double x) {
    if (!rep.points.empty() && std::abs(x - rep.points.back().x) < 1e-10)
      return;
    // a sign change across the real pole of U bisects to the pole, not to a
    // fixed point; the gap there is huge instead of ~0
    const double gx = real_gap(p, x);
    if (std::isnan(gx) || std::abs(gx) > 1e-4 * (1.0 + std::abs(x))) return;
    const auto du = eval_U_prime(p, cplx(x, 0.0));
    RealFixedPoint fp;
    fp.x = x;
    fp.multiplier = du.infinite ? 1e300 : du.value.real();
    fp.cls = classify_multiplier(fp.multiplier);
    rep.points.push_back(fp);
  };
  int last_change = -2;
  for (int i = 0; i < N; ++i) {
    if (std::isnan(gs[i]) || std::isnan(gs[i + 1])) continue;
    if (gs[i] == 0.0) {
      push_root(xs[i]);
      continue;
    }
    if (gs[i] * gs[i + 1] < 0.0) {
      if (last_change == i - 1) rep.merged_roots_possible = true;
      last_change = i;
      double lo = xs[i], hi = xs[i + 1];
      double glo = gs[i];
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double gm = real_gap(p, mid);
        if (std::isnan(gm)) break;
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      push_root(0.5 * (lo + hi));
    }
  }
  if (!std::isnan(gs[N]) && gs[N] == 0.0) push_root(xs[N]);
  return rep;
}

}  // namespace potts
