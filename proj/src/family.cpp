#include "potts/family.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace potts {

namespace {

cplx cis(double t) { return {std::cos(t), std::sin(t)}; }

// a/b with the modulus capped at exp(690) so a denormal-small divisor cannot
// produce an infinity that would poison later phase arithmetic.
cplx guarded_div(cplx a, cplx b) {
  const double la = std::abs(a), lb = std::abs(b);
  if (la == 0.0) return {0.0, 0.0};
  if (std::log(la) - std::log(lb) > 690.0)
    return std::exp(690.0) * cis(std::arg(a) - std::arg(b));
  return a / b;
}

// w^d with the result modulus clamped to [exp(-690), exp(690)]. The clamp is
// 150 decades beyond any basin trap, so the dynamics never see it; it only
// prevents overflow for points within 1e-300 of the pole.
cplx int_pow_clamped(cplx w, int d) {
  const double aw = std::abs(w);
  if (aw == 0.0) return {0.0, 0.0};
  const double lm = d * std::log(aw);
  if (lm > 690.0 || lm < -690.0) {
    const double m = std::exp(std::clamp(lm, -690.0, 690.0));
    return m * cis(d * std::arg(w));
  }
  cplx r{1.0, 0.0}, b = w;
  for (int e = d; e;) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

void require_degree(int d) {
  if (d < 2) throw std::invalid_argument("FamilyParams: degree d must be >= 2");
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

FamilyParams FamilyParams::from_lambda(int d, cplx lambda) {
  require_degree(d);
  if (lambda == 0.0)
    throw std::invalid_argument(
        "FamilyParams: lambda = 0 requires degenerate_branch()");
  FamilyParams p;
  p.d = d;
  p.q = -d;
  p.lambda = lambda;
  p.alpha = std::pow(lambda, cplx(-1.0 / (d + 1), 0.0));
  // Newton iterations on alpha^(d+1)*lambda = 1. pow() alone can be several
  // ulp off and one step is not always enough, so iterate and keep the best
  // candidate by an extended-precision residual.
  cplx best = p.alpha;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 5; ++it) {
    std::complex<long double> aw{1.0L, 0.0L};
    const std::complex<long double> al(p.alpha.real(), p.alpha.imag());
    for (int k = 0; k <= d; ++k) aw *= al;
    const std::complex<long double> gl =
        aw * std::complex<long double>(lambda.real(), lambda.imag()) - 1.0L;
    const double res = static_cast<double>(std::abs(gl));
    if (res < best_res) {
      best_res = res;
      best = p.alpha;
    }
    if (res == 0.0) break;
    const cplx g(static_cast<double>(gl.real()), static_cast<double>(gl.imag()));
    p.alpha *= 1.0 - g / static_cast<double>(d + 1);
  }
  p.alpha = best;
  return p;
}

FamilyParams FamilyParams::from_alpha(int d, cplx alpha) {
  require_degree(d);
  FamilyParams p;
  p.d = d;
  p.q = -d;
  p.alpha = alpha;
  if (alpha == 0.0) {
    p.alpha_zero = true;
    p.lambda = cplx(std::numeric_limits<double>::infinity(), 0.0);
  } else {
    p.lambda = 1.0 / int_pow_clamped(alpha, d + 1);
  }
  return p;
}

FamilyParams FamilyParams::degenerate_branch(int d) {
  require_degree(d);
  FamilyParams p;
  p.d = d;
  p.q = -d;
  p.lambda = 0.0;
  p.alpha = 0.0;
  p.degenerate = true;
  return p;
}

namespace {

void require_map_params(const FamilyParams& p, const char* who) {
  if (p.alpha_zero)
    throw std::domain_error(std::string(who) +
                            ": alpha = 0 params support only f_alpha");
}

}  // namespace

SpherePoint eval_T(const FamilyParams& p, const SpherePoint& z) {
  require_map_params(p, "eval_T");
  if (p.degenerate)
    throw std::domain_error("eval_T: lambda = 0 degenerates at the U level only");
  if (z.is_infinity()) return SpherePoint(cplx(1.0, 0.0));
  const cplx zm1 = z.z - 1.0;
  if (zm1 == 0.0) return SpherePoint::infinity();
  // (z+lambda-1)/(z-1) = 1 + lambda/(z-1); only the final power can get big
  const cplx w = 1.0 + guarded_div(p.lambda, zm1);
  return SpherePoint(int_pow_clamped(w, p.d));
}

SpherePoint eval_U(const FamilyParams& p, const SpherePoint& z) {
  require_map_params(p, "eval_U");
  if (p.degenerate) {
    if (z.is_infinity()) return SpherePoint::infinity();
    const cplx w = (z.z + static_cast<double>(p.d - 1)) / static_cast<double>(p.d);
    return SpherePoint(int_pow_clamped(w, p.d));
  }
  return eval_T(p, eval_T(p, z));
}

DerivResult eval_U_prime(const FamilyParams& p, cplx z) {
  require_map_params(p, "eval_U_prime");
  if (p.degenerate) {
    const cplx w = (z + static_cast<double>(p.d - 1)) / static_cast<double>(p.d);
    return {int_pow_clamped(w, p.d - 1), false};
  }
  const cplx a = z + p.lambda - 1.0;
  const cplx b = z - 1.0;
  const double s = std::max(std::abs(a), std::abs(b));
  if (s == 0.0) return {cplx{}, true};
  const cplx as = a / s, bs = b / s;
  const cplx A = int_pow_clamped(as, p.d);
  const cplx B = int_pow_clamped(bs, p.d);
  const cplx den1 = A - B;
  const double aden = std::abs(den1);
  // (A-B)^(d+1) underflowing means z sits at (or within rounding of) a finite
  // preimage of infinity: an actual pole of U'.
  if (aden == 0.0 || (p.d + 1) * std::log(aden) < -690.0) return {cplx{}, true};
  const cplx num = int_pow_clamped(as, p.d - 1) * int_pow_clamped(bs, p.d - 1) *
                   int_pow_clamped(A + (p.lambda - 1.0) * B, p.d - 1);
  const cplx den = int_pow_clamped(den1, p.d + 1);
  const double d2 = static_cast<double>(p.d) * p.d;
  return {d2 * p.lambda * p.lambda * num / den / (s * s), false};
}

CriticalData critical_data(const FamilyParams& p) {
  require_map_params(p, "critical_data");
  if (p.degenerate)
    throw std::domain_error("critical_data: requires lambda != 0");
  CriticalData c;
  c.xi.reserve(p.d);
  c.omega.reserve(p.d);
  c.xi.push_back(SpherePoint::infinity());
  for (int k = 1; k < p.d; ++k) {
    const cplx zk = cis(2.0 * M_PI * k / p.d);
    c.xi.push_back(SpherePoint(1.0 + guarded_div(p.lambda, zk - 1.0)));
  }
  if (p.lambda == 1.0) {
    // omega formula degenerates: T(z) = (z/(z-1))^d vanishes only at z = 0
    for (int k = 0; k < p.d; ++k) c.omega.push_back(SpherePoint(cplx{0.0, 0.0}));
  } else {
    const cplx r = std::pow(1.0 - p.lambda, cplx(1.0 / p.d, 0.0));
    for (int k = 0; k < p.d; ++k) {
      const cplx den = r * cis(2.0 * M_PI * k / p.d) - 1.0;
      if (den == 0.0)
        c.omega.push_back(SpherePoint::infinity());
      else
        c.omega.push_back(SpherePoint(1.0 + guarded_div(p.lambda, den)));
    }
  }
  c.fixed_crit = {SpherePoint(cplx(1.0, 0.0)), SpherePoint(1.0 - p.lambda),
                  SpherePoint::infinity()};
  return c;
}

cplx eval_f_alpha(const FamilyParams& p, cplx z) {
  if (z == 0.0) throw std::domain_error("eval_f_alpha: pole at z = 0");
  const cplx w = 1.0 / z;
  cplx acc{0.0, 0.0}, apow{1.0, 0.0};
  for (int i = 0; i < p.d; ++i) {
    acc = acc * w + binomial(p.d, i) * apow;
    apow *= p.alpha;
  }
  return acc * w;
}

cplx eval_f_alpha_prime(const FamilyParams& p, cplx z) {
  if (z == 0.0) throw std::domain_error("eval_f_alpha_prime: pole at z = 0");
  const cplx w = 1.0 / z;
  cplx acc{0.0, 0.0}, apow{1.0, 0.0};
  for (int i = 0; i < p.d; ++i) {
    acc = acc * w - static_cast<double>(p.d - i) * binomial(p.d, i) * apow;
    apow *= p.alpha;
  }
  return acc * w * w;
}

}  // namespace potts
