#include "potts/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "potts/family.hpp"
#include "potts/pairwise.hpp"

namespace potts {

namespace {

cplx cis(double t) { return {std::cos(t), std::sin(t)}; }

void require_series(const SeriesConfig& c) {
  if (c.q > -2) throw std::invalid_argument("SeriesConfig: q must be <= -2");
  if (c.K < 8) throw std::invalid_argument("SeriesConfig: K must be >= 8");
}

bool near_circle(double az) { return std::abs(az - 1.0) < 1e-12; }

void require_annulus(double az, const char* who) {
  if (az < 0.5 - 1e-12 || az > 1.0 + 1e-12)
    throw std::domain_error(std::string(who) + ": |z| must lie in [0.5, 1]");
}

// u1 at e^(i th0). The angle recursion th <- q th mod 2pi loses ~|q|^k eps of
// phase by step k, which the 1/q^k weight cancels, so every term contributes
// O(eps) error and the total stays ~K eps.
cplx u1_circle(int q, int K, double th0) {
  cplx s{0.0, 0.0};
  double th = th0, w = 1.0;
  for (int k = 0; k < K; ++k) {
    s += cis(th) / w;
    w *= q;
    th = std::remainder(th * q, 2.0 * M_PI);
  }
  return s;
}

// z^p via exp(p log z) with the growth exponent clamped so off-circle inputs
// degrade to saturated values instead of overflowing.
cplx pow_clamped(cplx z, double p) {
  const cplx e = std::log(z) * p;
  return std::exp(cplx(std::clamp(e.real(), -700.0, 700.0), e.imag()));
}

cplx u1_general(int q, int K, cplx z) {
  cplx s{0.0, 0.0};
  double w = 1.0, p = 1.0;
  for (int k = 0; k < K; ++k) {
    s += pow_clamped(z, p) / w;
    w *= q;
    p *= q;
  }
  return s;
}

// order-alpha^2 source: S(w) = (q+1) w u1(w) - (q-1)/2 u1(w)^2 - (q+1)/2 w^2,
// last term dropped for q = -2 (two-term parent map).
cplx source_term(int q, cplx w, cplx u1w) {
  const double qd = q;
  cplx s = (qd + 1.0) * w * u1w - (qd - 1.0) / 2.0 * u1w * u1w;
  if (q != -2) s -= (qd + 1.0) / 2.0 * w * w;
  return s;
}

cplx u2_circle(int q, int K, double th0) {
  cplx s{0.0, 0.0};
  double th = th0, w = 1.0;
  for (int k = 0; k < K; ++k) {
    const cplx wk = cis(th);
    s += source_term(q, wk, u1_circle(q, K, th)) / w;
    w *= q;
    th = std::remainder(th * q, 2.0 * M_PI);
  }
  return s;
}

cplx u2_general(int q, int K, cplx z) {
  cplx s{0.0, 0.0};
  double w = 1.0, p = 1.0;
  for (int k = 0; k < K; ++k) {
    const cplx wk = pow_clamped(z, p);
    s += source_term(q, wk, u1_general(q, K, wk)) / w;
    w *= q;
    p *= q;
  }
  return s;
}

std::vector<cplx> unit_lattice(const AverageContext& ctx) {
  std::vector<cplx> lat(ctx.modulus);
  for (int64_t r = 0; r < ctx.modulus; ++r)
    lat[r] = cis(2.0 * M_PI * static_cast<double>(r) /
                 static_cast<double>(ctx.signed_mod));
  return lat;
}

}  // namespace

cplx u1(const SeriesConfig& c, cplx z) {
  require_series(c);
  const double az = std::abs(z);
  require_annulus(az, "u1");
  if (near_circle(az)) return u1_circle(c.q, c.K, std::arg(z));
  return u1_general(c.q, c.K, z);
}

cplx u2(const SeriesConfig& c, cplx z) {
  require_series(c);
  const double az = std::abs(z);
  require_annulus(az, "u2");
  if (near_circle(az)) return u2_circle(c.q, c.K, std::arg(z));
  return u2_general(c.q, c.K, z);
}

cplx phi_alpha(const SeriesConfig& c, cplx z, cplx alpha) {
  return z * (1.0 + u1(c, z) * alpha + u2(c, z) * alpha * alpha);
}

AverageContext::AverageContext(int64_t q_, int n_) : q(q_), n(n_) {
  if (q > -2) throw std::invalid_argument("AverageContext: q must be <= -2");
  if (n < 1) throw std::invalid_argument("AverageContext: n must be >= 1");
  int64_t p = 1;
  for (int i = 0; i < n; ++i) {
    p *= q;
    // power_index multiplies two residues below |q^n - 1|; cap so the product
    // stays inside int64
    if (std::abs(p) > (int64_t)1 << 31)
      throw std::invalid_argument("AverageContext: |q|^n too large");
  }
  signed_mod = p - 1;
  modulus = std::abs(signed_mod);
}

cplx AverageContext::point(int64_t j) const {
  const double t = static_cast<double>(j) / static_cast<double>(signed_mod);
  return cis(2.0 * M_PI * t);
}

int64_t AverageContext::residue_pow(int m) const {
  const int64_t qm = ((q % modulus) + modulus) % modulus;
  int64_t r = 1 % modulus;
  for (int i = 0; i < m; ++i) r = (r * qm) % modulus;
  return r;
}

int64_t AverageContext::power_index(int64_t j, int m) const {
  const int64_t jm = ((j % modulus) + modulus) % modulus;
  return (jm * residue_pow(m)) % modulus;
}

cplx average(const AverageContext& ctx,
             const std::function<cplx(int64_t, cplx)>& G) {
  const int64_t M = ctx.modulus;
  std::vector<cplx> terms(M);
#pragma omp parallel for schedule(static)
  for (int64_t j = 1; j <= M; ++j) terms[j - 1] = G(j, ctx.point(j));
  return pairwise_sum(terms) / static_cast<double>(M);
}

std::vector<cplx> u1_lattice(const AverageContext& ctx, int K) {
  const int64_t M = ctx.modulus;
  const auto lat = unit_lattice(ctx);
  std::vector<int64_t> rho(K);
  for (int k = 0; k < K; ++k) rho[k] = ctx.residue_pow(k);
  std::vector<cplx> tab(M);
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < M; ++r) {
    cplx s{0.0, 0.0};
    double w = 1.0;
    for (int k = 0; k < K; ++k) {
      s += lat[(r * rho[k]) % M] / w;
      w *= static_cast<double>(ctx.q);
    }
    tab[r] = s;
  }
  return tab;
}

std::vector<cplx> u2_lattice(const AverageContext& ctx,
                             const std::vector<cplx>& u1_tab, int K) {
  const int64_t M = ctx.modulus;
  if (static_cast<int64_t>(u1_tab.size()) != M)
    throw std::invalid_argument("u2_lattice: u1 table size mismatch");
  const auto lat = unit_lattice(ctx);
  std::vector<int64_t> rho(K);
  for (int k = 0; k < K; ++k) rho[k] = ctx.residue_pow(k);
  std::vector<cplx> tab(M);
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < M; ++r) {
    cplx s{0.0, 0.0};
    double w = 1.0;
    for (int k = 0; k < K; ++k) {
      const int64_t i = (r * rho[k]) % M;
      s += source_term(static_cast<int>(ctx.q), lat[i], u1_tab[i]) / w;
      w *= static_cast<double>(ctx.q);
    }
    tab[r] = s;
  }
  return tab;
}

ModularLemmaReport modular_lemma_check(int64_t q, int n, int m_max) {
  AverageContext ctx(q, n);
  const int64_t M = ctx.modulus;
  ModularLemmaReport r;
  r.q = q;
  r.n = n;
  r.m_max = m_max;
  std::vector<int64_t> rho(m_max + 1);
  for (int m = 0; m <= m_max; ++m) rho[m] = ctx.residue_pow(m);
  r.power_never_zero = true;
  for (int m = 0; m <= m_max; ++m)
    if (rho[m] == 0) r.power_never_zero = false;
  r.pair_sum_never_zero = true;
  r.diff_zero_iff_period = true;
  for (int m1 = 0; m1 <= m_max; ++m1) {
    for (int m2 = 0; m2 <= m_max; ++m2) {
      if ((rho[m1] + rho[m2]) % M == 0) r.pair_sum_never_zero = false;
      const bool zero = (rho[m1] - rho[m2]) % M == 0;
      const bool periodic = (m1 - m2) % n == 0;
      if (zero != periodic) r.diff_zero_iff_period = false;
    }
  }
  return r;
}

double AppendixSumsReport::max_abs_err() const {
  double m = 0.0;
  for (const auto& r : sums) m = std::max(m, r.abs_err);
  for (const auto& r : pointwise) m = std::max(m, r.abs_err);
  for (const auto& r : vanishing) m = std::max(m, r.abs_err);
  return m;
}

AppendixSumsReport appendix_sums(int64_t q, int n, int K) {
  AverageContext ctx(q, n);
  const int64_t M = ctx.modulus;
  const double qd = static_cast<double>(q);

  // sigma_j^(q^m), u1 and u2 there, and the order-alpha multiplier data A, B
  std::vector<int64_t> rho(n);
  for (int m = 0; m < n; ++m) rho[m] = ctx.residue_pow(m);
  std::vector<std::vector<cplx>> sp(M), u1v(M), u2v(M), A(M), B(M);
#pragma omp parallel for schedule(static)
  for (int64_t j = 1; j <= M; ++j) {
    auto& spj = sp[j - 1];
    auto& u1j = u1v[j - 1];
    auto& u2j = u2v[j - 1];
    auto& Aj = A[j - 1];
    auto& Bj = B[j - 1];
    spj.resize(n);
    u1j.resize(n);
    u2j.resize(n);
    Aj.resize(n);
    Bj.resize(n);
    for (int m = 0; m < n; ++m) {
      const int64_t r = (((j % M) + M) % M * rho[m]) % M;
      const double th =
          2.0 * M_PI * static_cast<double>(r) / static_cast<double>(ctx.signed_mod);
      spj[m] = cis(th);
      u1j[m] = u1_circle(static_cast<int>(q), K, th);
      u2j[m] = u2_circle(static_cast<int>(q), K, th);
      Aj[m] = qd * qd * (qd - 1.0) * u1j[m] - qd * qd * (qd + 1.0) * spj[m];
      Bj[m] = qd * qd * (qd + 1.0) * (qd + 2.0) / 2.0 * spj[m] * spj[m] +
              qd * qd * (qd - 1.0) * (qd - 2.0) / 2.0 * u1j[m] * u1j[m] -
              qd * qd * qd * (qd + 1.0) * spj[m] * u1j[m] +
              qd * qd * (qd - 1.0) * u2j[m];
    }
  }

  auto mean = [&](const std::function<cplx(int64_t)>& f) {
    std::vector<cplx> terms(M);
    for (int64_t j = 1; j <= M; ++j) terms[j - 1] = f(j);
    return pairwise_sum(terms) / static_cast<double>(M);
  };
  auto row = [](std::string id, cplx value, cplx closed) {
    return IdentityRow{std::move(id), value, closed, std::abs(value - closed)};
  };
  char name[96];

  AppendixSumsReport rep;
  rep.q = q;
  rep.n = n;

  // pointwise tables, assembled into the four closed double sums
  cplx s_delta{}, s_u1s{}, s_u1u1{}, s_AA{};
  for (int m1 = 0; m1 < n; ++m1) {
    for (int m2 = 0; m2 < n; ++m2) {
      const cplx v_delta =
          mean([&](int64_t j) { return sp[j - 1][m1] * std::conj(sp[j - 1][m2]); });
      const cplx c_delta = m1 == m2 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      const cplx v_u1s =
          mean([&](int64_t j) { return u1v[j - 1][m1] * std::conj(sp[j - 1][m2]); });
      const double Mn = static_cast<double>(ctx.signed_mod);
      const cplx c_u1s = m1 > m2 ? std::pow(qd, m1 - m2) / Mn
                                 : std::pow(qd, n - (m2 - m1)) / Mn;
      const cplx v_u1u1 = mean(
          [&](int64_t j) { return u1v[j - 1][m1] * std::conj(u1v[j - 1][m2]); });
      const int del = std::abs(m1 - m2);
      const cplx c_u1u1 = (std::pow(qd, -del) + std::pow(qd, -(n - del))) *
                          std::pow(qd, 2 + n) / ((qd * qd - 1.0) * Mn);
      const cplx v_AA =
          mean([&](int64_t j) { return A[j - 1][m1] * std::conj(A[j - 1][m2]); });
      const cplx c_AA = std::pow(qd, 4) * ((qd - 1.0) * (qd - 1.0) * c_u1u1 +
                                           (qd + 1.0) * (qd + 1.0) * c_delta -
                                           (qd * qd - 1.0) *
                                               (c_u1s + (m2 > m1
                                                             ? std::pow(qd, m2 - m1) / Mn
                                                             : std::pow(qd, n - (m1 - m2)) / Mn)));
      snprintf(name, sizeof name, "sigma_pow_diff[%d,%d]", m1, m2);
      rep.pointwise.push_back(row(name, v_delta, c_delta));
      snprintf(name, sizeof name, "u1_sigma[%d,%d]", m1, m2);
      rep.pointwise.push_back(row(name, v_u1s, c_u1s));
      snprintf(name, sizeof name, "u1_u1conj[%d,%d]", m1, m2);
      rep.pointwise.push_back(row(name, v_u1u1, c_u1u1));
      snprintf(name, sizeof name, "AAconj[%d,%d]", m1, m2);
      rep.pointwise.push_back(row(name, v_AA, c_AA));
      s_delta += v_delta;
      s_u1s += v_u1s;
      s_u1u1 += v_u1u1;
      s_AA += v_AA;
    }
  }
  const double nd = n;
  rep.sums.push_back(row("sum_sigma_pow_diff", s_delta, cplx{nd, 0.0}));
  rep.sums.push_back(row("sum_u1_sigma", s_u1s, cplx{nd * qd / (qd - 1.0), 0.0}));
  rep.sums.push_back(row("sum_u1_u1conj", s_u1u1,
                         cplx{nd * qd * qd / ((qd - 1.0) * (qd - 1.0)), 0.0}));
  rep.sums.push_back(row("sum_AAconj", s_AA, cplx{nd * std::pow(qd, 4), 0.0}));

  // vanishing averages for the same index ranges
  for (int m = 0; m < n; ++m) {
    snprintf(name, sizeof name, "mean_sigma_pow[%d]", m);
    rep.vanishing.push_back(
        row(name, mean([&](int64_t j) { return sp[j - 1][m]; }), cplx{}));
    snprintf(name, sizeof name, "mean_u1[%d]", m);
    rep.vanishing.push_back(
        row(name, mean([&](int64_t j) { return u1v[j - 1][m]; }), cplx{}));
    snprintf(name, sizeof name, "mean_u2[%d]", m);
    rep.vanishing.push_back(
        row(name, mean([&](int64_t j) { return u2v[j - 1][m]; }), cplx{}));
    snprintf(name, sizeof name, "mean_A[%d]", m);
    rep.vanishing.push_back(
        row(name, mean([&](int64_t j) { return A[j - 1][m]; }), cplx{}));
    snprintf(name, sizeof name, "mean_B[%d]", m);
    rep.vanishing.push_back(
        row(name, mean([&](int64_t j) { return B[j - 1][m]; }), cplx{}));
  }
  for (int m1 = 0; m1 < n; ++m1) {
    for (int m2 = 0; m2 < n; ++m2) {
      snprintf(name, sizeof name, "mean_sigma_pow_sum[%d,%d]", m1, m2);
      rep.vanishing.push_back(row(
          name, mean([&](int64_t j) { return sp[j - 1][m1] * sp[j - 1][m2]; }),
          cplx{}));
      snprintf(name, sizeof name, "mean_sigma_u1[%d,%d]", m1, m2);
      rep.vanishing.push_back(row(
          name, mean([&](int64_t j) { return sp[j - 1][m1] * u1v[j - 1][m2]; }),
          cplx{}));
      snprintf(name, sizeof name, "mean_u1_u1[%d,%d]", m1, m2);
      rep.vanishing.push_back(row(
          name, mean([&](int64_t j) { return u1v[j - 1][m1] * u1v[j - 1][m2]; }),
          cplx{}));
      snprintf(name, sizeof name, "mean_A_A[%d,%d]", m1, m2);
      rep.vanishing.push_back(
          row(name, mean([&](int64_t j) { return A[j - 1][m1] * A[j - 1][m2]; }),
              cplx{}));
    }
  }
  return rep;
}

SecondOrderReport second_order_average_check(int d, int n, cplx alpha, double D,
                                             int K) {
  if (d < 2) throw std::invalid_argument("second_order_average_check: d >= 2");
  AverageContext ctx(-d, n);
  const auto p = FamilyParams::from_alpha(d, alpha);
  const int64_t M = ctx.modulus;
  std::vector<int64_t> rho(n);
  for (int m = 0; m < n; ++m) rho[m] = ctx.residue_pow(m);

  std::vector<cplx> terms(M);
#pragma omp parallel for schedule(static)
  for (int64_t j = 1; j <= M; ++j) {
    double prod = 1.0;
    for (int m = 0; m < n; ++m) {
      const int64_t r = (((j % M) + M) % M * rho[m]) % M;
      const double th =
          2.0 * M_PI * static_cast<double>(r) / static_cast<double>(ctx.signed_mod);
      const cplx sig = cis(th);
      const cplx w =
          sig * (1.0 + u1_circle(-d, K, th) * alpha + u2_circle(-d, K, th) * alpha * alpha);
      prod *= std::pow(std::abs(eval_f_alpha_prime(p, w)), -D);
    }
    terms[j - 1] = cplx{prod, 0.0};
  }
  SecondOrderReport rep;
  rep.d = d;
  rep.n = n;
  rep.alpha = alpha;
  rep.D = D;
  rep.lhs = (pairwise_sum(terms) / static_cast<double>(M)).real();
  rep.base = std::pow(static_cast<double>(d), -n * D);
  rep.excess = rep.lhs / rep.base - 1.0;
  rep.predicted = D * D * n * std::norm(alpha) / 4.0;
  rep.remainder = rep.excess - rep.predicted;
  return rep;
}

}  // namespace potts
