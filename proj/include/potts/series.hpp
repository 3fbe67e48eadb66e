#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "potts/complexsphere.hpp"

namespace potts {

// Truncation setup for the lacunary series u1, u2 with exponent base q.
// q = -d for the rescaled family. The tail of u1 is bounded by 2|q|^-K.
struct SeriesConfig {
  int q = -2;
  int K = 60;
};

// u1(z) = sum_k z^(q^k) / q^k, k >= 0. Exact-angle recursion on |z| = 1;
// inputs with 0.5 <= |z| < 1 evaluate honestly through exp(q^k log z) and can
// blow up since the series only converges on the circle. Inputs outside
// [0.5, 1] are rejected.
cplx u1(const SeriesConfig& c, cplx z);

// u2(z) = sum_k S(z^(q^k)) / q^k where
// S(w) = (q+1) w u1(w) - (q-1)/2 u1(w)^2 - (q+1)/2 w^2.
// For q = -2 the parent map is exactly two-term, its order-alpha^2 source has
// no w^2 part, and S drops the last term.
cplx u2(const SeriesConfig& c, cplx z);

// Second-order circle motion z (1 + u1(z) alpha + u2(z) alpha^2).
cplx phi_alpha(const SeriesConfig& c, cplx z, cplx alpha);

// Averaging over the angles t_j = j / (q^n - 1), j = 1..|q^n - 1|, all of
// them, period-divisor points included. The denominator keeps its sign.
struct AverageContext {
  int64_t q = -2;
  int n = 1;
  int64_t modulus = 1;     // |q^n - 1|
  int64_t signed_mod = 1;  // q^n - 1
  AverageContext(int64_t q_, int n_);
  // sigma_j = e^(2 pi i j / (q^n - 1))
  cplx point(int64_t j) const;
  // q^m mod |q^n - 1|, reduced into [0, modulus)
  int64_t residue_pow(int m) const;
  // index r such that sigma_j^(q^m) = e^(2 pi i r / (q^n - 1)), exact
  int64_t power_index(int64_t j, int m) const;
};

// Mean of G over the |q^n - 1| angles. Terms are filled in parallel and
// reduced by a fixed pairwise tree, so the result is thread-count invariant.
cplx average(const AverageContext& ctx,
             const std::function<cplx(int64_t, cplx)>& G);

// u1 and u2 tabulated at every lattice point sigma_r = e^(2 pi i r/(q^n - 1)),
// r = 0..|q^n - 1|-1. sigma_r^(q^k) is resolved by exact index arithmetic, so
// the tables keep the on-circle accuracy of the angle recursion and cost
// O(M K) instead of O(M K^2) for u2.
std::vector<cplx> u1_lattice(const AverageContext& ctx, int K = 60);
std::vector<cplx> u2_lattice(const AverageContext& ctx,
                             const std::vector<cplx>& u1_tab, int K = 60);

// Brute-force residue check of the three power-residue statements used by the
// vanishing averages, over all m, m1, m2 in [0, m_max].
struct ModularLemmaReport {
  int64_t q = 0;
  int n = 0;
  int m_max = 0;
  bool power_never_zero = false;
  bool pair_sum_never_zero = false;
  bool diff_zero_iff_period = false;
  bool all_ok() const {
    return power_never_zero && pair_sum_never_zero && diff_zero_iff_period;
  }
};
ModularLemmaReport modular_lemma_check(int64_t q, int n, int m_max);

struct IdentityRow {
  std::string id;
  cplx value;
  cplx closed;
  double abs_err = 0.0;
};

// Lattice-average identities for the order-alpha^2 multiplier data:
// the four closed-form double sums (n, nq/(q-1), nq^2/(q-1)^2, nq^4), the
// pointwise tables they are assembled from, and the vanishing averages.
struct AppendixSumsReport {
  int64_t q = 0;
  int n = 0;
  std::vector<IdentityRow> sums;
  std::vector<IdentityRow> pointwise;
  std::vector<IdentityRow> vanishing;
  double max_abs_err() const;
};
AppendixSumsReport appendix_sums(int64_t q, int n, int K = 60);

// Checks <prod_m |f'_alpha(phi_alpha(sigma^(q^m)))|^-D>_n against
// |q|^(-nD) (1 + D^2 n |alpha|^2 / 4 + O(alpha^3)).
struct SecondOrderReport {
  int d = 2;
  int n = 1;
  cplx alpha;
  double D = 1.0;
  double lhs = 0.0;        // the averaged product
  double base = 0.0;       // |q|^(-nD)
  double excess = 0.0;     // lhs/base - 1
  double predicted = 0.0;  // D^2 n |alpha|^2 / 4
  double remainder = 0.0;  // excess - predicted, should be O(alpha^3)
};
SecondOrderReport second_order_average_check(int d, int n, cplx alpha, double D,
                                             int K = 60);

}  // namespace potts
