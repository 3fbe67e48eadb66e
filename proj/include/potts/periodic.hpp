#pragma once

#include <vector>

#include "potts/complexsphere.hpp"
#include "potts/family.hpp"

namespace potts {

struct ContinuationOpts {
  double leg = 0.02;            // target |alpha| advance per continuation leg
  double alpha_ceiling = 0.25;  // refuse seeds beyond this |alpha|
  double newton_tol = 1e-12;
  int max_newton_steps = 60;
  int n_max_override = 0;  // 0 = per-degree default
};

// Largest period the default budgets allow: 14 for d=2, 9 for d=3, otherwise
// the largest n with d^n <= 2e5 points.
int default_n_max(int d);

struct PeriodicOrbitSet {
  int d = 2;
  int n = 1;
  cplx alpha;
  std::vector<cplx> points;       // ordered by the angle index j = 1..|q^n-1|
  std::vector<cplx> multipliers;  // (f_alpha^n)'(z) per point
  std::vector<double> residuals;  // |f_alpha^n(z) - z|
  std::vector<double> log_mod;    // log|multiplier|, cached for pressure sums
  size_t size() const { return points.size(); }
  double max_residual() const;
  double min_mult_mod() const;
  // min over arg-adjacent point pairs (with wraparound) of |z_i - z_j|
  double min_pair_gap() const;
};

// All fixed points of f_alpha^n: Newton continuation in alpha from the exact
// alpha = 0 roots of unity, one independent track per point. Throws on Newton
// stall (naming the point index and alpha-step) and on point collision.
PeriodicOrbitSet periodic_points(const FamilyParams& p, int n,
                                 const ContinuationOpts& opts = {});
PeriodicOrbitSet periodic_points_serial(const FamilyParams& p, int n,
                                        const ContinuationOpts& opts = {});

// A_n(D) = sum over points of |multiplier|^-D. Parallel term fill + fixed
// pairwise reduction, bit-stable across thread counts.
double pressure_sum(const PeriodicOrbitSet& orbits, double D);
double pressure_sum_serial(const PeriodicOrbitSet& orbits, double D);

struct DimensionEstimate {
  double D = 0.0;
  int n_used = 0;
  double residual = 0.0;  // |A_n(D) - 1|
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  cplx alpha;
};

// Solves A_n(D) = 1 by bisection on [0.5, 2] (A_n is strictly decreasing).
DimensionEstimate bowen_dimension(const FamilyParams& p, int n,
                                  const ContinuationOpts& opts = {});
DimensionEstimate bowen_dimension_from(const PeriodicOrbitSet& orbits);

// 1 + |lambda|^(-2/(d+1)) / (4 log d), the large-lambda dimension formula
// with no remainder term.
double asymptotic_dimension(const FamilyParams& p);

// Dimension sandwich from per-branch multiplier extrema: each branch modulus
// is replaced by the max (resp. min) of log|multiplier| over its arg-sorted
// neighbor triple and the two Moran equations are solved; s_lo <= D <= s_hi
// holds by construction since the true moduli lie inside the extrema.
struct IfsBounds {
  double s_lo = 0.0;
  double s_hi = 0.0;
};
IfsBounds ifs_sandwich(const PeriodicOrbitSet& orbits);

// Max of ||z| - 1| over Fix(f_alpha^n), n the smallest period giving at least
// n_samples points.
double julia_circle_deviation(const FamilyParams& p, int n_samples,
                              const ContinuationOpts& opts = {});

}  // namespace potts
