#pragma once

#include <vector>

#include "potts/complexsphere.hpp"

namespace potts {

// Parameters of the map family T(z) = ((z+lambda-1)/(z-1))^d and U = T∘T,
// together with the rescaled coordinate alpha = lambda^(-1/(d+1)) (principal
// branch, polished so alpha^(d+1)*lambda = 1 to a few ulp) and q = -d used by
// the circle-perturbation machinery.
//
// Two special parameter states exist besides ordinary lambda != 0:
//   - degenerate_branch(d): lambda = 0, where U degenerates to the polynomial
//     ((z+d-1)/d)^d; T itself is undefined there.
//   - from_alpha(d, 0): alpha = 0 (lambda at infinity), valid only for the
//     rescaled-family operations f_alpha; T/U evaluation rejects it.
struct FamilyParams {
  int d = 2;
  cplx lambda{0.0, 0.0};
  cplx alpha{0.0, 0.0};
  int q = -2;
  bool degenerate = false;   // lambda == 0 polynomial branch
  bool alpha_zero = false;   // alpha == 0, lambda at infinity

  static FamilyParams from_lambda(int d, cplx lambda);
  static FamilyParams from_alpha(int d, cplx alpha);
  static FamilyParams degenerate_branch(int d);
};

// Critical points of U: xi_k are the preimages of 1 under T (xi_0 = infinity),
// omega_k the preimages of 1-lambda; 1, 1-lambda and infinity are the critical
// points shared with T.
struct CriticalData {
  std::vector<SpherePoint> xi;
  std::vector<SpherePoint> omega;
  std::vector<SpherePoint> fixed_crit;  // 1, 1-lambda, infinity
};

// Derivative evaluation result: poles of the derivative formula (the finite
// preimages of infinity) are reported as an infinite value, not a crash.
struct DerivResult {
  cplx value{0.0, 0.0};
  bool infinite = false;
};

SpherePoint eval_T(const FamilyParams& p, const SpherePoint& z);
SpherePoint eval_U(const FamilyParams& p, const SpherePoint& z);

// U'(z) in the overflow-safe scaled form of the real-axis derivative formula,
// extended to complex z. Requires a finite z.
DerivResult eval_U_prime(const FamilyParams& p, cplx z);

CriticalData critical_data(const FamilyParams& p);

// Rescaled family f_alpha(z) = sum_{i=0}^{d-1} C(d,i) alpha^i z^(i-d) and its
// exact term-by-term derivative. z = 0 is a pole: domain_error.
cplx eval_f_alpha(const FamilyParams& p, cplx z);
cplx eval_f_alpha_prime(const FamilyParams& p, cplx z);

// Binomial coefficient C(n,k) as a double; n stays small (the degree d).
double binomial(int n, int k);

}  // namespace potts
