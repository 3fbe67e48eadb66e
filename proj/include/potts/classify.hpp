#pragma once

#include <string>
#include <vector>

#include "potts/family.hpp"

namespace potts {

// Thresholds realizing basin membership numerically. The traps are entered
// under U-iteration; certify_immediate additionally confirms membership in
// the immediate basins through the certified escape radius and a constant
// phase march, and downgrades unconfirmed verdicts to Undetermined.
struct BasinTestConfig {
  double attract_eps = 1e-8;  // |w - 1| below this certifies the basin of 1
  double escape_R = 1e8;      // |w| above this certifies the basin of infinity
  int max_iter = 5000;
  bool certify_immediate = true;
  void validate() const;
};

enum class BasinVerdict { AttractedTo1, AttractedToInfinity, Undetermined };

enum class ParamKind { CaptureDepth, NonEscapingWithinBudget, Degenerate };

// Verdict for one parameter. depth is valid for CaptureDepth, budget echoes
// the iteration budget for NonEscapingWithinBudget. witness is the first
// orbit point that triggered attraction, when there is one.
struct ParamVerdict {
  ParamKind kind = ParamKind::Degenerate;
  int depth = -1;
  int budget = 0;
  int iterations_used = 0;
  SpherePoint witness;
  bool has_witness = false;
};

std::string to_string(BasinVerdict v);
std::string to_string(const ParamVerdict& v);

// Smallest rho from a doubling search such that {|z| >= rho} is forward
// invariant under U and omits a disk around 0 and 1-lambda, so the region
// lies in the immediate basin of infinity.
double certified_escape_radius(const FamilyParams& p);

// Per-parameter classification state: validated config plus the certified
// escape radius, reused across many point queries at the same lambda.
struct ClassifyContext {
  FamilyParams p;
  BasinTestConfig cfg;
  double rho = 0.0;
  ClassifyContext(const FamilyParams& p_, const BasinTestConfig& cfg_);
};

// Phase of w relative to the 2-cycle {1, infinity} of T: 1 when the T-orbit
// of w first hits a trap in the infinity phase, 0 in the 1 phase, -1 when no
// trap is hit within the budget.
int cycle_phase(const ClassifyContext& c, const SpherePoint& w);

// Immediate-basin test for the basin of infinity: fast accept at |z| >= rho,
// otherwise march x_s = 1 + (z-1) 1.05^s outward and require the phase to
// stay 1 until the certified region. False on any doubt.
bool in_A_infinity(const ClassifyContext& c, const SpherePoint& z);

// U-orbit of z to the first trap entry. Trap invariance is asserted at
// runtime: the next iterate must stay inside, otherwise this throws.
struct PointOrbitResult {
  BasinVerdict verdict = BasinVerdict::Undetermined;
  int iters = 0;     // U steps taken to the trap entry
  SpherePoint last;  // the trap-entry iterate
};
PointOrbitResult classify_point_orbit(const ClassifyContext& c,
                                      const SpherePoint& z);

BasinVerdict classify_point(const ClassifyContext& c, const SpherePoint& z);
BasinVerdict classify_point(const FamilyParams& p, const SpherePoint& z,
                            const BasinTestConfig& cfg);

// Capture depth of the parameter: minimal k with T^k(0) in the immediate
// basin of 1, found from the first trap hit of the T-orbit of 0 and a
// walk-back through in_A_infinity. lambda = 0 is Degenerate.
ParamVerdict classify_parameter(const ClassifyContext& c);
ParamVerdict classify_parameter(const FamilyParams& p,
                                const BasinTestConfig& cfg);

// Depth 0 exactly.
bool is_quasicircle(const FamilyParams& p, const BasinTestConfig& cfg);

// The five equivalent quasicircle conditions, evaluated independently.
struct EquivReport {
  bool quasicircle = false;      // (1) depth 0
  bool xi_in_Ainf = false;       // (2) every pole xi_k in A(inf)
  bool omega_in_A1 = false;      // (3) every free critical point in A(1)
  bool critval_in_Ainf = false;  // (4) 1 - lambda in A(inf)
  bool zero_in_A1 = false;       // (5) 0 in A(1)
  bool undetermined = false;     // some sub-verdict was Undetermined
  bool all_equal() const {
    return xi_in_Ainf == quasicircle && omega_in_A1 == quasicircle &&
           critval_in_Ainf == quasicircle && zero_in_A1 == quasicircle;
  }
};
EquivReport equiv_condition_check(const FamilyParams& p,
                                  const BasinTestConfig& cfg);

// Green function of the basin of 1: -d^-k log|U^k(z) - 1|, returned once
// successive estimates differ by < 1e-6. Once |U^k(z) - 1| leaves the double
// range the recursion continues on the log, whose increment is exact in the
// superattracting regime. z within attract_eps of 1 at k = 0 is the center.
struct GreenResult {
  enum Kind { Value, Center, NotAttracted } kind = NotAttracted;
  double value = 0.0;
  int k_used = 0;
};
GreenResult green_function(const FamilyParams& p, const SpherePoint& z,
                           int k_max, const BasinTestConfig& cfg);

// Newton in lambda on T^n(0) - 1 = 0 with central finite differences,
// step 1e-7, at most 100 steps, residual target 1e-10. confirmed reports
// classify_parameter(lambda*) == CaptureDepth(n).
struct FindCenterResult {
  bool converged = false;
  cplx lambda_star;
  double residual = 0.0;
  int steps = 0;
  bool confirmed = false;
};
FindCenterResult find_center(const FamilyParams& p0, int n, cplx seed,
                             const BasinTestConfig& cfg);

enum class StabilityClass { Attracting, Parabolic, Repelling };

struct RealFixedPoint {
  double x = 0.0;
  double multiplier = 0.0;
  StabilityClass cls = StabilityClass::Repelling;
};

// Real fixed points of U on [a, b]: sign scan on a 10^4-point grid plus
// bisection to 1e-12. merged_roots_possible flags adjacent sign changes,
// where roots closer than the grid pitch may have merged.
struct RealFixedPointReport {
  double a = 0.0, b = 0.0;
  std::vector<RealFixedPoint> points;
  bool merged_roots_possible = false;
};
RealFixedPointReport real_fixed_points(const FamilyParams& p, double a,
                                       double b);

}  // namespace potts
