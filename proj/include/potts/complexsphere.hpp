#pragma once

#include <cmath>
#include <complex>

namespace potts {

using cplx = std::complex<double>;

// A point on the Riemann sphere: a finite complex value or the distinguished
// point at infinity. Exactly one of the two states holds; the finite value is
// meaningless when infinite is set.
struct SpherePoint {
  cplx z{0.0, 0.0};
  bool infinite = false;

  SpherePoint() = default;
  SpherePoint(cplx v) : z(v) {}
  SpherePoint(double re, double im) : z(re, im) {}

  static SpherePoint infinity() {
    SpherePoint p;
    p.infinite = true;
    return p;
  }

  bool is_infinity() const { return infinite; }
  bool is_finite() const { return !infinite; }
  cplx value() const { return z; }
};

// Chordal metric on the sphere, range [0,2]. Puts the pole and infinity on an
// equal footing, so tests can compare huge and infinite results meaningfully.
inline double chordal_dist(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity() || b.is_infinity()) {
    const cplx w = a.is_infinity() ? b.z : a.z;
    return 2.0 / std::sqrt(1.0 + std::norm(w));
  }
  return 2.0 * std::abs(a.z - b.z) /
         std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

}  // namespace potts
