#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "potts/family.hpp"
#include "potts/series.hpp"

using namespace potts;

namespace {

cplx cis(double t) { return {std::cos(t), std::sin(t)}; }

// z^q for z on the unit circle, kept on the circle exactly
cplx circle_pow(cplx z, int e) {
  return cis(std::remainder(e * std::arg(z), 2.0 * M_PI));
}

}  // namespace

TEST_CASE("u1 at z = 1 sums the geometric series q/(q-1)") {
  for (int q = -2; q >= -5; --q) {
    const SeriesConfig c{q, 60};
    const double want = static_cast<double>(q) / (q - 1.0);
    CHECK(std::abs(u1(c, {1.0, 0.0}) - want) < 1e-14);
  }
}

TEST_CASE("u1 functional equation u1(z^q) - q u1(z) = -q z on the circle") {
  for (int q : {-2, -3, -4}) {
    const SeriesConfig c{q, 60};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const cplx z = cis(2.0 * M_PI * (i + 0.37) / 100.0);
      const cplx lhs = u1(c, circle_pow(z, q)) - static_cast<double>(q) * u1(c, z);
      worst = std::max(worst, std::abs(lhs + static_cast<double>(q) * z));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("u2 functional equation, generic branch (q <= -3)") {
  for (int q : {-3, -4}) {
    const SeriesConfig c{q, 60};
    const double qd = q;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const cplx z = cis(2.0 * M_PI * (i + 0.61) / 100.0);
      const cplx u1z = u1(c, z);
      const cplx lhs = u2(c, circle_pow(z, q)) - qd * u2(c, z);
      const cplx rhs = qd * (qd - 1.0) / 2.0 * u1z * u1z -
                       qd * (qd + 1.0) * z * u1z + qd * (qd + 1.0) / 2.0 * z * z;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("u2 functional equation, two-term branch (q = -2 drops the z^2 source)") {
  const SeriesConfig c{-2, 60};
  const double qd = -2.0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cplx z = cis(2.0 * M_PI * (i + 0.13) / 20.0);
    const cplx u1z = u1(c, z);
    const cplx lhs = u2(c, circle_pow(z, -2)) - qd * u2(c, z);
    const cplx rhs = qd * (qd - 1.0) / 2.0 * u1z * u1z - qd * (qd + 1.0) * z * u1z;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("telescoping solution of u(z^q) - q u(z) = -q S(z) for monomials") {
  // local evaluation of sum_k S(z^(q^k))/q^k for S(z) = z^l, on the circle
  auto sol = [](int q, int l, cplx z) {
    cplx s{0.0, 0.0};
    double th = std::arg(z), w = 1.0;
    for (int k = 0; k < 60; ++k) {
      s += cis(std::remainder(l * th, 2.0 * M_PI)) / w;
      w *= q;
      th = std::remainder(th * q, 2.0 * M_PI);
    }
    return s;
  };
  for (int q : {-2, -3}) {
    for (int l = 1; l <= 3; ++l) {
      double worst = 0.0;
      for (int i = 0; i < 25; ++i) {
        const cplx z = cis(2.0 * M_PI * (i + 0.41) / 25.0);
        const cplx lhs =
            sol(q, l, circle_pow(z, q)) - static_cast<double>(q) * sol(q, l, z);
        const cplx rhs = -static_cast<double>(q) * circle_pow(z, l);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("phi_alpha is a second-order conjugacy between z^q and f_alpha") {
  // the defining property: f_alpha(phi_alpha(z)) - phi_alpha(z^q) = O(alpha^3);
  // halving alpha must shrink the residual ~8x
  for (int d : {2, 3, 4}) {
    const SeriesConfig c{-d, 60};
    auto residual = [&](double a) {
      const cplx alpha{a, 0.0};
      const auto p = FamilyParams::from_alpha(d, alpha);
      double worst = 0.0;
      for (int i = 0; i < 40; ++i) {
        const cplx z = cis(2.0 * M_PI * (i + 0.29) / 40.0);
        const cplx lhs = eval_f_alpha(p, phi_alpha(c, z, alpha));
        const cplx rhs = phi_alpha(c, circle_pow(z, -d), alpha);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      return worst;
    };
    const double r1 = residual(0.04), r2 = residual(0.02);
    REQUIRE(r2 > 0.0);
    CHECK(r1 / r2 > 5.0);
    CHECK(r1 / r2 < 12.0);
    CHECK(r1 < 1e-2);
  }
}

TEST_CASE("average: lattice powers hit 1 exactly on multiples of q^n - 1") {
  const AverageContext ctx(-2, 3);  // q^3 - 1 = -9, 9 angles
  CHECK(ctx.modulus == 9);
  CHECK(ctx.signed_mod == -9);
  for (int k : {-9, 0, 9}) {
    const cplx v = average(ctx, [&](int64_t, cplx s) {
      return std::pow(s, k);
    });
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
  for (int k = 1; k <= 8; ++k) {
    const cplx v = average(ctx, [&](int64_t, cplx s) { return std::pow(s, k); });
    CHECK(std::abs(v) < 1e-12);
  }
  // linearity
  const cplx a = average(ctx, [&](int64_t, cplx s) { return s + 3.0 * s * s; });
  const cplx b = average(ctx, [&](int64_t, cplx s) { return s; });
  const cplx cc = average(ctx, [&](int64_t, cplx s) { return s * s; });
  CHECK(std::abs(a - b - 3.0 * cc) < 1e-13);
}

TEST_CASE("power_index reproduces sigma_j^(q^m) exactly") {
  for (int q : {-2, -3}) {
    for (int n : {3, 4}) {
      const AverageContext ctx(q, n);
      for (int64_t j = 1; j <= ctx.modulus; ++j) {
        for (int m = 0; m < 2 * n; ++m) {
          double e = static_cast<double>(j);
          for (int i = 0; i < m; ++i) e *= q;
          const cplx direct =
              cis(2.0 * M_PI * std::remainder(e / static_cast<double>(ctx.signed_mod), 1.0));
          const cplx lattice = ctx.point(ctx.power_index(j, m));
          CHECK(std::abs(direct - lattice) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("modular residue statements hold by brute force") {
  CHECK(modular_lemma_check(-2, 3, 12).all_ok());
  CHECK(modular_lemma_check(-3, 1, 8).all_ok());
  CHECK(modular_lemma_check(-2, 6, 18).all_ok());
  CHECK(modular_lemma_check(-5, 2, 10).all_ok());
}

TEST_CASE("appendix identity sums match their closed forms") {
  for (auto [q, n] : {std::pair{-2, 3}, {-2, 5}, {-3, 2}}) {
    const auto rep = appendix_sums(q, n);
    REQUIRE(rep.sums.size() == 4);
    CHECK(std::abs(rep.sums[0].closed - cplx(n, 0.0)) < 1e-15);
    const double qd = q;
    CHECK(std::abs(rep.sums[1].closed - n * qd / (qd - 1.0)) < 1e-12);
    CHECK(std::abs(rep.sums[2].closed - n * qd * qd / ((qd - 1.0) * (qd - 1.0))) < 1e-12);
    CHECK(std::abs(rep.sums[3].closed - n * qd * qd * qd * qd) < 1e-12);
    CHECK(rep.max_abs_err() < 1e-9);
  }
}

TEST_CASE("second-order multiplier average: exact at alpha = 0") {
  for (int d : {2, 3}) {
    for (int n : {4, 6}) {
      const auto rep = second_order_average_check(d, n, {0.0, 0.0}, 1.0);
      CHECK(std::abs(rep.excess) < 1e-13);
      CHECK(rep.base == std::pow(d, -n));
    }
  }
}

TEST_CASE("second-order multiplier average: remainder is third order in alpha") {
  auto rem = [](double a) {
    return std::abs(second_order_average_check(2, 8, {a, 0.0}, 1.0).remainder);
  };
  const double r1 = rem(0.04), r2 = rem(0.02);
  REQUIRE(r2 > 0.0);
  const double ratio = r1 / r2;
  CHECK(ratio > 4.5);
  CHECK(ratio < 13.0);
  const auto rep = second_order_average_check(2, 8, {0.02, 0.0}, 1.0);
  CHECK(rep.predicted == doctest::Approx(8.0 * 0.02 * 0.02 / 4.0).epsilon(1e-12));
  // measured third-order constant is ~22, consistent with n |q|^3 scale
  CHECK(std::abs(rep.excess - rep.predicted) < 5e-4);
  // Richardson extrapolation over the sweep recovers the alpha^2 coefficient
  const double e1 = second_order_average_check(2, 8, {0.01, 0.0}, 1.0).excess;
  const double e2 = rep.excess;
  const double c2 = 2.0 * (e1 / 1e-4) - e2 / 4e-4;
  CHECK(std::abs(c2 - 2.0) < 0.05 * 2.0);
}

TEST_CASE("u1/u2 domain gate and honest off-circle evaluation") {
  const SeriesConfig c{-2, 60};
  CHECK_THROWS_AS(u1(c, {0.3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(u1(c, {1.2, 0.0}), std::domain_error);
  CHECK_THROWS_AS(u2(c, {0.1, 0.1}), std::domain_error);
  // inside the annulus but off the circle the series diverges; evaluation is
  // honest (finite through the exponent clamp, typically astronomically large)
  const cplx v = u1(c, {0.8, 0.0});
  CHECK(std::isfinite(v.real()));
  CHECK(std::isfinite(v.imag()));
}
