#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "potts/classify.hpp"

using namespace potts;

namespace {

const cplx lambda1{1.319448, 1.633170};
const cplx lambda2{1.5, 0.866025};
const cplx lambda3{2.046736, 1.589069};

FamilyParams fp(int d, cplx lam) { return FamilyParams::from_lambda(d, lam); }

}  // namespace

TEST_CASE("config validation") {
  BasinTestConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.attract_eps = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BasinTestConfig{};
  cfg.escape_R = 5.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = BasinTestConfig{};
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("certified escape radius") {
  BasinTestConfig cfg;
  CHECK(certified_escape_radius(fp(2, {4.0, 0.0})) == 16.0);

  // the region |z| >= rho must map into itself under U
  for (const cplx lam : {cplx{4.0, 0.0}, cplx{30.0, 0.0}, cplx{1000.0, 0.0},
                         cplx{1.5, 0.9}, cplx{-3.0, 2.0}}) {
    const auto p = fp(2, lam);
    const double rho = certified_escape_radius(p);
    CHECK(rho >= 4.0);
    for (int i = 0; i < 64; ++i) {
      const double th = 2.0 * M_PI * i / 64.0;
      for (const double r : {rho, 2.0 * rho, 10.0 * rho}) {
        const SpherePoint z(r * std::cos(th), r * std::sin(th));
        const SpherePoint u = eval_U(p, z);
        const bool stays = u.is_infinity() || std::abs(u.z) >= rho;
        CHECK(stays);
      }
    }
  }
}

TEST_CASE("point classification basics") {
  BasinTestConfig cfg;
  for (const cplx lam :
       {cplx{4.0, 0.0}, cplx{1000.0, 0.0}, lambda1, cplx{0.5, 0.0}}) {
    const ClassifyContext c(fp(2, lam), cfg);
    CHECK(classify_point(c, SpherePoint(1.0, 0.0)) ==
          BasinVerdict::AttractedTo1);
    CHECK(classify_point(c, SpherePoint::infinity()) ==
          BasinVerdict::AttractedToInfinity);
  }
  // quasicircle golden lambda=4: the free critical value chain starts at 0
  CHECK(classify_point(fp(2, {4.0, 0.0}), SpherePoint(0.0, 0.0),
                       BasinTestConfig{}) == BasinVerdict::AttractedTo1);
  // poles land on 1 then infinity; at lambda=1000 they sit in A(inf)
  {
    const auto p = fp(2, {1000.0, 0.0});
    const auto crit = critical_data(p);
    const ClassifyContext c(p, cfg);
    for (const auto& xi : crit.xi)
      CHECK(classify_point(c, xi) == BasinVerdict::AttractedToInfinity);
    for (const auto& om : crit.omega)
      CHECK(classify_point(c, om) == BasinVerdict::AttractedTo1);
  }
}

TEST_CASE("golden parameters") {
  BasinTestConfig cfg;

  const auto v4 = classify_parameter(fp(2, {4.0, 0.0}), cfg);
  CHECK(v4.kind == ParamKind::CaptureDepth);
  CHECK(v4.depth == 0);
  CHECK(to_string(v4) == "CaptureDepth(0)");
  CHECK(is_quasicircle(fp(2, {4.0, 0.0}), cfg));

  const auto v2 = classify_parameter(fp(2, {2.0, 0.0}), cfg);
  CHECK(v2.kind == ParamKind::CaptureDepth);
  CHECK(v2.depth == 1);

  const auto v1 = classify_parameter(fp(2, lambda1), cfg);
  CHECK(v1.kind == ParamKind::CaptureDepth);
  CHECK(v1.depth == 3);

  const auto w2 = classify_parameter(fp(2, lambda2), cfg);
  CHECK(w2.kind == ParamKind::NonEscapingWithinBudget);
  CHECK(w2.budget == cfg.max_iter);

  const auto w3 = classify_parameter(fp(2, lambda3), cfg);
  CHECK(w3.kind == ParamKind::NonEscapingWithinBudget);
  CHECK_FALSE(is_quasicircle(fp(2, lambda3), cfg));

  CHECK(is_quasicircle(fp(2, {30.0, 0.0}), cfg));
  CHECK(is_quasicircle(fp(2, {1000.0, 0.0}), cfg));

  const auto vd = classify_parameter(FamilyParams::degenerate_branch(2), cfg);
  CHECK(vd.kind == ParamKind::Degenerate);
  CHECK(to_string(vd) == "Degenerate");
}

TEST_CASE("verdicts stable under budget doubling and tighter traps") {
  BasinTestConfig tight;
  tight.max_iter = 10000;
  tight.attract_eps = 1e-9;
  tight.escape_R = 1e9;
  BasinTestConfig cfg;
  for (const cplx lam : {cplx{4.0, 0.0}, cplx{2.0, 0.0}, lambda1,
                         cplx{30.0, 0.0}, cplx{1000.0, 0.0}}) {
    const auto a = classify_parameter(fp(2, lam), cfg);
    const auto b = classify_parameter(fp(2, lam), tight);
    CHECK(a.kind == b.kind);
    CHECK(a.depth == b.depth);
  }
  // the non-escaping goldens stay non-escaping with twice the budget
  for (const cplx lam : {lambda2, lambda3}) {
    const auto b = classify_parameter(fp(2, lam), tight);
    CHECK(b.kind == ParamKind::NonEscapingWithinBudget);
  }
}

TEST_CASE("parameter grid: verdict uniqueness and excluded basins") {
  BasinTestConfig cfg;
  const int N = 200;
  std::vector<int> kinds(N * N, -1);
  std::vector<int> depths(N * N, -2);
#pragma omp parallel for schedule(dynamic, 4)
  for (int ij = 0; ij < N * N; ++ij) {
    const int i = ij % N, j = ij / N;
    const cplx lam(-3.0 + 6.0 * (i + 0.5) / N, -3.0 + 6.0 * (j + 0.5) / N);
    const auto v = classify_parameter(fp(2, lam), cfg);
    kinds[ij] = static_cast<int>(v.kind);
    depths[ij] = v.depth;
  }
  int capture = 0, nonesc = 0;
  for (int ij = 0; ij < N * N; ++ij) {
    CHECK(kinds[ij] >= 0);
    CHECK(kinds[ij] <= 2);
    if (kinds[ij] == static_cast<int>(ParamKind::CaptureDepth)) {
      ++capture;
      CHECK(depths[ij] >= 0);
    } else {
      ++nonesc;
    }
  }
  // both phases are represented on this window
  CHECK(capture > 0);
  CHECK(nonesc > 0);

  // determinism: a rerun on a subset reproduces kind and depth exactly
  for (int ij = 0; ij < N * N; ij += 997) {
    const int i = ij % N, j = ij / N;
    const cplx lam(-3.0 + 6.0 * (i + 0.5) / N, -3.0 + 6.0 * (j + 0.5) / N);
    const auto v = classify_parameter(fp(2, lam), cfg);
    CHECK(static_cast<int>(v.kind) == kinds[ij]);
    CHECK(v.depth == depths[ij]);
  }

  // excluded memberships on a coarser grid: the free critical point 0 is
  // never certified toward infinity and 1-lambda never toward 1
  const int M = 30;
  std::vector<int> v0(M * M, -1), v1(M * M, -1);
#pragma omp parallel for schedule(dynamic, 2)
  for (int ij = 0; ij < M * M; ++ij) {
    const int i = ij % M, j = ij / M;
    const cplx lam(-3.0 + 6.0 * (i + 0.5) / M, -3.0 + 6.0 * (j + 0.5) / M);
    const ClassifyContext c(fp(2, lam), cfg);
    v0[ij] = static_cast<int>(classify_point(c, SpherePoint(0.0, 0.0)));
    v1[ij] = static_cast<int>(classify_point(c, SpherePoint(1.0 - lam)));
  }
  for (int ij = 0; ij < M * M; ++ij) {
    CHECK(v0[ij] != static_cast<int>(BasinVerdict::AttractedToInfinity));
    CHECK(v1[ij] != static_cast<int>(BasinVerdict::AttractedTo1));
  }
}

TEST_CASE("five equivalent conditions") {
  BasinTestConfig cfg;

  const auto r1000 = equiv_condition_check(fp(2, {1000.0, 0.0}), cfg);
  CHECK_FALSE(r1000.undetermined);
  CHECK(r1000.quasicircle);
  CHECK(r1000.xi_in_Ainf);
  CHECK(r1000.omega_in_A1);
  CHECK(r1000.critval_in_Ainf);
  CHECK(r1000.zero_in_A1);
  CHECK(r1000.all_equal());

  const auto r3 = equiv_condition_check(fp(3, {1e6, 0.0}), cfg);
  CHECK_FALSE(r3.undetermined);
  CHECK(r3.all_equal());
  CHECK(r3.quasicircle);

  // a depth-1 parameter fails every condition
  const auto r2 = equiv_condition_check(fp(2, {2.0, 0.0}), cfg);
  CHECK_FALSE(r2.quasicircle);
  CHECK_FALSE(r2.xi_in_Ainf);
  CHECK_FALSE(r2.omega_in_A1);
  CHECK_FALSE(r2.critval_in_Ainf);
  CHECK_FALSE(r2.zero_in_A1);

  // where determined, the five booleans agree, on a small grid
  const int M = 14;
  std::vector<int> ok(M * M, 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (int ij = 0; ij < M * M; ++ij) {
    const int i = ij % M, j = ij / M;
    const cplx lam(-3.0 + 6.0 * (i + 0.5) / M, -3.0 + 6.0 * (j + 0.5) / M);
    const auto rep = equiv_condition_check(fp(2, lam), cfg);
    if (!rep.undetermined && !rep.all_equal()) ok[ij] = 0;
  }
  for (int ij = 0; ij < M * M; ++ij) CHECK(ok[ij] == 1);
}

TEST_CASE("green function") {
  BasinTestConfig cfg;
  const auto p = fp(2, {4.0, 0.0});

  const auto g0 = green_function(p, SpherePoint(0.0, 0.0), 200, cfg);
  REQUIRE(g0.kind == GreenResult::Value);
  CHECK(g0.value > 0.0);
  const auto g0b = green_function(p, SpherePoint(0.0, 0.0), 400, cfg);
  REQUIRE(g0b.kind == GreenResult::Value);
  CHECK(g0.value == doctest::Approx(g0b.value).epsilon(1e-6));

  CHECK(green_function(p, SpherePoint(1.0, 0.0), 200, cfg).kind ==
        GreenResult::Center);
  CHECK(green_function(p, SpherePoint::infinity(), 200, cfg).kind ==
        GreenResult::NotAttracted);
  // a point heading to infinity is rejected
  CHECK(green_function(p, SpherePoint(100.0, 0.0), 200, cfg).kind ==
        GreenResult::NotAttracted);

  // functional equation G(U(z)) = d G(z) on basin samples; the quasicircle
  // parameter keeps 0, the free critical points and their images in A(1)
  const auto crit4 = critical_data(p);
  for (const SpherePoint z0 : {SpherePoint(0.0, 0.0), crit4.omega.front(),
                               eval_U(p, SpherePoint(0.0, 0.0))}) {
    const auto gz = green_function(p, z0, 300, cfg);
    const auto gu = green_function(p, eval_U(p, z0), 300, cfg);
    REQUIRE(gz.kind == GreenResult::Value);
    REQUIRE(gu.kind == GreenResult::Value);
    CHECK(gu.value == doctest::Approx(2.0 * gz.value).epsilon(1e-6));
  }
  // the same relation at a large parameter, where the raw iterate rounds to
  // 1 right after trap entry and the log recursion must carry the estimate
  const auto pl = fp(2, {1e5, 0.0});
  const auto ga = green_function(pl, SpherePoint(0.0, 0.0), 300, cfg);
  const auto gb = green_function(pl, eval_U(pl, SpherePoint(0.0, 0.0)), 300, cfg);
  REQUIRE(ga.kind == GreenResult::Value);
  REQUIRE(gb.kind == GreenResult::Value);
  CHECK(gb.value == doctest::Approx(2.0 * ga.value).epsilon(1e-6));
}

TEST_CASE("center finding") {
  BasinTestConfig cfg;

  // n=1: T(0) - 1 = 0 solves (lambda-1)^2 = 1, valid center lambda = 2
  const auto c1 = find_center(fp(2, {2.0, 0.0}), 1, {2.0, 0.1}, cfg);
  REQUIRE(c1.converged);
  CHECK(std::abs(c1.lambda_star - cplx{2.0, 0.0}) < 1e-8);
  CHECK(c1.residual < 1e-10);
  CHECK(c1.confirmed);

  // n=3: the depth-3 golden capture parameter
  const auto c3 = find_center(fp(2, lambda1), 3, lambda1 + cplx{0.01, -0.01}, cfg);
  REQUIRE(c3.converged);
  CHECK(std::abs(c3.lambda_star - lambda1) < 1e-4);
  CHECK(c3.residual < 1e-10);
  CHECK(c3.confirmed);

  CHECK_THROWS_AS(find_center(fp(2, {2.0, 0.0}), 0, {2.0, 0.0}, cfg),
                  std::invalid_argument);
}

TEST_CASE("real fixed points") {
  const auto p = fp(2, {0.5, 0.0});
  const auto rep = real_fixed_points(p, 1.0, 50.0);
  REQUIRE(rep.points.size() >= 2);
  // x0 = 1 is superattracting
  CHECK(rep.points.front().x == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rep.points.front().multiplier) < 1e-8);
  CHECK(rep.points.front().cls == StabilityClass::Attracting);
  // at least one fixed point strictly inside (1, inf); the largest has
  // multiplier >= 1
  CHECK(rep.points.back().x > 1.0 + 1e-6);
  CHECK(rep.points.back().multiplier >= 1.0 - 1e-9);
  for (size_t i = 1; i < rep.points.size(); ++i)
    CHECK(rep.points[i].x > rep.points[i - 1].x);
  // every reported point is a genuine fixed point
  for (const auto& q : rep.points) {
    const auto u = eval_U(p, SpherePoint(q.x, 0.0));
    REQUIRE(u.is_finite());
    CHECK(std::abs(u.z.real() - q.x) < 1e-6);
  }

  // the real pole of U at lambda=4 sits at xi = -1; the scan must not report
  // it as a fixed point
  const auto p4 = fp(2, {4.0, 0.0});
  const auto rep4 = real_fixed_points(p4, -5.0, 5.0);
  for (const auto& q : rep4.points) {
    CHECK(std::abs(q.x - (-1.0)) > 1e-3);
    const auto u = eval_U(p4, SpherePoint(q.x, 0.0));
    REQUIRE(u.is_finite());
    CHECK(std::abs(u.z.real() - q.x) < 1e-6);
  }

  CHECK_THROWS_AS(real_fixed_points(fp(2, {1.0, 2.0}), 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(real_fixed_points(p, 3.0, 1.0), std::invalid_argument);

  // U increasing on [1, 100] for real lambda > 0
  for (const double lam : {0.5, 4.0, 30.0}) {
    const auto pr = fp(2, {lam, 0.0});
    double prev = 1.0;
    bool first = true;
    for (int i = 0; i <= 2000; ++i) {
      const double x = 1.0 + 99.0 * i / 2000.0;
      const auto u = eval_U(pr, SpherePoint(x, 0.0));
      if (u.is_infinity()) continue;
      if (!first) CHECK(u.z.real() - prev >= -1e-12);
      prev = u.z.real();
      first = false;
    }
  }
}
