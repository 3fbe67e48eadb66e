// pottsdyn: command-line surface over the library. Subcommands:
//   classify          verdict for one parameter + the five equivalence flags
//   render-julia      basin raster for one parameter (P6 pixmap + metadata)
//   render-param      parameter-plane raster over a window of lambda
//   dimension         Bowen dimension vs the large-lambda formula, per lambda
//   verify-asymptotic dimension-formula check at the standard lambda ladder
//   series-check      lacunary-series and lattice-average identity checks
//   centers           Newton search for a capture center lambda*
//   real-fixed        real fixed points of U on an interval
//
// Exit codes: 0 success, 1 usage error, 2 indeterminate result, 3 numerical
// failure. Record output (versioned header + rows) goes to stdout or to files
// under --out-dir; human summaries go to stderr. Identical flags produce
// byte-identical record and image output, independent of --workers.

#include <omp.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "potts/classify.hpp"
#include "potts/family.hpp"
#include "potts/periodic.hpp"
#include "potts/raster.hpp"
#include "potts/records.hpp"
#include "potts/series.hpp"

using namespace potts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitNumerical = 3;

int usage_error(const std::string& msg) {
  fprintf(stderr, "error: %s\n", msg.c_str());
  return kExitUsage;
}

// "re,im" or a bare real
bool parse_cplx(const std::string& s, cplx* out) {
  try {
    size_t used = 0;
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
      const double re = std::stod(s, &used);
      if (used != s.size()) return false;
      *out = {re, 0.0};
      return true;
    }
    const double re = std::stod(s.substr(0, comma), &used);
    if (used != comma) return false;
    const std::string rest = s.substr(comma + 1);
    const double im = std::stod(rest, &used);
    if (used != rest.size()) return false;
    *out = {re, im};
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// "a,b,c,d" exactly n comma-separated doubles
bool parse_doubles(const std::string& s, int n, double* out) {
  size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    const auto end = i + 1 == n ? s.size() : s.find(',', pos);
    if (end == std::string::npos) return false;
    try {
      size_t used = 0;
      out[i] = std::stod(s.substr(pos, end - pos), &used);
      if (used != end - pos) return false;
    } catch (const std::exception&) {
      return false;
    }
    pos = end + 1;
  }
  return true;
}

// one lambda per line as re,im or a bare real; # starts a comment
bool parse_lambda_file(const std::string& path, std::vector<cplx>* out,
                       std::string* err) {
  std::ifstream in(path);
  if (!in) {
    *err = "cannot open lambda file " + path;
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const auto b = line.find_last_not_of(" \t\r");
    cplx lam;
    if (!parse_cplx(line.substr(a, b - a + 1), &lam)) {
      *err = path + ":" + std::to_string(lineno) + ": expected re,im";
      return false;
    }
    out->push_back(lam);
  }
  return true;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (!name.empty() && name.front() == '/') return name;
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") std::filesystem::create_directories(dir);
}

const char* bstr(bool b) { return b ? "true" : "false"; }

cplx cis(double t) { return {std::cos(t), std::sin(t)}; }

// z^e for |z| = 1 through exact angle arithmetic
cplx circle_pow(cplx z, int e) {
  return cis(std::remainder(e * std::arg(z), 2.0 * M_PI));
}

struct BasinFlags {
  double attract_eps = 1e-8;
  double escape_R = 1e8;
  int max_iter = 5000;
  bool certify = true;
};

void add_basin_flags(CLI::App* sc, BasinFlags* f) {
  sc->add_option("--attract-eps", f->attract_eps,
                 "|w-1| below this certifies attraction to 1")
      ->capture_default_str();
  sc->add_option("--escape-R", f->escape_R,
                 "|w| above this certifies escape to infinity")
      ->capture_default_str();
  sc->add_option("--max-iter", f->max_iter, "iteration budget per orbit")
      ->capture_default_str();
  sc->add_flag("--certify,!--no-certify", f->certify,
               "confirm immediate-basin membership by phase marches; "
               "--no-certify keeps raw trap verdicts")
      ->capture_default_str();
}

BasinTestConfig to_cfg(const BasinFlags& f) {
  BasinTestConfig cfg;
  cfg.attract_eps = f.attract_eps;
  cfg.escape_R = f.escape_R;
  cfg.max_iter = f.max_iter;
  cfg.certify_immediate = f.certify;
  return cfg;
}

// ---------------------------------------------------------------- classify

int run_classify(int d, const std::string& lambda_s, const BasinFlags& bf) {
  cplx lam;
  if (!parse_cplx(lambda_s, &lam)) return usage_error("--lambda expects re,im");
  if (d < 2) return usage_error("-d must be >= 2");
  const BasinTestConfig cfg = to_cfg(bf);
  const FamilyParams p = lam == cplx{0.0, 0.0}
                             ? FamilyParams::degenerate_branch(d)
                             : FamilyParams::from_lambda(d, lam);
  const ParamVerdict v = classify_parameter(p, cfg);
  if (v.kind == ParamKind::Degenerate) {
    printf("Degenerate\n");
    return kExitOk;
  }
  const EquivReport eq = equiv_condition_check(p, cfg);
  printf("%s, quasicircle=%s\n", to_string(v).c_str(), bstr(eq.quasicircle));
  printf("xi_in_Ainf=%s omega_in_A1=%s critval_in_Ainf=%s zero_in_A1=%s\n",
         bstr(eq.xi_in_Ainf), bstr(eq.omega_in_A1), bstr(eq.critval_in_Ainf),
         bstr(eq.zero_in_A1));
  fprintf(stderr, "lambda = %.17g%+.17gi, d = %d: %s after %d iterations\n",
          lam.real(), lam.imag(), d, to_string(v).c_str(), v.iterations_used);
  if (eq.undetermined) {
    fprintf(stderr,
            "note: some equivalence conditions undetermined within budget\n");
    return kExitIndeterminate;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- renders

struct RenderFlags {
  int d = 2;
  std::string lambda_s;
  std::string bounds_s;
  int width = 256;
  int height = 256;
  std::string palette;
  std::string out;
  BasinFlags basin;
};

int run_render(RenderMode mode, const RenderFlags& rf, const std::string& dir,
               int workers) {
  if (rf.d < 2) return usage_error("-d must be >= 2");
  RasterSpec spec;
  double b[4];
  if (!parse_doubles(rf.bounds_s, 4, b))
    return usage_error("--bounds expects re_min,re_max,im_min,im_max");
  spec.re_min = b[0];
  spec.re_max = b[1];
  spec.im_min = b[2];
  spec.im_max = b[3];
  spec.width = rf.width;
  spec.height = rf.height;
  spec.mode = mode;
  spec.d = rf.d;
  spec.cfg = to_cfg(rf.basin);
  if (mode == RenderMode::Dynamical) {
    cplx lam;
    if (!parse_cplx(rf.lambda_s, &lam))
      return usage_error("--lambda expects re,im");
    if (lam == cplx{0.0, 0.0})
      return usage_error(
          "--lambda 0,0 has no two-phase dynamics (degenerate branch); "
          "basin rasters need lambda != 0");
    spec.params = FamilyParams::from_lambda(rf.d, lam);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }
  const VerdictGrid g = workers == 1 ? render_serial(spec) : render(spec);
  ensure_dir(dir);
  const std::string path = join_path(dir, rf.out);
  write_image(g, rf.palette, path);
  int counts[6] = {0, 0, 0, 0, 0, 0};
  for (const auto& c : g.cells) ++counts[c.kind];
  fprintf(stderr, "wrote %s (+.meta), %dx%d\n", path.c_str(), spec.width,
          spec.height);
  if (mode == RenderMode::Dynamical)
    fprintf(stderr, "cells: to-1 %d, to-inf %d, undetermined %d\n", counts[0],
            counts[1], counts[2]);
  else
    fprintf(stderr, "cells: capture %d, non-escaping %d, degenerate %d\n",
            counts[3], counts[4], counts[5]);
  return kExitOk;
}

// --------------------------------------------------------------- dimension

struct DimFlags {
  int d = 2;
  std::vector<std::string> lambda_s;
  std::string lambda_file;
  int n = 0;  // 0 = per-degree default
  double leg = 0.02;
  double alpha_ceiling = 0.25;
  double newton_tol = 1e-12;
  std::string out;
};

bool collect_lambdas(const DimFlags& df, std::vector<cplx>* lams,
                     std::string* err) {
  for (const auto& s : df.lambda_s) {
    cplx lam;
    if (!parse_cplx(s, &lam)) {
      *err = "--lambda expects re,im, got '" + s + "'";
      return false;
    }
    lams->push_back(lam);
  }
  if (!df.lambda_file.empty() &&
      !parse_lambda_file(df.lambda_file, lams, err))
    return false;
  return true;
}

// one dimension record, or an explanation of why lambda was skipped
bool dimension_row(int d, cplx lam, int n, const ContinuationOpts& opts,
                   bool serial, DimensionRecord* rec, std::string* why) {
  if (lam == cplx{0.0, 0.0}) {
    *why = "degenerate branch (lambda = 0)";
    return false;
  }
  const FamilyParams p = FamilyParams::from_lambda(d, lam);
  if (std::abs(p.alpha) > opts.alpha_ceiling) {
    char buf[128];
    snprintf(buf, sizeof buf, "|alpha| = %.3g beyond continuation ceiling %g",
             std::abs(p.alpha), opts.alpha_ceiling);
    *why = buf;
    return false;
  }
  if (!is_quasicircle(p, BasinTestConfig{})) {
    *why = "not in the quasicircle regime";
    return false;
  }
  const PeriodicOrbitSet orbits =
      serial ? periodic_points_serial(p, n, opts) : periodic_points(p, n, opts);
  const DimensionEstimate est = bowen_dimension_from(orbits);
  rec->d = d;
  rec->lambda = lam;
  rec->alpha_mod = std::abs(p.alpha);
  rec->n = est.n_used;
  rec->bowen = est.D;
  rec->formula = asymptotic_dimension(p);
  rec->residual = est.residual;
  rec->deviation = std::abs(est.D - rec->formula);
  return true;
}

int run_dimension(const DimFlags& df, const std::string& dir, int workers) {
  if (df.d < 2) return usage_error("-d must be >= 2");
  std::vector<cplx> lams;
  std::string err;
  if (!collect_lambdas(df, &lams, &err)) return usage_error(err);
  if (lams.empty())
    return usage_error("no lambda given (use --lambda or --lambda-file)");
  const int n = df.n > 0 ? df.n : default_n_max(df.d);
  ContinuationOpts opts;
  opts.leg = df.leg;
  opts.alpha_ceiling = df.alpha_ceiling;
  opts.newton_tol = df.newton_tol;

  std::vector<DimensionRecord> rows;
  for (const cplx lam : lams) {
    DimensionRecord rec;
    std::string why;
    try {
      if (!dimension_row(df.d, lam, n, opts, workers == 1, &rec, &why)) {
        fprintf(stderr, "skipping lambda = %.17g%+.17gi: %s\n", lam.real(),
                lam.imag(), why.c_str());
        continue;
      }
    } catch (const std::exception& e) {
      fprintf(stderr, "skipping lambda = %.17g%+.17gi: %s\n", lam.real(),
              lam.imag(), e.what());
      continue;
    }
    rows.push_back(rec);
  }
  const std::string text = dimension_records_text(rows);
  if (df.out.empty()) {
    fputs(text.c_str(), stdout);
  } else {
    ensure_dir(dir);
    const std::string path = join_path(dir, df.out);
    write_text_file(path, text);
    fprintf(stderr, "wrote %s\n", path.c_str());
  }
  if (rows.empty()) {
    fprintf(stderr, "no lambda processed\n");
    return kExitIndeterminate;
  }
  // least-squares constant of deviation ~ C |alpha|^3
  double num = 0.0, den = 0.0;
  for (const auto& r : rows) {
    const double a3 = r.alpha_mod * r.alpha_mod * r.alpha_mod;
    num += r.deviation * a3;
    den += a3 * a3;
  }
  fprintf(stderr,
          "processed %zu of %zu lambda(s), n = %d; fitted deviation ~ C "
          "|alpha|^3 with C = %.6g\n",
          rows.size(), lams.size(), n, den > 0.0 ? num / den : 0.0);
  return kExitOk;
}

// ------------------------------------------------------- verify-asymptotic

struct VerifyFlags {
  int d = 2;
  std::vector<std::string> lambda_s;
  int n = 0;
};

int run_verify_asymptotic(const VerifyFlags& vf, int workers) {
  if (vf.d < 2) return usage_error("-d must be >= 2");
  std::vector<cplx> lams;
  for (const auto& s : vf.lambda_s) {
    cplx lam;
    if (!parse_cplx(s, &lam))
      return usage_error("--lambda expects re,im, got '" + s + "'");
    lams.push_back(lam);
  }
  int n = vf.n;
  if (lams.empty()) {
    if (vf.d == 2) {
      lams = {{1e3, 0.0}, {1e4, 0.0}, {1e5, 0.0}};
      if (n == 0) n = 12;
    } else if (vf.d == 3) {
      lams = {{1e4, 0.0}, {1e6, 0.0}};
      if (n == 0) n = 9;
    } else {
      return usage_error("no built-in lambda ladder for this degree; "
                         "pass --lambda");
    }
  }
  if (n == 0) n = default_n_max(vf.d);

  std::vector<DimensionRecord> rows;
  bool all_pass = true;
  for (const cplx lam : lams) {
    DimensionRecord rec;
    std::string why;
    if (!dimension_row(vf.d, lam, n, ContinuationOpts{}, workers == 1, &rec,
                       &why)) {
      fprintf(stderr, "FAIL lambda = %.17g%+.17gi: %s\n", lam.real(),
              lam.imag(), why.c_str());
      all_pass = false;
      continue;
    }
    rows.push_back(rec);
    const double tol = 3.0 / std::abs(lam);
    const bool ok = rec.deviation <= tol;
    all_pass = all_pass && ok;
    fprintf(stderr,
            "%s lambda = %.17g%+.17gi, n = %d: |D_bowen - D_formula| = "
            "%.3e, tolerance 3/|lambda| = %.3e\n",
            ok ? "PASS" : "FAIL", lam.real(), lam.imag(), n, rec.deviation,
            tol);
  }
  fputs(dimension_records_text(rows).c_str(), stdout);
  return all_pass ? kExitOk : kExitNumerical;
}

// ------------------------------------------------------------ series-check

struct SeriesFlags {
  int d = 2;
  std::vector<int> ns;  // lattice sizes for modular/appendix checks
  int m_max = 12;
  std::vector<std::string> alpha_s;
  int n2 = 8;  // period for the second-order average
  double D = 1.0;
  int K = 60;
};

int run_series_check(const SeriesFlags& sf) {
  if (sf.d < 2) return usage_error("-d must be >= 2");
  const int q = -sf.d;
  std::vector<cplx> alphas;
  for (const auto& s : sf.alpha_s) {
    cplx a;
    if (!parse_cplx(s, &a))
      return usage_error("--alpha expects re,im, got '" + s + "'");
    alphas.push_back(a);
  }
  if (alphas.empty()) alphas = {{0.02, 0.0}};
  std::vector<int> ns = sf.ns;
  if (ns.empty()) ns = {sf.d == 2 ? 4 : 3};

  std::vector<IdentityRecord> rows;
  bool all_pass = true;
  auto verdict = [&](const char* what, const IdentityRecord& r, double tol) {
    const bool ok = r.abs_err <= tol;
    all_pass = all_pass && ok;
    if (!ok)
      fprintf(stderr, "FAIL %s %s: |err| = %.3e > %.3e\n", what, r.id.c_str(),
              r.abs_err, tol);
    return ok;
  };

  // residue statements and lattice-average identities per n
  for (const int n : ns) {
    if (n < 1 || std::pow(std::abs(q), n) > 2e5) {
      fprintf(stderr, "skipping n = %d: lattice exceeds the point budget\n",
              n);
      continue;
    }
    const ModularLemmaReport ml = modular_lemma_check(q, n, sf.m_max);
    IdentityRecord mr;
    mr.id = "modular_lemma";
    mr.q = q;
    mr.n = n;
    mr.value = {ml.all_ok() ? 1.0 : 0.0, 0.0};
    mr.closed = {1.0, 0.0};
    mr.abs_err = ml.all_ok() ? 0.0 : 1.0;
    rows.push_back(mr);
    verdict("modular", mr, 0.0);

    const AppendixSumsReport ap = appendix_sums(q, n, sf.K);
    for (const auto& rw : ap.sums) {
      rows.push_back({rw.id, q, n, rw.value, rw.closed, rw.abs_err});
      verdict("sum", rows.back(), 1e-8);
    }
    for (const auto& rw : ap.pointwise) {
      rows.push_back({rw.id, q, n, rw.value, rw.closed, rw.abs_err});
      verdict("pointwise", rows.back(), 1e-8);
    }
    for (const auto& rw : ap.vanishing) {
      rows.push_back({rw.id, q, n, rw.value, rw.closed, rw.abs_err});
      verdict("vanishing", rows.back(), 1e-10);
    }
  }

  // functional equations of u1 and u2 at 100 circle points
  {
    const SeriesConfig c{q, sf.K};
    const double qd = q;
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < 100; ++i) {
      const cplx z = cis(2.0 * M_PI * (i + 0.37) / 100.0);
      const cplx u1z = u1(c, z);
      w1 = std::max(w1, std::abs(u1(c, circle_pow(z, q)) - qd * u1z +
                                 qd * z));
      cplx rhs = qd * (qd - 1.0) / 2.0 * u1z * u1z - qd * (qd + 1.0) * z * u1z;
      if (q != -2) rhs += qd * (qd + 1.0) / 2.0 * z * z;
      w2 = std::max(w2,
                    std::abs(u2(c, circle_pow(z, q)) - qd * u2(c, z) - rhs));
    }
    rows.push_back({"u1_functional_eq", q, 0, {w1, 0.0}, {0.0, 0.0}, w1});
    verdict("functional", rows.back(), 1e-10);
    rows.push_back({"u2_functional_eq", q, 0, {w2, 0.0}, {0.0, 0.0}, w2});
    verdict("functional", rows.back(), 1e-10);
  }

  // second-order multiplier average per alpha; remainder is third order with
  // a measured constant on the n |q|^3 scale, gated at 3x that scale
  for (const cplx a : alphas) {
    if (std::pow(std::abs(q), sf.n2) > 2e5) {
      fprintf(stderr, "skipping second-order average: period %d exceeds the "
                      "point budget\n",
              sf.n2);
      break;
    }
    const SecondOrderReport rep =
        second_order_average_check(sf.d, sf.n2, a, sf.D, sf.K);
    IdentityRecord r;
    r.id = "second_order_average";
    r.q = q;
    r.n = sf.n2;
    r.value = {rep.excess, 0.0};
    r.closed = {rep.predicted, 0.0};
    r.abs_err = std::abs(rep.remainder);
    rows.push_back(r);
    const double a3 = std::abs(a) * std::abs(a) * std::abs(a);
    const double tol =
        std::max(3.0 * sf.n2 * std::pow(std::abs(q), 3) * a3, 1e-12);
    verdict("second-order", r, tol);
  }

  fputs(identity_records_text(rows).c_str(), stdout);
  fprintf(stderr, "%zu identity rows, %s\n", rows.size(),
          all_pass ? "all within tolerance" : "some FAILED");
  return all_pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- centers

int run_centers(int d, int n, const std::string& seed_s,
                const BasinFlags& bf) {
  if (d < 2) return usage_error("-d must be >= 2");
  if (n < 1) return usage_error("-n must be >= 1");
  cplx seed;
  if (!parse_cplx(seed_s, &seed)) return usage_error("--seed expects re,im");
  if (seed == cplx{0.0, 0.0}) return usage_error("--seed must be nonzero");
  const FamilyParams p0 = FamilyParams::from_lambda(d, seed);
  const FindCenterResult r = find_center(p0, n, seed, to_cfg(bf));
  printf("# potts-records v1 center\n");
  printf("# d n lambda_re lambda_im residual steps confirmed\n");
  printf("%d %d %.12e %.12e %.12e %d %d\n", d, n, r.lambda_star.real(),
         r.lambda_star.imag(), r.residual, r.steps, r.confirmed ? 1 : 0);
  if (!r.converged) {
    fprintf(stderr, "Newton did not converge after %d steps\n", r.steps);
    return kExitNumerical;
  }
  fprintf(stderr,
          "center lambda* = %.12g%+.12gi, residual %.3e, %d steps, "
          "depth-%d verdict %sconfirmed\n",
          r.lambda_star.real(), r.lambda_star.imag(), r.residual, r.steps, n,
          r.confirmed ? "" : "NOT ");
  return r.confirmed ? kExitOk : kExitIndeterminate;
}

// -------------------------------------------------------------- real-fixed

int run_real_fixed(int d, double lambda, const std::string& interval_s) {
  if (d < 2) return usage_error("-d must be >= 2");
  double ab[2];
  if (!parse_doubles(interval_s, 2, ab))
    return usage_error("--interval expects a,b");
  if (!(ab[0] < ab[1])) return usage_error("--interval needs a < b");
  if (lambda == 0.0)
    return usage_error("--lambda 0 is the degenerate branch; pick lambda != 0");
  const FamilyParams p = FamilyParams::from_lambda(d, {lambda, 0.0});
  const RealFixedPointReport rep = real_fixed_points(p, ab[0], ab[1]);
  printf("# potts-records v1 real-fixed\n");
  printf("# x multiplier class\n");
  for (const auto& pt : rep.points) {
    const char* cls = pt.cls == StabilityClass::Attracting  ? "attracting"
                      : pt.cls == StabilityClass::Parabolic ? "parabolic"
                                                            : "repelling";
    printf("%.12e %.12e %s\n", pt.x, pt.multiplier, cls);
  }
  fprintf(stderr, "%zu real fixed point(s) of U on [%g, %g]\n",
          rep.points.size(), ab[0], ab[1]);
  if (rep.merged_roots_possible)
    fprintf(stderr,
            "warning: adjacent sign changes; roots within one grid pitch may "
            "have merged\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pottsdyn: basin classification, rasters, Bowen dimension tables and "
      "series identity checks for the degree-d renormalization family "
      "T(z) = ((z+lambda-1)/(z-1))^d, U = T*T"};
  app.require_subcommand(1);

  int workers = 0;
  std::string out_dir = ".";
  app.add_option("--workers", workers,
                 "worker threads for all parallel sections (0 = all cores, "
                 "1 = fully serial)")
      ->capture_default_str();
  app.add_option("--out-dir", out_dir,
                 "directory for file outputs (default: $POTTSDYN_OUT or .)")
      ->envname("POTTSDYN_OUT");

  // classify
  auto* sc_classify = app.add_subcommand(
      "classify", "capture depth or non-escape verdict for one parameter, "
                  "plus the five equivalent quasicircle conditions");
  int cl_d = 2;
  std::string cl_lambda;
  BasinFlags cl_basin;
  sc_classify->add_option("-d,--degree", cl_d, "family degree")
      ->capture_default_str();
  sc_classify->add_option("--lambda", cl_lambda, "parameter as re,im")
      ->required();
  add_basin_flags(sc_classify, &cl_basin);

  // render-julia
  auto* sc_julia = app.add_subcommand(
      "render-julia",
      "raster the basins of 1 and infinity for one parameter (P6 pixmap "
      "plus .meta sidecar)");
  RenderFlags jf;
  jf.bounds_s = "-4,4,-4,4";
  jf.palette = "paper-bw";
  jf.out = "julia.ppm";
  sc_julia->add_option("-d,--degree", jf.d, "family degree")
      ->capture_default_str();
  sc_julia->add_option("--lambda", jf.lambda_s, "parameter as re,im")
      ->required();
  sc_julia
      ->add_option("--bounds", jf.bounds_s,
                   "window as re_min,re_max,im_min,im_max")
      ->capture_default_str();
  sc_julia->add_option("--width", jf.width, "pixels")->capture_default_str();
  sc_julia->add_option("--height", jf.height, "pixels")->capture_default_str();
  sc_julia
      ->add_option("--palette", jf.palette,
                   "paper-bw | depth-cycle | smooth-escape")
      ->capture_default_str();
  sc_julia->add_option("--out", jf.out, "output file under --out-dir")
      ->capture_default_str();
  add_basin_flags(sc_julia, &jf.basin);

  // render-param
  auto* sc_param = app.add_subcommand(
      "render-param",
      "raster the parameter plane: capture depth vs non-escape per pixel");
  RenderFlags pf;
  pf.bounds_s = "-3,5,-4,4";
  pf.palette = "depth-cycle";
  pf.out = "param.ppm";
  sc_param->add_option("-d,--degree", pf.d, "family degree")
      ->capture_default_str();
  sc_param
      ->add_option("--bounds", pf.bounds_s,
                   "window as re_min,re_max,im_min,im_max")
      ->capture_default_str();
  sc_param->add_option("--width", pf.width, "pixels")->capture_default_str();
  sc_param->add_option("--height", pf.height, "pixels")->capture_default_str();
  sc_param
      ->add_option("--palette", pf.palette,
                   "paper-bw | depth-cycle | smooth-escape")
      ->capture_default_str();
  sc_param->add_option("--out", pf.out, "output file under --out-dir")
      ->capture_default_str();
  add_basin_flags(sc_param, &pf.basin);

  // dimension
  auto* sc_dim = app.add_subcommand(
      "dimension", "Bowen dimension from period-n pressure vs the "
                   "large-lambda formula, one record per lambda");
  DimFlags df;
  sc_dim->add_option("-d,--degree", df.d, "family degree")
      ->capture_default_str();
  sc_dim->add_option("--lambda", df.lambda_s,
                     "parameter as re,im (repeatable)");
  sc_dim->add_option("--lambda-file", df.lambda_file,
                     "file with one lambda per line, # comments");
  sc_dim
      ->add_option("-n,--period", df.n,
                   "pressure period (0 = per-degree default: 14 for d=2, 9 "
                   "for d=3)")
      ->capture_default_str();
  sc_dim->add_option("--leg", df.leg, "target |alpha| advance per "
                                      "continuation leg")
      ->capture_default_str();
  sc_dim
      ->add_option("--alpha-ceiling", df.alpha_ceiling,
                   "refuse seeds beyond this |alpha|")
      ->capture_default_str();
  sc_dim->add_option("--newton-tol", df.newton_tol, "Newton tolerance")
      ->capture_default_str();
  sc_dim->add_option("--out", df.out,
                     "write records to this file under --out-dir instead of "
                     "stdout");

  // verify-asymptotic
  auto* sc_verify = app.add_subcommand(
      "verify-asymptotic",
      "check |D_bowen - D_formula| <= 3/|lambda| on the standard lambda "
      "ladder (d=2: 1e3,1e4,1e5 at n=12; d=3: 1e4,1e6 at n=9)");
  VerifyFlags vf;
  sc_verify->add_option("-d,--degree", vf.d, "family degree")
      ->capture_default_str();
  sc_verify->add_option("--lambda", vf.lambda_s,
                        "override ladder: parameter as re,im (repeatable)");
  sc_verify
      ->add_option("-n,--period", vf.n,
                   "pressure period (0 = ladder default)")
      ->capture_default_str();

  // series-check
  auto* sc_series = app.add_subcommand(
      "series-check",
      "residue statements, lattice-average identities, u1/u2 functional "
      "equations and the second-order multiplier average");
  SeriesFlags sf;
  sc_series->add_option("-d,--degree", sf.d, "family degree (q = -d)")
      ->capture_default_str();
  sc_series->add_option("-n,--lattice-n", sf.ns,
                        "lattice sizes n for residue/average checks "
                        "(repeatable; default 4 for d=2, 3 for d=3)");
  sc_series->add_option("--m-max", sf.m_max, "residue exponent range")
      ->capture_default_str();
  sc_series->add_option("--alpha", sf.alpha_s,
                        "alpha as re,im for the second-order average "
                        "(repeatable; default 0.02,0)");
  sc_series
      ->add_option("--average-n", sf.n2,
                   "period for the second-order average")
      ->capture_default_str();
  sc_series->add_option("--dimension", sf.D, "exponent D in the average")
      ->capture_default_str();
  sc_series->add_option("-K,--terms", sf.K, "series truncation")
      ->capture_default_str();

  // centers
  auto* sc_centers = app.add_subcommand(
      "centers", "Newton search for a depth-n capture center lambda* "
                 "(T^n(0) = 1)");
  int ce_d = 2, ce_n = 1;
  std::string ce_seed;
  BasinFlags ce_basin;
  sc_centers->add_option("-d,--degree", ce_d, "family degree")
      ->capture_default_str();
  sc_centers->add_option("-n,--depth", ce_n, "capture depth of the center")
      ->capture_default_str();
  sc_centers->add_option("--seed", ce_seed, "Newton seed as re,im")
      ->required();
  add_basin_flags(sc_centers, &ce_basin);

  // real-fixed
  auto* sc_real = app.add_subcommand(
      "real-fixed", "real fixed points of U on an interval, with "
                    "multipliers and stability classes");
  int rf_d = 2;
  double rf_lambda = 0.0;
  std::string rf_interval;
  sc_real->add_option("-d,--degree", rf_d, "family degree")
      ->capture_default_str();
  sc_real->add_option("--lambda", rf_lambda, "real parameter")->required();
  sc_real->add_option("--interval", rf_interval, "search interval as a,b")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (workers < 0) return usage_error("--workers must be >= 0");
  if (workers > 0) omp_set_num_threads(workers);

  try {
    if (sc_classify->parsed()) return run_classify(cl_d, cl_lambda, cl_basin);
    if (sc_julia->parsed())
      return run_render(RenderMode::Dynamical, jf, out_dir, workers);
    if (sc_param->parsed())
      return run_render(RenderMode::Parameter, pf, out_dir, workers);
    if (sc_dim->parsed()) return run_dimension(df, out_dir, workers);
    if (sc_verify->parsed()) return run_verify_asymptotic(vf, workers);
    if (sc_series->parsed()) return run_series_check(sf);
    if (sc_centers->parsed())
      return run_centers(ce_d, ce_n, ce_seed, ce_basin);
    if (sc_real->parsed()) return run_real_fixed(rf_d, rf_lambda, rf_interval);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  } catch (const std::exception& e) {
    fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return usage_error("no subcommand");
}
