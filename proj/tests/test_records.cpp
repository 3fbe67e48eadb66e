#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "potts/records.hpp"

using namespace potts;

TEST_CASE("verdict records") {
  VerdictRecord r;
  r.d = 2;
  r.lambda = {4.0, 0.0};
  r.verdict.kind = ParamKind::CaptureDepth;
  r.verdict.depth = 0;
  r.verdict.iterations_used = 11;
  const auto text = verdict_records_text({r});
  CHECK(text ==
        "# potts-records v1 verdict\n"
        "d lambda_re lambda_im verdict depth iterations\n"
        "2 4.000000000000e+00 0.000000000000e+00 CaptureDepth 0 11\n");
  CHECK(verdict_records_text({r}) == text);  // deterministic
  CHECK(verdict_records_text({}) ==
        "# potts-records v1 verdict\n"
        "d lambda_re lambda_im verdict depth iterations\n");
}

TEST_CASE("dimension records") {
  DimensionRecord r;
  r.d = 2;
  r.lambda = {1000.0, 0.0};
  r.alpha_mod = 0.1;
  r.n = 12;
  r.bowen = 1.00360673;
  r.formula = 1.0036067376022224;
  r.residual = 1e-12;
  r.deviation = 7.6e-9;
  const auto text = dimension_records_text({r, r});
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# potts-records v1 dimension");
  std::getline(in, line);
  CHECK(line ==
        "d lambda_re lambda_im alpha_mod n D_bowen D_formula residual deviation");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find("1.003606737602e+00") != std::string::npos);
  }
  CHECK(rows == 2);
}

TEST_CASE("identity records") {
  IdentityRecord r;
  r.id = "lattice-average-u1";
  r.q = -2;
  r.n = 5;
  r.value = {1.5, -0.25};
  r.closed = {1.5, -0.25};
  r.abs_err = 3e-16;
  const auto text = identity_records_text({r});
  CHECK(text.find("# potts-records v1 identity") == 0);
  CHECK(text.find("lattice-average-u1 -2 5 1.500000000000e+00") !=
        std::string::npos);
}

TEST_CASE("text file writing") {
  const std::string path = "records_roundtrip.txt";
  write_text_file(path, "alpha\nbeta\n");
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "alpha\nbeta\n");
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(write_text_file("no_such_dir/x.txt", "y"),
                       doctest::Contains("no_such_dir/x.txt"),
                       std::runtime_error);
}
