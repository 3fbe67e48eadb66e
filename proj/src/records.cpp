#include "potts/records.hpp"

#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace potts {

namespace {

const char* kind_token(ParamKind k) {
  switch (k) {
    case ParamKind::CaptureDepth:
      return "CaptureDepth";
    case ParamKind::NonEscapingWithinBudget:
      return "NonEscapingWithinBudget";
    default:
      return "Degenerate";
  }
}

void append(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += buf;
}

}  // namespace

std::string verdict_records_text(const std::vector<VerdictRecord>& rows) {
  std::string out = "# potts-records v1 verdict\n";
  out += "d lambda_re lambda_im verdict depth iterations\n";
  for (const auto& r : rows)
    append(out, "%d %.12e %.12e %s %d %d\n", r.d, r.lambda.real(),
           r.lambda.imag(), kind_token(r.verdict.kind), r.verdict.depth,
           r.verdict.iterations_used);
  return out;
}

std::string dimension_records_text(const std::vector<DimensionRecord>& rows) {
  std::string out = "# potts-records v1 dimension\n";
  out += "d lambda_re lambda_im alpha_mod n D_bowen D_formula residual deviation\n";
  for (const auto& r : rows)
    append(out, "%d %.12e %.12e %.12e %d %.12e %.12e %.12e %.12e\n", r.d,
           r.lambda.real(), r.lambda.imag(), r.alpha_mod, r.n, r.bowen,
           r.formula, r.residual, r.deviation);
  return out;
}

std::string identity_records_text(const std::vector<IdentityRecord>& rows) {
  std::string out = "# potts-records v1 identity\n";
  out += "id q n value_re value_im closed_re closed_im abs_err\n";
  for (const auto& r : rows)
    append(out, "%s %d %d %.12e %.12e %.12e %.12e %.12e\n", r.id.c_str(), r.q,
           r.n, r.value.real(), r.value.imag(), r.closed.real(),
           r.closed.imag(), r.abs_err);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok)
    throw std::runtime_error("write_text_file: short write on " + path);
}

}  // namespace potts
