#ifndef POTTS_RECORDS_HPP
#define POTTS_RECORDS_HPP

#include <string>
#include <vector>

#include "potts/classify.hpp"
#include "potts/family.hpp"

namespace potts {

// machine-readable outputs: a format-version comment, a header row, then one
// space-delimited row per entry, numerics in %.12e

struct VerdictRecord {
  int d = 0;
  cplx lambda;
  ParamVerdict verdict;
};

struct DimensionRecord {
  int d = 0;
  cplx lambda;
  double alpha_mod = 0.0;
  int n = 0;
  double bowen = 0.0;
  double formula = 0.0;
  double residual = 0.0;   // pressure residual at the Bowen root
  double deviation = 0.0;  // |bowen - formula|
};

struct IdentityRecord {
  std::string id;  // single token naming the identity
  int q = 0;
  int n = 0;
  cplx value;
  cplx closed;
  double abs_err = 0.0;
};

std::string verdict_records_text(const std::vector<VerdictRecord>& rows);
std::string dimension_records_text(const std::vector<DimensionRecord>& rows);
std::string identity_records_text(const std::vector<IdentityRecord>& rows);

// writes text to path, throwing with path context on failure
void write_text_file(const std::string& path, const std::string& text);

}  // namespace potts

#endif
