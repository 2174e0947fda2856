#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mertens/rational.hpp"

namespace mertens {

struct MarginValue {
  std::string decimal;  // truncated, up to 12 significant digits
  bool exact = true;

  bool operator==(const MarginValue&) const = default;
};

MarginValue margin_from(const Rational& v);
MarginValue margin_from(double v);
MarginValue margin_from(int64_t v);

// One verified claim.  n == 0 means the claim is not tied to a degree;
// lambda is present only for pointwise polynomial claims and is stored
// reduced.  micros is wall time spent producing the underlying evaluation.
struct ClaimRecord {
  std::string claim_id;
  uint64_t n = 0;
  bool has_lambda = false;
  uint64_t lambda_num = 0;
  uint64_t lambda_den = 1;
  bool pass = false;
  MarginValue margin;
  uint64_t micros = 0;

  bool operator==(const ClaimRecord&) const = default;
};

struct ReportConfig {
  std::string suite;  // theorem1 | theorem2 | proof | all
  uint64_t n_min = 2;
  uint64_t n_max = 50;
  uint64_t grid_q = 100;
  std::vector<std::pair<uint64_t, uint64_t>> lambdas;  // reduced p/q, p<q
  uint64_t threshold = 0;                              // 0 = automatic
  unsigned threads = 1;
  uint64_t g_samples = 100000;

  bool operator==(const ReportConfig&) const = default;
};

struct VerificationReport {
  std::string version;
  std::string timestamp;  // ISO-8601 UTC
  ReportConfig config;
  std::vector<ClaimRecord> claims;

  bool all_pass() const;
  void sort_claims();  // by (claim_id, n, lambda value); stable order

  bool operator==(const VerificationReport&) const = default;
};

std::string render_json(const VerificationReport& report);
std::string render_csv(const VerificationReport& report);
VerificationReport parse_json(const std::string& text);

std::string iso8601_utc_now();

// Runs the configured verification suite and collects sorted claims.
VerificationReport run_sweep(const ReportConfig& config);

struct BenchResult {
  uint64_t x = 0;
  uint64_t threshold = 0;
  int64_t value = 0;
  double seconds = 0.0;
  bool agree = true;  // same value across thresholds (and sieve when checked)
};

// Times mertens(x) for each (x, threshold) pair with a fresh memo each run
// and cross-checks the results against each other and, for x small enough,
// against a dense sieve.
std::vector<BenchResult> run_bench(const std::vector<uint64_t>& xs,
                                   const std::vector<uint64_t>& thresholds,
                                   uint64_t sieve_check_max = 10000000);

}  // namespace mertens
