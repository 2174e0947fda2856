#pragma once

#include <cstdint>
#include <vector>

#include "mertens/coefficients.hpp"
#include "mertens/engine.hpp"
#include "mertens/rational.hpp"
#include "mertens/sieve.hpp"

namespace mertens {

// Split of {1 <= j <= n-1} used by the large-n positivity argument:
//   A: 2j <= n,
//   B: 2j > n and 10j <= 9n,
//   C: 10j > 9n, d_j >= 0,
//   D: 10j > 9n, d_j < 0,
// with a, b, c the plain sums and d the sum of |d_j| over D.
struct PartitionSummary {
  uint64_t n = 0;
  uint64_t a_last = 0;  // largest j with 2j <= n
  uint64_t b_last = 0;  // largest j with 10j <= 9n
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
  int64_t d = 0;
  uint64_t count_c = 0;
  uint64_t count_d = 0;
  // a >= (w-1)(w-2)/2 with w = n - floor((n-1)/2), and 8a >= n^2 - 4n + 3
  bool a_lower_ok = false;
};

PartitionSummary partition_sums(const CoefficientVector& cv);

// The stepwise lower bounds on d_j between n - floor((n-1)/2) and
// n - floor((n-1)/10), plus the exact low window d_j = j - 1.
struct ChainBounds {
  uint64_t n = 0;
  bool low_window_exact = false;  // d_j == j-1 for 2 <= j <= n - floor((n-1)/2)
  bool constant_run_ok = false;   // d_j == n-1-floor((n-1)/2) up to n - floor((n-1)/3)
  bool run_value_large = false;   // that constant >= (n-1)/2
  bool five_ok = false;           // 30 d_j >= 11n - 35 up to n - floor((n-1)/5), n >= 4
  bool ten_ok = false;            // 210 d_j >= 40n - 1116 up to n - floor((n-1)/10), n >= 28
  bool window_nonneg = false;     // d_j >= 0 for 0 <= j <= n - floor((n-1)/10)
  int64_t min_window = 0;

  bool ok() const {
    return low_window_exact && constant_run_ok && run_value_large && five_ok &&
           ten_ok && window_nonneg;
  }
};

ChainBounds check_chain_bounds(const CoefficientVector& cv);

// The three inequalities the large-n branch reduces to:
//   a + b + c - d > 0,
//   4a > d,
//   lambda^(n/2) + 3 lambda^n - 4 lambda^(9n/10) >= 0 on the lambda grid.
// The third is evaluated as g(lambda^(n/2)) with g(x) = 1 - 4x^0.8 + 3x,
// which is the same quantity divided by lambda^(n/2).
struct B4Check {
  uint64_t n = 0;
  bool branch_note = false;  // n < 95: outside the branch the argument targets
  int64_t sum_margin = 0;    // a + b + c - d
  int64_t four_a_margin = 0; // 4a - d
  bool sum_positive = false;
  bool four_a_greater = false;
  double lambda_form_min = 0.0;
  bool lambda_form_ok = false;

  bool ok() const { return sum_positive && four_a_greater && lambda_form_ok; }
};

// Float tolerance for the grid form of the third inequality.
inline constexpr double kB4GridSlack = 1e-12;

B4Check check_b4(const CoefficientVector& cv, uint64_t grid_q = 1000);

// sum_{j=1..m} d_j = S1 - S2 - S3 for n = m + 1, where
//   S1 = sum r f(r) = phi(1) + ... + phi(m),
//   S2 = f(1) = M(m),
//   S3 = sum_{r=2..m} f(r) <= m log m.
// S1 and S3 are accumulated over quotient blocks.
struct SumDecomposition {
  uint64_t m = 0;
  int64_t s1 = 0;
  int64_t s2 = 0;
  int64_t s3 = 0;
  int64_t coeff_sum = 0;  // s1 - s2 - s3
  bool s1_matches_phi_sum = false;
  bool s2_matches_mertens = false;
  bool s3_within_log_bound = false;
  // coeff_sum >= 3m^2/pi^2 - (3/2) m log m - 2m, the proof's combined lower
  // bound; the right side is positive from the large-n branch onward.
  double bound = 0.0;
  bool bound_ok = false;
  bool bound_positive = false;

  bool ok() const {
    return s1_matches_phi_sum && s2_matches_mertens && s3_within_log_bound &&
           bound_ok;
  }
};

SumDecomposition sum_decomposition(const MertensOracle& oracle,
                                   const TotientTable& tot, uint64_t m);

// phi(1) + ... + phi(m) >= 3m^2/pi^2 - (1/2) m log m - m, plus the sharper
// Euler-Mascheroni variant.  When the right side lands within 1e-6 of an
// integer the check demands a full extra unit, so float rounding can never
// decide it.
struct TotientBound {
  uint64_t m = 0;
  double margin = 0.0;
  bool ok = false;
  double sharper_margin = 0.0;
  bool sharper_ok = false;
};

inline constexpr double kNearIntegerGuard = 1e-6;
inline constexpr long double kEulerGamma = 0.5772156649015329L;

TotientBound check_totient_bound(const TotientTable& tot, uint64_t m);

// d <= (n^2/10)(log(950/85) + 1) <= 0.342 n^2 < (n^2-4n+3)/2 <= 4a.
// The 0.342 comparison is exact: 1000 d <= 342 n^2 in integers.
struct TailEstimate {
  uint64_t n = 0;
  bool branch_note = false;  // n < 95
  int64_t d = 0;
  double log_rhs = 0.0;
  bool log_ok = false;
  bool c342_ok = false;
  bool chain_to_a_ok = false;
  double ratio = 0.0;  // d / n^2

  bool ok() const { return log_ok && c342_ok && chain_to_a_ok; }
};

TailEstimate check_tail_estimate(const CoefficientVector& cv);

// g(x) = 1 - 4x^0.8 + 3x on [0, 1]: endpoints g(0) = 1 and g(1) = 0 exactly
// in doubles, g >= 0 and g' <= -0.2 at interior samples, and the
// pre-substitution grid form g(lambda^(n/2)) >= 0 for a set of n.
struct GAudit {
  uint64_t samples = 0;
  bool endpoints_exact = false;
  bool interior_nonneg = false;
  bool derivative_negative = false;
  double min_g = 0.0;
  double max_gprime = 0.0;
  bool prelambda_ok = false;
  double prelambda_min = 0.0;

  bool ok() const {
    return endpoints_exact && interior_nonneg && derivative_negative &&
           prelambda_ok;
  }
};

inline constexpr double kGInteriorSlack = 1e-12;

GAudit check_g(uint64_t samples, uint64_t grid_q = 1000,
               const std::vector<uint64_t>& n_set = {2, 3, 10, 95, 1000});

// The 2 <= n <= 94 branch, with B_k = sum_{j=0..m+1-k} lambda^j:
// upper-half f values are 1, M(j) <= 0 for 2 <= j <= 93, the B_k decrease,
// and B_0 - B_{floor(m/2)+1} > 0; moreover B_0 - sum_k f(k) B_k recovers
// P(lambda) exactly and dominates that difference.  All evaluations are
// exact rationals at the sampled lambda values.
struct SmallNAudit {
  uint64_t n = 0;
  bool upper_half_ones = false;
  bool mertens_nonpos = false;
  bool bk_decreasing = false;
  bool conclusion_positive = false;
  bool matches_p = false;
  bool p_dominates = false;
  Rational min_margin;  // min over sampled lambda of B_0 - B_{floor(m/2)+1}

  bool ok() const {
    return upper_half_ones && mertens_nonpos && bk_decreasing &&
           conclusion_positive && matches_p && p_dominates;
  }
};

SmallNAudit check_small_n(const MertensOracle& oracle, uint64_t n);

// One-stop audit for a single n >= 95 (callable below with branch notes).
struct ProofAudit {
  uint64_t n = 0;
  PartitionSummary partition;
  ChainBounds chains;
  B4Check b4;
  TailEstimate tail;

  bool ok() const {
    return partition.a_lower_ok && chains.ok() && b4.ok() && tail.ok();
  }
};

ProofAudit audit_proof(const MertensOracle& oracle, uint64_t n,
                       uint64_t grid_q = 1000);

}  // namespace mertens
