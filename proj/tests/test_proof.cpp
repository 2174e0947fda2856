#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "mertens/coefficients.hpp"
#include "mertens/engine.hpp"
#include "mertens/errors.hpp"
#include "mertens/proof.hpp"
#include "mertens/sieve.hpp"

using namespace mertens;

namespace {

const MertensOracle& oracle() {
  static const MertensOracle o(10000);
  return o;
}

}  // namespace

TEST_CASE("partition sums at frozen points") {
  {
    const PartitionSummary ps = partition_sums(coefficients(oracle(), 10));
    CHECK(ps.a_last == 5);
    CHECK(ps.b_last == 9);
    CHECK(ps.a == 10);
    CHECK(ps.b == 17);
    CHECK(ps.c == 0);
    CHECK(ps.d == 0);
    CHECK(ps.count_c == 0);
    CHECK(ps.count_d == 0);
    CHECK(ps.a_lower_ok);
  }
  {
    const PartitionSummary ps = partition_sums(coefficients(oracle(), 100));
    CHECK(ps.a_last == 50);
    CHECK(ps.b_last == 90);
    CHECK(ps.a == 1225);
    CHECK(ps.b == 1690);
    CHECK(ps.c == 88);
    CHECK(ps.d == 0);
    CHECK(ps.count_c == 9);
    CHECK(ps.count_d == 0);
    CHECK(ps.a_lower_ok);
  }
  {
    // smallest n whose negative-tail set is nonempty: d_95 = -1
    const PartitionSummary ps = partition_sums(coefficients(oracle(), 96));
    CHECK(ps.a == 1128);
    CHECK(ps.b == 1557);
    CHECK(ps.c == 89);
    CHECK(ps.d == 1);
    CHECK(ps.count_c == 8);
    CHECK(ps.count_d == 1);
    CHECK(ps.a_lower_ok);
  }
}

TEST_CASE("partition agrees with an independent re-tally") {
  for (uint64_t n = 2; n <= 300; ++n) {
    const CoefficientVector cv = coefficients(oracle(), n);
    const PartitionSummary ps = partition_sums(cv);
    int64_t a = 0, b = 0, c = 0, d = 0, total = 0;
    uint64_t cc = 0, cd = 0;
    for (uint64_t j = 1; j <= n - 1; ++j) {
      total += cv.d[j];
      if (2 * j <= n) {
        a += cv.d[j];
      } else if (10 * j <= 9 * n) {
        b += cv.d[j];
      } else if (cv.d[j] >= 0) {
        c += cv.d[j];
        ++cc;
      } else {
        d -= cv.d[j];
        ++cd;
      }
    }
    REQUIRE(ps.a == a);
    REQUIRE(ps.b == b);
    REQUIRE(ps.c == c);
    REQUIRE(ps.d == d);
    REQUIRE(ps.count_c == cc);
    REQUIRE(ps.count_d == cd);
    REQUIRE(ps.a + ps.b + ps.c - ps.d == total);
  }
}

TEST_CASE("chain bounds") {
  {
    const ChainBounds cb = check_chain_bounds(coefficients(oracle(), 10));
    CHECK(cb.low_window_exact);
    CHECK(cb.constant_run_ok);
    CHECK(cb.run_value_large);
    CHECK(cb.five_ok);
    CHECK(cb.ten_ok);
    CHECK(cb.window_nonneg);
    CHECK(cb.min_window == 0);
    CHECK(cb.ok());
  }
  for (uint64_t n = 2; n <= 300; ++n) {
    const ChainBounds cb = check_chain_bounds(coefficients(oracle(), n));
    REQUIRE(cb.ok());
    REQUIRE(cb.min_window == 0);  // d_0 = d_1 = 0 and nothing below it
  }
  for (const uint64_t n : {1000ull, 2500ull}) {
    REQUIRE(check_chain_bounds(coefficients(oracle(), n)).ok());
  }
}

TEST_CASE("three-term reduction") {
  {
    const B4Check b4 = check_b4(coefficients(oracle(), 10));
    CHECK(b4.branch_note);
    CHECK(b4.sum_margin == 27);
    CHECK(b4.four_a_margin == 40);
    CHECK(b4.sum_positive);
    CHECK(b4.four_a_greater);
    CHECK(b4.lambda_form_ok);
    CHECK(b4.lambda_form_min == 0.0);  // attained at lambda = 1 exactly
    CHECK(b4.ok());
  }
  {
    const B4Check b4 = check_b4(coefficients(oracle(), 96));
    CHECK_FALSE(b4.branch_note);
    CHECK(b4.sum_margin == 1128 + 1557 + 89 - 1);
    CHECK(b4.four_a_margin == 4 * 1128 - 1);
    CHECK(b4.ok());
  }
  {
    const B4Check b4 = check_b4(coefficients(oracle(), 100));
    CHECK(b4.sum_margin == 3003);
    CHECK(b4.four_a_margin == 4900);
    CHECK(b4.ok());
  }
  // degenerate low n: the sum of coefficients is not yet positive
  CHECK_FALSE(check_b4(coefficients(oracle(), 2)).sum_positive);
  CHECK_FALSE(check_b4(coefficients(oracle(), 3)).four_a_greater);
  for (uint64_t n = 95; n <= 150; ++n) {
    REQUIRE(check_b4(coefficients(oracle(), n)).ok());
  }
  REQUIRE_THROWS_AS(check_b4(coefficients(oracle(), 10), 0), DomainError);
}

TEST_CASE("coefficient-sum decomposition") {
  const TotientTable tot = build_totient(2000);
  {
    const SumDecomposition sd = sum_decomposition(oracle(), tot, 5);
    CHECK(sd.s1 == 10);
    CHECK(sd.s2 == -2);
    CHECK(sd.s3 == 3);
    CHECK(sd.coeff_sum == 9);
    CHECK(sd.s1_matches_phi_sum);
    CHECK(sd.s2_matches_mertens);
    CHECK(sd.s3_within_log_bound);
    CHECK(sd.bound_ok);
    CHECK_FALSE(sd.bound_positive);
    CHECK(sd.ok());
  }
  {
    const SumDecomposition sd = sum_decomposition(oracle(), tot, 99);
    CHECK(sd.s1 == 3004);
    CHECK(sd.s2 == 1);
    CHECK(sd.s3 == 0);
    CHECK(sd.coeff_sum == 3003);
    CHECK(sd.bound_positive);
    CHECK(sd.ok());
  }
  // the analytic lower bound turns positive at m = 22
  CHECK_FALSE(sum_decomposition(oracle(), tot, 21).bound_positive);
  CHECK(sum_decomposition(oracle(), tot, 22).bound_positive);

  for (uint64_t m = 1; m <= 2000; ++m) {
    const SumDecomposition sd = sum_decomposition(oracle(), tot, m);
    REQUIRE(sd.ok());
  }
  // coeff_sum really is the sum of the polynomial coefficients d_1..d_m
  for (uint64_t m = 1; m <= 300; ++m) {
    const CoefficientVector cv = coefficients(oracle(), m + 1);
    int64_t total = 0;
    for (uint64_t j = 1; j <= m; ++j) total += cv.d[j];
    REQUIRE(sum_decomposition(oracle(), tot, m).coeff_sum == total);
  }

  REQUIRE_THROWS_AS(sum_decomposition(oracle(), tot, 0), DomainError);
  REQUIRE_THROWS_AS(sum_decomposition(oracle(), tot, 2001), CapacityError);
}

TEST_CASE("totient summatory lower bounds") {
  const TotientTable tot = build_totient(5000);
  for (uint64_t m = 1; m <= 5000; ++m) {
    const TotientBound tb = check_totient_bound(tot, m);
    REQUIRE(tb.ok);
    REQUIRE(tb.sharper_ok);
    REQUIRE(tb.margin > 0.0);
    REQUIRE(tb.sharper_margin > 0.0);
  }
  // the sharper variant subtracts less than m for m >= 12, so it is the
  // stronger statement there
  const TotientBound tb = check_totient_bound(tot, 94);
  CHECK(tb.sharper_margin < tb.margin);

  REQUIRE_THROWS_AS(check_totient_bound(tot, 0), DomainError);
  REQUIRE_THROWS_AS(check_totient_bound(tot, 5001), CapacityError);
}

TEST_CASE("tail estimates") {
  {
    const TailEstimate te = check_tail_estimate(coefficients(oracle(), 10));
    CHECK(te.branch_note);
    CHECK(te.d == 0);
    CHECK(te.log_ok);
    CHECK(te.c342_ok);
    CHECK(te.chain_to_a_ok);
    CHECK(te.ratio == 0.0);
    CHECK(te.ok());
  }
  {
    const TailEstimate te = check_tail_estimate(coefficients(oracle(), 96));
    CHECK_FALSE(te.branch_note);
    CHECK(te.d == 1);
    CHECK(te.ratio == 1.0 / (96.0 * 96.0));
    CHECK(te.ok());
  }
  for (uint64_t n = 95; n <= 300; ++n) {
    const TailEstimate te = check_tail_estimate(coefficients(oracle(), n));
    REQUIRE(te.log_ok);
    REQUIRE(te.c342_ok);
    REQUIRE(te.chain_to_a_ok);
    REQUIRE(te.ratio < 0.342);
  }
}

TEST_CASE("g stays nonnegative and strictly decreasing") {
  const GAudit ga = check_g(1000);
  CHECK(ga.samples == 1000);
  CHECK(ga.endpoints_exact);
  CHECK(ga.interior_nonneg);
  CHECK(ga.derivative_negative);
  CHECK(ga.min_g > 0.0);
  CHECK(ga.min_g < 1e-3);  // approached near x = 1
  CHECK(ga.max_gprime <= -0.2 + kGInteriorSlack);
  CHECK(ga.max_gprime > -0.21);
  CHECK(ga.prelambda_ok);
  CHECK(ga.prelambda_min == 0.0);  // lambda = 1 lands on g(1)
  CHECK(ga.ok());

  REQUIRE_THROWS_AS(check_g(1), DomainError);
  REQUIRE_THROWS_AS(check_g(100, 0), DomainError);
}

TEST_CASE("small-n branch") {
  for (uint64_t n = 2; n <= 94; ++n) {
    const SmallNAudit sa = check_small_n(oracle(), n);
    REQUIRE(sa.upper_half_ones);
    REQUIRE(sa.mertens_nonpos);
    REQUIRE(sa.bk_decreasing);
    REQUIRE(sa.conclusion_positive);
    REQUIRE(sa.matches_p);
    REQUIRE(sa.p_dominates);
    REQUIRE(sa.min_margin > 0);
    REQUIRE(sa.ok());
  }
  // n = 2: B_0 - B_1 = lambda^2, smallest at lambda = 1/10
  CHECK(check_small_n(oracle(), 2).min_margin == Rational(1, 100));

  REQUIRE_THROWS_AS(check_small_n(oracle(), 1), DomainError);
  REQUIRE_THROWS_AS(check_small_n(oracle(), 95), DomainError);
}

TEST_CASE("full audit composition") {
  const ProofAudit pa = audit_proof(oracle(), 100);
  const CoefficientVector cv = coefficients(oracle(), 100);
  CHECK(pa.n == 100);
  CHECK(pa.partition.a == partition_sums(cv).a);
  CHECK(pa.chains.min_window == check_chain_bounds(cv).min_window);
  CHECK(pa.b4.sum_margin == check_b4(cv).sum_margin);
  CHECK(pa.tail.d == check_tail_estimate(cv).d);
  CHECK(pa.ok());

  for (const uint64_t n : {95ull, 96ull, 120ull, 150ull, 1000ull}) {
    REQUIRE(audit_proof(oracle(), n).ok());
  }
  // below the large-n branch the three-term reduction may fail; the
  // small-n branch covers those
  CHECK_FALSE(audit_proof(oracle(), 2).ok());

  REQUIRE_THROWS_AS(audit_proof(oracle(), 1), DomainError);
}
