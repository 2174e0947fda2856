#include "mertens/proof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

int64_t narrow(__int128 v, const char* what) {
  const auto r = static_cast<int64_t>(v);
  if (static_cast<__int128>(r) != v)
    throw std::logic_error(std::string(what) + ": sum overflow");
  return r;
}

double g_of(double x) { return 1.0 - 4.0 * std::pow(x, 0.8) + 3.0 * x; }

// Integer comparison "value >= (num)/(den)" for signed num, positive den.
bool ge_fraction(int64_t value, int64_t num, int64_t den) {
  return static_cast<__int128>(value) * den >= num;
}

// Integer-valued left side against a real bound, with the near-integer
// cushion: if the bound sits within kNearIntegerGuard of an integer, demand
// a whole extra unit so the comparison never rests on rounding.
bool clears_bound(long double value, long double bound) {
  if (std::abs(bound - std::rint(bound)) < kNearIntegerGuard)
    return value >= bound + 1.0L;
  return value >= bound;
}

}  // namespace

PartitionSummary partition_sums(const CoefficientVector& cv) {
  const uint64_t n = cv.n;
  const uint64_t m = n - 1;
  PartitionSummary ps;
  ps.n = n;
  ps.a_last = n / 2;
  ps.b_last = 9 * n / 10;
  __int128 a = 0, b = 0, c = 0, d = 0;
  for (uint64_t j = 1; j <= m; ++j) {
    const int64_t dj = cv.d[j];
    if (2 * j <= n) {
      a += dj;
    } else if (10 * j <= 9 * n) {
      b += dj;
    } else if (dj >= 0) {
      c += dj;
      ++ps.count_c;
    } else {
      d -= dj;
      ++ps.count_d;
    }
  }
  ps.a = narrow(a, "partition_sums a");
  ps.b = narrow(b, "partition_sums b");
  ps.c = narrow(c, "partition_sums c");
  ps.d = narrow(d, "partition_sums d");

  // a >= (w-1)(w-2)/2 for w = n - floor((n-1)/2), and 8a >= n^2 - 4n + 3
  const uint64_t w = n - (n - 1) / 2;
  const __int128 tri = static_cast<__int128>(w - 1) * (w - 2) / 2;
  const __int128 quad = static_cast<__int128>(n) * n - 4 * static_cast<__int128>(n) + 3;
  ps.a_lower_ok = a >= tri && 8 * a >= quad;
  return ps;
}

ChainBounds check_chain_bounds(const CoefficientVector& cv) {
  const uint64_t n = cv.n;
  const uint64_t m = n - 1;
  ChainBounds cb;
  cb.n = n;

  const uint64_t w = n - (n - 1) / 2;

  cb.low_window_exact = true;
  for (uint64_t j = 2; j <= std::min(w, n); ++j) {
    if (cv.d[j] != static_cast<int64_t>(j) - 1) {
      cb.low_window_exact = false;
      break;
    }
  }

  // d_j stays at n - 1 - floor((n-1)/2) while f contributes only M(2) = 0
  const int64_t run_value = static_cast<int64_t>(n - 1 - (n - 1) / 2);
  cb.constant_run_ok = true;
  {
    const uint64_t lo = w + 1, hi = std::min(n - (n - 1) / 3, m);
    for (uint64_t j = lo; j <= hi; ++j) {
      if (cv.d[j] != run_value) {
        cb.constant_run_ok = false;
        break;
      }
    }
  }
  cb.run_value_large = 2 * run_value >= static_cast<int64_t>(n) - 1;

  cb.five_ok = true;
  if (n >= 4) {
    const uint64_t lo = n - (n - 1) / 3 + 1, hi = std::min(n - (n - 1) / 5, m);
    for (uint64_t j = lo; j <= hi; ++j) {
      if (!ge_fraction(cv.d[j], 11 * static_cast<int64_t>(n) - 35, 30)) {
        cb.five_ok = false;
        break;
      }
    }
  }

  cb.ten_ok = true;
  if (n >= 28) {
    const uint64_t lo = w, hi = std::min(n - (n - 1) / 10, m);
    for (uint64_t j = lo; j <= hi; ++j) {
      if (!ge_fraction(cv.d[j], 40 * static_cast<int64_t>(n) - 1116, 210)) {
        cb.ten_ok = false;
        break;
      }
    }
  }

  cb.window_nonneg = true;
  cb.min_window = cv.d[0];
  const uint64_t window_hi = std::min(n - (n - 1) / 10, n);
  for (uint64_t j = 0; j <= window_hi; ++j) {
    cb.min_window = std::min(cb.min_window, cv.d[j]);
    if (cv.d[j] < 0) cb.window_nonneg = false;
  }
  return cb;
}

B4Check check_b4(const CoefficientVector& cv, uint64_t grid_q) {
  if (grid_q == 0) throw DomainError("check_b4: grid_q must be positive");
  const PartitionSummary ps = partition_sums(cv);
  B4Check b4;
  b4.n = cv.n;
  b4.branch_note = cv.n < 95;
  b4.sum_margin = ps.a + ps.b + ps.c - ps.d;
  b4.four_a_margin = 4 * ps.a - ps.d;
  b4.sum_positive = b4.sum_margin > 0;
  b4.four_a_greater = b4.four_a_margin > 0;

  const double half_n = static_cast<double>(cv.n) / 2.0;
  double min_form = 1.0;
  for (uint64_t i = 0; i <= grid_q; ++i) {
    const double lambda = static_cast<double>(i) / static_cast<double>(grid_q);
    const double x = std::pow(lambda, half_n);
    min_form = std::min(min_form, g_of(x));
  }
  b4.lambda_form_min = min_form;
  b4.lambda_form_ok = min_form >= -kB4GridSlack;
  return b4;
}

SumDecomposition sum_decomposition(const MertensOracle& oracle,
                                   const TotientTable& tot, uint64_t m) {
  if (m == 0) throw DomainError("sum_decomposition: m must be positive");
  if (m > tot.limit)
    throw CapacityError("sum_decomposition: m " + std::to_string(m) +
                        " exceeds totient table limit " +
                        std::to_string(tot.limit));
  SumDecomposition sd;
  sd.m = m;
  __int128 s1 = 0, s_all = 0;
  int64_t first_block_value = 0;
  uint64_t r = 1;
  while (r <= m) {
    const uint64_t q = m / r;
    const uint64_t r2 = m / q;
    const int64_t mq = oracle.mertens(q);
    if (r == 1) first_block_value = mq;
    s1 += static_cast<__int128>(mq) *
          ((static_cast<__int128>(r) + r2) * (r2 - r + 1) / 2);
    s_all += static_cast<__int128>(mq) * (r2 - r + 1);
    r = r2 + 1;
  }
  sd.s1 = narrow(s1, "sum_decomposition s1");
  sd.s2 = first_block_value;
  sd.s3 = narrow(s_all - sd.s2, "sum_decomposition s3");
  sd.coeff_sum = narrow(s1 - sd.s2 - (s_all - sd.s2), "sum_decomposition");

  sd.s1_matches_phi_sum =
      sd.s1 >= 0 && static_cast<uint64_t>(sd.s1) == tot.phi_sum_at(m);
  sd.s2_matches_mertens = sd.s2 == oracle.mertens(m);
  sd.s3_within_log_bound =
      static_cast<long double>(sd.s3) <=
      static_cast<long double>(m) * std::log(static_cast<long double>(m));

  const long double pi = std::numbers::pi_v<long double>;
  const auto mm = static_cast<long double>(m);
  const long double bound =
      3.0L * mm * mm / (pi * pi) - 1.5L * mm * std::log(mm) - 2.0L * mm;
  sd.bound = static_cast<double>(bound);
  sd.bound_ok = clears_bound(static_cast<long double>(sd.coeff_sum), bound);
  sd.bound_positive = bound > 0.0L;
  return sd;
}

TotientBound check_totient_bound(const TotientTable& tot, uint64_t m) {
  if (m == 0) throw DomainError("check_totient_bound: m must be positive");
  if (m > tot.limit)
    throw CapacityError("check_totient_bound: m " + std::to_string(m) +
                        " exceeds totient table limit " +
                        std::to_string(tot.limit));
  const long double pi = std::numbers::pi_v<long double>;
  const auto mm = static_cast<long double>(m);
  const long double log_m = std::log(mm);
  const long double weak = 3.0L * mm * mm / (pi * pi) - 0.5L * mm * log_m - mm;
  const long double sharp = 3.0L * mm * mm / (pi * pi) - 0.5L * mm * log_m -
                            (kEulerGamma / 2.0L + 0.625L) * mm - 1.0L;
  const auto phi = static_cast<long double>(tot.phi_sum_at(m));

  TotientBound tb;
  tb.m = m;
  tb.margin = static_cast<double>(phi - weak);
  tb.ok = clears_bound(phi, weak);
  tb.sharper_margin = static_cast<double>(phi - sharp);
  tb.sharper_ok = clears_bound(phi, sharp);
  return tb;
}

TailEstimate check_tail_estimate(const CoefficientVector& cv) {
  const PartitionSummary ps = partition_sums(cv);
  const uint64_t n = cv.n;
  TailEstimate te;
  te.n = n;
  te.branch_note = n < 95;
  te.d = ps.d;
  const auto nn = static_cast<long double>(n) * static_cast<long double>(n);
  te.log_rhs = static_cast<double>(nn / 10.0L *
                                   (std::log(950.0L / 85.0L) + 1.0L));
  te.log_ok = static_cast<long double>(te.d) <=
              nn / 10.0L * (std::log(950.0L / 85.0L) + 1.0L);
  const __int128 n2 = static_cast<__int128>(n) * n;
  te.c342_ok = 1000 * static_cast<__int128>(te.d) <= 342 * n2;
  if (n >= 95) {
    const __int128 quad = n2 - 4 * static_cast<__int128>(n) + 3;
    te.chain_to_a_ok =
        684 * n2 < 1000 * quad && quad <= 8 * static_cast<__int128>(ps.a);
  } else {
    te.chain_to_a_ok = true;
  }
  te.ratio = static_cast<double>(te.d) / static_cast<double>(nn);
  return te;
}

GAudit check_g(uint64_t samples, uint64_t grid_q,
               const std::vector<uint64_t>& n_set) {
  if (samples < 2) throw DomainError("check_g: need at least 2 samples");
  if (grid_q == 0) throw DomainError("check_g: grid_q must be positive");
  GAudit ga;
  ga.samples = samples;
  ga.endpoints_exact = g_of(0.0) == 1.0 && g_of(1.0) == 0.0;

  double min_g = g_of(0.0);
  double max_gprime = -4.0;
  for (uint64_t i = 1; i <= samples; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(samples + 1);
    min_g = std::min(min_g, g_of(x));
    const double gprime = 3.0 - 3.2 * std::pow(x, -0.2);
    max_gprime = std::max(max_gprime, gprime);
  }
  ga.min_g = min_g;
  ga.max_gprime = max_gprime;
  ga.interior_nonneg = min_g >= -kGInteriorSlack;
  ga.derivative_negative = max_gprime <= -0.2 + kGInteriorSlack;

  double pre_min = 1.0;
  for (const uint64_t n : n_set) {
    const double half_n = static_cast<double>(n) / 2.0;
    for (uint64_t i = 0; i <= grid_q; ++i) {
      const double lambda = static_cast<double>(i) / static_cast<double>(grid_q);
      pre_min = std::min(pre_min, g_of(std::pow(lambda, half_n)));
    }
  }
  ga.prelambda_min = pre_min;
  ga.prelambda_ok = pre_min >= -kGInteriorSlack;
  return ga;
}

SmallNAudit check_small_n(const MertensOracle& oracle, uint64_t n) {
  if (n < 2 || n > 94)
    throw DomainError("check_small_n: n must lie in [2, 94]");
  const uint64_t m = n - 1;
  const uint64_t h = m / 2;

  SmallNAudit sa;
  sa.n = n;

  sa.upper_half_ones = true;
  for (uint64_t k = h + 1; k <= m; ++k) {
    if (oracle.mertens(m / k) != 1) sa.upper_half_ones = false;
  }

  sa.mertens_nonpos = true;
  for (uint64_t j = 2; j <= 93; ++j) {
    if (oracle.mertens(j) > 0) sa.mertens_nonpos = false;
  }

  const CoefficientVector cv = coefficients(oracle, n);
  static const std::vector<std::pair<unsigned long, unsigned long>> kLambdas = {
      {1, 10}, {1, 3}, {1, 2}, {2, 3}, {9, 10}, {1, 1}};

  sa.bk_decreasing = true;
  sa.conclusion_positive = true;
  sa.matches_p = true;
  sa.p_dominates = true;
  bool first = true;
  for (const auto& [pl, ql] : kLambdas) {
    const Rational lambda(pl, ql);
    // B_k = sum_{j=0}^{m+1-k} lambda^j, built from the top down
    std::vector<Rational> bk(m + 2);
    bk[m + 1] = 1;
    Rational power = 1;
    for (uint64_t k = m + 1; k-- > 0;) {
      power *= lambda;
      bk[k] = bk[k + 1] + power;
    }
    for (uint64_t k = 0; k <= m; ++k) {
      if (!(bk[k] > bk[k + 1])) sa.bk_decreasing = false;
    }
    const Rational margin = bk[0] - bk[h + 1];
    if (!(margin > 0)) sa.conclusion_positive = false;
    if (first || margin < sa.min_margin) sa.min_margin = margin;
    first = false;

    Rational weighted = bk[0];
    for (uint64_t k = 1; k <= m; ++k) {
      weighted -= Rational(oracle.mertens(m / k)) * bk[k];
    }
    if (weighted != evaluate(cv, lambda)) sa.matches_p = false;
    if (!(weighted >= margin)) sa.p_dominates = false;
  }
  return sa;
}

ProofAudit audit_proof(const MertensOracle& oracle, uint64_t n,
                       uint64_t grid_q) {
  if (n < 2) throw DomainError("audit_proof: n must be at least 2");
  ProofAudit pa;
  pa.n = n;
  const CoefficientVector cv = coefficients(oracle, n);
  pa.partition = partition_sums(cv);
  pa.chains = check_chain_bounds(cv);
  pa.b4 = check_b4(cv, grid_q);
  pa.tail = check_tail_estimate(cv);
  return pa;
}

}  // namespace mertens
