#include "mertens/coefficients.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

void require_n(uint64_t n, const char* op) {
  if (n < 2) throw DomainError(std::string(op) + ": n must be at least 2");
}

void divexact_checked(mpz_class& r, const mpz_class& a, const mpz_class& b) {
  assert(mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()));
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

void set_i128(mpz_class& z, __int128 v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(v)
                                   : static_cast<unsigned __int128>(v);
  z = static_cast<uint64_t>(mag >> 64);
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 64);
  z += static_cast<uint64_t>(mag);
  if (negative) z = -z;
}

}  // namespace

CoefficientVector coefficients(const MertensOracle& oracle, uint64_t n) {
  require_n(n, "coefficients");
  const uint64_t m = n - 1;
  CoefficientVector cv;
  cv.n = n;
  cv.f.assign(n, 0);
  uint64_t r = 1;
  while (r <= m) {
    const uint64_t q = m / r;
    const uint64_t r2 = m / q;
    const int64_t v = oracle.mertens(q);
    for (uint64_t i = r; i <= r2; ++i) cv.f[i] = v;
    r = r2 + 1;
  }
  cv.d.assign(n + 1, 0);
  cv.d[n] = 1;
  __int128 acc = 0;
  for (uint64_t j = 2; j <= m; ++j) {
    acc += cv.f[n - j + 1];
    cv.d[j] = static_cast<int64_t>(acc);
    if (static_cast<__int128>(cv.d[j]) != acc)
      throw std::logic_error("coefficients: suffix sum overflow");
  }
  return cv;
}

std::vector<int64_t> expand_direct(const MertensOracle& oracle, uint64_t n) {
  require_n(n, "expand_direct");
  const uint64_t m = n - 1;
  std::vector<int64_t> d(n + 1, 1);
  for (uint64_t k = 1; k <= m; ++k) {
    const int64_t fk = oracle.mertens(m / k);
    if (fk == 0) continue;
    for (uint64_t j = 0; j <= n - k; ++j) d[j] -= fk;
  }
  return d;
}

RunPoly theorem1_run_poly(const MertensOracle& oracle, uint64_t n) {
  require_n(n, "theorem1_run_poly");
  const uint64_t m = n - 1;
  RunPoly poly;
  poly.degree = n;
  int64_t base = 0;  // d at the first j of the upcoming run
  uint64_t r_hi = m;
  while (r_hi >= 1) {
    const uint64_t q = m / r_hi;
    const uint64_t r_lo = m / (q + 1) + 1;
    const int64_t v = oracle.mertens(q);
    poly.runs.push_back({n - r_hi, n - r_lo, base, v});
    base += v * static_cast<int64_t>(r_hi - r_lo + 1);
    r_hi = r_lo - 1;
  }
  poly.runs.push_back({n, n, 1, 0});
  return poly;
}

RunPoly theorem2_run_poly(const MertensOracle& oracle, uint64_t n) {
  require_n(n, "theorem2_run_poly");
  const uint64_t m = n - 1;
  RunPoly poly;
  poly.degree = n;
  uint64_t k_hi = m;
  while (k_hi >= 1) {
    const uint64_t q = m / k_hi;
    const uint64_t k_lo = m / (q + 1) + 1;
    poly.runs.push_back({n + 1 - k_hi, n + 1 - k_lo, oracle.mertens(q), 0});
    k_hi = k_lo - 1;
  }
  return poly;
}

void ScaledEvaluator::evaluate(const RunPoly& poly, const mpz_class& p,
                               const mpz_class& q, ScaledValue& out) {
  if (sgn(p) < 0 || sgn(q) <= 0 || cmp(p, q) > 0)
    throw DomainError("evaluate: lambda must lie in [0, 1]");
  const uint64_t N = poly.degree;

  if (sgn(p) == 0) {
    out.value = 0;
    if (!poly.runs.empty() && poly.runs.front().j_first == 0) {
      mpz_pow_ui(t1_.get_mpz_t(), q.get_mpz_t(), N);
      out.value = poly.runs.front().c * t1_;
    }
    out.p_pow = (N == 0) ? 1 : 0;
    return;
  }

  if (cmp(p, q) == 0) {
    // lambda = 1: every lambda^j collapses to 1
    __int128 total = 0;
    for (const auto& run : poly.runs) {
      const uint64_t L = run.j_last - run.j_first + 1;
      total += static_cast<__int128>(run.c) * L;
      total += static_cast<__int128>(run.step) * ((static_cast<__int128>(L) * (L - 1)) / 2);
    }
    set_i128(acc_, total);
    mpz_pow_ui(t1_.get_mpz_t(), q.get_mpz_t(), N);
    out.value = acc_ * t1_;
    out.p_pow = t1_;
    return;
  }

  // For each run [A, B] with coefficients c + step*(j - A) and L = B-A+1:
  //
  //   sum_{j=A..B} coeff(j) p^j q^(N-j)
  //     = p^A q^(N-B) * (c * S_L + step * p * U_(L-1) / (q-p)^2),
  //   S_L = (q^L - p^L)/(q-p),
  //   U_T = q^(T+1) - p^T (L q - T p).
  //
  // Runs are stitched with a Horner pass so no intermediate product is
  // formed at full width twice.
  qmp_ = q - p;
  qmp2_ = qmp_ * qmp_;
  acc_ = 0;
  pp_ = 1;
  uint64_t prev_a = 0, prev_b = 0;
  bool first = true;
  for (const auto& run : poly.runs) {
    const uint64_t a = run.j_first, b = run.j_last, len = b - a + 1;
    if (a > prev_a) {
      mpz_pow_ui(t1_.get_mpz_t(), p.get_mpz_t(), a - prev_a);
      pp_ *= t1_;
    }
    if (!first && b > prev_b) {
      mpz_pow_ui(t1_.get_mpz_t(), q.get_mpz_t(), b - prev_b);
      acc_ *= t1_;
    }
    mpz_pow_ui(pT_.get_mpz_t(), p.get_mpz_t(), len - 1);
    pL_ = pT_ * p;
    mpz_pow_ui(qL_.get_mpz_t(), q.get_mpz_t(), len);
    s_ = qL_ - pL_;
    divexact_checked(s_, s_, qmp_);
    mpz_mul_si(t2_.get_mpz_t(), s_.get_mpz_t(), run.c);
    if (run.step != 0 && len >= 2) {
      mpz_mul_ui(t1_.get_mpz_t(), q.get_mpz_t(), len);
      mpz_submul_ui(t1_.get_mpz_t(), p.get_mpz_t(), len - 1);
      mpz_mul(u_.get_mpz_t(), pT_.get_mpz_t(), t1_.get_mpz_t());
      mpz_sub(u_.get_mpz_t(), qL_.get_mpz_t(), u_.get_mpz_t());
      divexact_checked(u_, u_, qmp2_);
      mpz_mul(u_.get_mpz_t(), u_.get_mpz_t(), p.get_mpz_t());
      mpz_mul_si(u_.get_mpz_t(), u_.get_mpz_t(), run.step);
      t2_ += u_;
    }
    mpz_addmul(acc_.get_mpz_t(), pp_.get_mpz_t(), t2_.get_mpz_t());
    prev_a = a;
    prev_b = b;
    first = false;
  }
  if (N > prev_b) {
    mpz_pow_ui(t1_.get_mpz_t(), q.get_mpz_t(), N - prev_b);
    acc_ *= t1_;
  }
  if (N > prev_a) {
    mpz_pow_ui(t1_.get_mpz_t(), p.get_mpz_t(), N - prev_a);
    pp_ *= t1_;
  }
  mpz_swap(out.value.get_mpz_t(), acc_.get_mpz_t());
  mpz_swap(out.p_pow.get_mpz_t(), pp_.get_mpz_t());
}

mpz_class evaluate_scaled_horner(const CoefficientVector& cv,
                                 const mpz_class& p, const mpz_class& q) {
  if (sgn(p) < 0 || sgn(q) <= 0 || cmp(p, q) > 0)
    throw DomainError("evaluate: lambda must lie in [0, 1]");
  mpz_class acc(cv.d[cv.n]), qe(1);
  for (uint64_t j = cv.n; j-- > 0;) {
    qe *= q;
    acc *= p;
    const int64_t dj = cv.d[j];
    if (dj >= 0) {
      mpz_addmul_ui(acc.get_mpz_t(), qe.get_mpz_t(), static_cast<unsigned long>(dj));
    } else {
      mpz_submul_ui(acc.get_mpz_t(), qe.get_mpz_t(), static_cast<unsigned long>(-dj));
    }
  }
  return acc;
}

Rational evaluate(const CoefficientVector& cv, const Rational& lambda) {
  Rational lam = lambda;
  lam.canonicalize();
  if (lam < 0 || lam > 1) throw DomainError("evaluate: lambda outside [0, 1]");
  mpz_class nhat = evaluate_scaled_horner(cv, lam.get_num(), lam.get_den());
  mpz_class den_pow;
  mpz_pow_ui(den_pow.get_mpz_t(), lam.get_den().get_mpz_t(), cv.n);
  Rational r(nhat, den_pow);
  r.canonicalize();
  return r;
}

FloatEval evaluate_float(const CoefficientVector& cv, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw DomainError("evaluate_float: lambda outside [0, 1]");
  // Horner with fma plus Higham's running error recurrence; the bound is
  // valid for the classical two-rounding step, so a fortiori for fma.
  const double unit = 0x1p-53;
  double value = static_cast<double>(cv.d[cv.n]);
  double mu = std::fabs(value) / 2;
  for (uint64_t j = cv.n; j-- > 0;) {
    value = std::fma(value, lambda, static_cast<double>(cv.d[j]));
    mu = mu * lambda + std::fabs(value);
  }
  return {value, unit * (2 * mu - std::fabs(value))};
}

std::vector<Theorem1Point> verify_theorem1(const MertensOracle& oracle,
                                           uint64_t n, uint64_t grid_q) {
  require_n(n, "verify_theorem1");
  if (grid_q == 0) throw DomainError("verify_theorem1: grid_q must be positive");
  const RunPoly poly = theorem1_run_poly(oracle, n);
  ScaledEvaluator eval;
  ScaledValue sv;
  std::vector<Theorem1Point> points;
  points.reserve(grid_q + 1);
  mpz_class qn;
  for (uint64_t i = 0; i <= grid_q; ++i) {
    const uint64_t g = std::gcd(i, grid_q);
    const mpz_class p(static_cast<unsigned long>(g ? i / g : 0));
    const mpz_class q(static_cast<unsigned long>(g ? grid_q / g : 1));
    eval.evaluate(poly, p, q, sv);
    Theorem1Point pt;
    pt.i = i;
    pt.grid_q = grid_q;
    pt.nonneg_ok = (i == 0) ? sv.value == 0 : sv.value > 0;
    pt.remark_ok = sv.value >= sv.p_pow;
    mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
    pt.value = Rational(sv.value, qn);
    pt.value.canonicalize();
    pt.remark_margin = Rational(sv.value - sv.p_pow, qn);
    pt.remark_margin.canonicalize();
    points.push_back(std::move(pt));
  }
  return points;
}

Theorem2Point verify_theorem2(const MertensOracle& oracle, uint64_t n,
                              const Rational& lambda) {
  require_n(n, "verify_theorem2");
  Rational lam = lambda;
  lam.canonicalize();
  if (lam <= 0 || lam >= 1)
    throw DomainError("verify_theorem2: lambda must lie strictly inside (0, 1)");
  const RunPoly poly = theorem2_run_poly(oracle, n);
  ScaledEvaluator eval;
  ScaledValue sv;
  const mpz_class& p = lam.get_num();
  const mpz_class& q = lam.get_den();
  eval.evaluate(poly, p, q, sv);

  mpz_class qn;
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
  const mpz_class qn1 = qn * q;

  Theorem2Point pt;
  pt.lambda = lam;
  const mpz_class lhs_next = q * sv.value;   // q^(n+1) * lhs
  const mpz_class rhs_next = p * sv.p_pow;   // p^(n+1)
  pt.strict_ok = lhs_next > rhs_next;
  // At n = 2 the left side is exactly lambda^2, so the lambda^n comparison
  // degenerates to equality; it is strict for every n >= 3.
  pt.strengthened_ok = n == 2 ? sv.value >= sv.p_pow : sv.value > sv.p_pow;
  pt.lhs = Rational(sv.value, qn);
  pt.lhs.canonicalize();
  pt.strict_margin = Rational(lhs_next - rhs_next, qn1);
  pt.strict_margin.canonicalize();
  pt.strengthened_margin = Rational(sv.value - sv.p_pow, qn);
  pt.strengthened_margin.canonicalize();
  return pt;
}

bool check_bridge_identity(const MertensOracle& oracle, uint64_t n,
                           const Rational& lambda) {
  require_n(n, "check_bridge_identity");
  Rational lam = lambda;
  lam.canonicalize();
  if (lam < 0 || lam > 1)
    throw DomainError("check_bridge_identity: lambda outside [0, 1]");
  const mpz_class& p = lam.get_num();
  const mpz_class& q = lam.get_den();
  ScaledEvaluator eval;
  ScaledValue left, right;
  eval.evaluate(theorem1_run_poly(oracle, n), p, q, left);
  eval.evaluate(theorem2_run_poly(oracle, n), p, q, right);
  // (1 - lambda) P(lambda) == sum - lambda^(n+1), scaled by q^(n+1)
  return (q - p) * left.value == q * right.value - p * right.p_pow;
}

}  // namespace mertens
