#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "mertens/engine.hpp"
#include "mertens/rational.hpp"

namespace mertens {

// Coefficients of P(lambda) = sum_{j=0..n} d_j lambda^j where
//
//   f(r) = M(floor((n-1)/r))           for 1 <= r <= n-1,
//   d_0 = 0,
//   d_j = sum_{r=n-j+1}^{n-1} f(r)     for 1 <= j <= n-1,
//   d_n = 1.
//
// f is indexed 1..n-1; f[0] is unused padding.
struct CoefficientVector {
  uint64_t n = 0;
  std::vector<int64_t> d;
  std::vector<int64_t> f;
};

CoefficientVector coefficients(const MertensOracle& oracle, uint64_t n);

// Recovers the d_j by expanding
//   sum_{j=0..n} x^j - sum_{k=1..n-1} f(k) * (1 + x + ... + x^{n-k})
// term by term.  Quadratic in n; the independent cross-check for the
// suffix-sum construction above.
std::vector<int64_t> expand_direct(const MertensOracle& oracle, uint64_t n);

// Run-length view of a polynomial whose coefficient sequence is piecewise
// arithmetic: for j in [j_first, j_last], coeff(j) = c + step*(j - j_first).
// Runs are ascending and disjoint.  Because f takes one value per quotient
// block, both polynomials below need only O(sqrt(n)) runs.
struct RunPoly {
  struct Run {
    uint64_t j_first = 0;
    uint64_t j_last = 0;
    int64_t c = 0;
    int64_t step = 0;
  };
  uint64_t degree = 0;
  std::vector<Run> runs;
};

// P(lambda) as runs: d_1..d_{n-1} advance by f(n-j) at each step, which is
// constant while floor((n-1)/(n-j)) is, plus the lone d_n = 1 term.
RunPoly theorem1_run_poly(const MertensOracle& oracle, uint64_t n);

// sum_{k=1..n-1} f(k) lambda^{n-k+1} as runs over exponent j = n-k+1.
RunPoly theorem2_run_poly(const MertensOracle& oracle, uint64_t n);

// Exact scaled evaluation at lambda = p/q with 0 <= p <= q:
//   value = q^degree * poly(p/q),  p_pow = p^degree.
// Each run collapses to a closed form built from geometric sums, so the
// cost is O(sqrt(n)) big-integer operations instead of O(n).  The instance
// keeps its scratch integers between calls; reuse one evaluator for sweeps.
struct ScaledValue {
  mpz_class value;
  mpz_class p_pow;
};

class ScaledEvaluator {
 public:
  void evaluate(const RunPoly& poly, const mpz_class& p, const mpz_class& q,
                ScaledValue& out);

 private:
  mpz_class acc_, pp_, t1_, t2_, pT_, pL_, qL_, s_, u_, qmp_, qmp2_;
};

// Literal Horner evaluation of sum_j d_j p^j q^(n-j); the O(n) reference
// the run evaluator is checked against.
mpz_class evaluate_scaled_horner(const CoefficientVector& cv,
                                 const mpz_class& p, const mpz_class& q);

// Exact P(lambda) for 0 <= lambda <= 1, via Horner on the scaled integers.
Rational evaluate(const CoefficientVector& cv, const Rational& lambda);

// Compensated double Horner plus a running error bound (Higham-style):
// whenever |value| > error_bound the sign of value is provably the sign of
// the exact result.
struct FloatEval {
  double value = 0.0;
  double error_bound = 0.0;
};

FloatEval evaluate_float(const CoefficientVector& cv, double lambda);

// Grid verification of P(i/grid_q) >= 0 with equality only at i = 0, and
// of the strengthening P(lambda) >= lambda^n.
struct Theorem1Point {
  uint64_t i = 0;
  uint64_t grid_q = 1;
  bool nonneg_ok = false;
  bool remark_ok = false;
  Rational value;          // P(i/grid_q)
  Rational remark_margin;  // P - lambda^n
};

std::vector<Theorem1Point> verify_theorem1(const MertensOracle& oracle,
                                           uint64_t n, uint64_t grid_q);

// sum_{k=1..n-1} f(k) lambda^{n-k+1} > lambda^{n+1} on 0 < lambda < 1,
// plus the strengthened comparison against lambda^n.
struct Theorem2Point {
  Rational lambda;
  bool strict_ok = false;
  bool strengthened_ok = false;
  Rational lhs;
  Rational strict_margin;        // lhs - lambda^{n+1}
  Rational strengthened_margin;  // lhs - lambda^n
};

Theorem2Point verify_theorem2(const MertensOracle& oracle, uint64_t n,
                              const Rational& lambda);

// Exact check that (1 - lambda) P(lambda) equals
// sum_k f(k) lambda^{n-k+1} - lambda^{n+1} at the given point.
bool check_bridge_identity(const MertensOracle& oracle, uint64_t n,
                           const Rational& lambda);

}  // namespace mertens
