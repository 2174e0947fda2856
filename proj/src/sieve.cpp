#include "mertens/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

uint64_t isqrt(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<uint32_t> primes_up_to(uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<uint32_t> primes;
  for (uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<uint32_t>(i));
    for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

constexpr uint64_t kSegmentSize = uint64_t(1) << 16;

}  // namespace

namespace detail {

void mobius_linear(uint64_t limit, std::vector<int8_t>& mu) {
  mu.assign(limit + 1, 0);
  if (limit >= 1) mu[1] = 1;
  std::vector<bool> composite(limit + 1, false);
  std::vector<uint32_t> primes;
  for (uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<uint32_t>(i));
      mu[i] = -1;
    }
    for (uint32_t p : primes) {
      uint64_t ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = -mu[i];
    }
  }
}

void mobius_segmented(uint64_t limit, std::vector<int8_t>& mu) {
  mu.assign(limit + 1, 0);
  if (limit >= 1) mu[1] = 1;
  const std::vector<uint32_t> primes = primes_up_to(isqrt(limit));
  std::vector<uint64_t> rem(kSegmentSize);
  for (uint64_t lo = 1; lo <= limit; lo += kSegmentSize) {
    const uint64_t hi = std::min(limit, lo + kSegmentSize - 1);
    const uint64_t len = hi - lo + 1;
    std::memset(mu.data() + lo, 1, len);
    for (uint64_t i = 0; i < len; ++i) rem[i] = lo + i;
    for (uint32_t p : primes) {
      const uint64_t pp = uint64_t(p) * p;
      if (pp > hi) break;
      uint64_t start = ((lo + p - 1) / p) * p;
      for (uint64_t j = start; j <= hi; j += p) {
        mu[j] = -mu[j];
        rem[j - lo] /= p;
      }
      start = ((lo + pp - 1) / pp) * pp;
      for (uint64_t j = start; j <= hi; j += pp) mu[j] = 0;
    }
    for (uint64_t i = 0; i < len; ++i) {
      if (mu[lo + i] != 0 && rem[i] > 1) mu[lo + i] = -mu[lo + i];
    }
  }
  if (limit >= 1) mu[1] = 1;
}

void totient_linear(uint64_t limit, std::vector<uint32_t>& phi) {
  phi.assign(limit + 1, 0);
  if (limit >= 1) phi[1] = 1;
  std::vector<bool> composite(limit + 1, false);
  std::vector<uint32_t> primes;
  for (uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<uint32_t>(i));
      phi[i] = static_cast<uint32_t>(i - 1);
    }
    for (uint32_t p : primes) {
      uint64_t ip = i * p;
      if (ip > limit) break;
      composite[ip] = true;
      if (i % p == 0) {
        phi[ip] = phi[i] * p;
        break;
      }
      phi[ip] = phi[i] * (p - 1);
    }
  }
}

void totient_segmented(uint64_t limit, std::vector<uint32_t>& phi) {
  phi.assign(limit + 1, 0);
  if (limit >= 1) phi[1] = 1;
  const std::vector<uint32_t> primes = primes_up_to(isqrt(limit));
  std::vector<uint64_t> rem(kSegmentSize);
  std::vector<uint64_t> acc(kSegmentSize);
  for (uint64_t lo = 1; lo <= limit; lo += kSegmentSize) {
    const uint64_t hi = std::min(limit, lo + kSegmentSize - 1);
    const uint64_t len = hi - lo + 1;
    for (uint64_t i = 0; i < len; ++i) {
      rem[i] = lo + i;
      acc[i] = 1;
    }
    for (uint32_t p : primes) {
      if (uint64_t(p) * p > hi) break;
      const uint64_t start = ((lo + p - 1) / p) * p;
      for (uint64_t j = start; j <= hi; j += p) {
        uint64_t& r = rem[j - lo];
        uint64_t pe = 1;
        while (r % p == 0) {
          r /= p;
          pe *= p;
        }
        acc[j - lo] *= (pe / p) * (p - 1);
      }
    }
    for (uint64_t i = 0; i < len; ++i) {
      uint64_t v = acc[i];
      if (rem[i] > 1) v *= rem[i] - 1;
      phi[lo + i] = static_cast<uint32_t>(v);
    }
  }
  if (limit >= 1) phi[1] = 1;
}

}  // namespace detail

int MobiusTable::mu_at(uint64_t n) const {
  if (n == 0 || n > limit) throw DomainError("mu_at: n out of range");
  return mu[n];
}

int64_t MertensTable::mertens_at(uint64_t n) const {
  if (n == 0 || n > limit) throw DomainError("mertens_at: n out of range");
  return m[n];
}

uint32_t TotientTable::phi_at(uint64_t n) const {
  if (n == 0 || n > limit) throw DomainError("phi_at: n out of range");
  return phi[n];
}

uint64_t TotientTable::phi_sum_at(uint64_t n) const {
  if (n == 0 || n > limit) throw DomainError("phi_sum_at: n out of range");
  return phi_sum[n];
}

MobiusTable build_mobius(uint64_t limit, uint64_t capacity) {
  if (limit == 0) throw CapacityError("build_mobius: limit must be positive");
  if (limit > capacity)
    throw CapacityError("build_mobius: limit " + std::to_string(limit) +
                        " exceeds capacity " + std::to_string(capacity));
  MobiusTable t;
  t.limit = limit;
  if (limit <= kLinearSieveMax) {
    detail::mobius_linear(limit, t.mu);
  } else {
    detail::mobius_segmented(limit, t.mu);
  }
  return t;
}

MertensTable build_mertens(const MobiusTable& mob) {
  MertensTable t;
  t.limit = mob.limit;
  t.m.assign(mob.limit + 1, 0);
  int64_t acc = 0;
  for (uint64_t n = 1; n <= mob.limit; ++n) {
    acc += mob.mu[n];
    t.m[n] = acc;
  }
  return t;
}

TotientTable build_totient(uint64_t limit, uint64_t capacity) {
  if (limit == 0) throw CapacityError("build_totient: limit must be positive");
  const uint64_t cap = std::min<uint64_t>(capacity, uint64_t(1) << 32);
  if (limit > cap)
    throw CapacityError("build_totient: limit " + std::to_string(limit) +
                        " exceeds capacity " + std::to_string(cap));
  TotientTable t;
  t.limit = limit;
  if (limit <= kLinearSieveMax) {
    detail::totient_linear(limit, t.phi);
  } else {
    detail::totient_segmented(limit, t.phi);
  }
  t.phi_sum.assign(limit + 1, 0);
  uint64_t acc = 0;
  for (uint64_t n = 1; n <= limit; ++n) {
    acc += t.phi[n];
    t.phi_sum[n] = acc;
  }
  return t;
}

int64_t check_sum_identity(const MertensTable& mert, uint64_t n) {
  if (n == 0 || n > mert.limit)
    throw DomainError("check_sum_identity: n out of range");
  __int128 sum = 0;
  uint64_t k = 1;
  while (k <= n) {
    const uint64_t q = n / k;
    const uint64_t k2 = n / q;
    sum += static_cast<__int128>(k2 - k + 1) * mert.m[q];
    k = k2 + 1;
  }
  return static_cast<int64_t>(sum);
}

int64_t sum_identity_direct(const MertensTable& mert, uint64_t n) {
  if (n == 0 || n > mert.limit)
    throw DomainError("sum_identity_direct: n out of range");
  __int128 sum = 0;
  for (uint64_t k = 1; k <= n; ++k) sum += mert.m[n / k];
  return static_cast<int64_t>(sum);
}

}  // namespace mertens
