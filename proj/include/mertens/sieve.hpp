#pragma once

#include <cstdint>
#include <vector>

namespace mertens {

// Tables stay within this many entries unless the caller raises the ceiling.
inline constexpr uint64_t kDefaultCapacity = uint64_t(1) << 31;

// Limits up to this size use a linear sieve; larger limits go segmented.
inline constexpr uint64_t kLinearSieveMax = 10'000'000;

// mu[n] for 1 <= n <= limit; mu[0] is unused padding.
struct MobiusTable {
  uint64_t limit = 0;
  std::vector<int8_t> mu;

  int mu_at(uint64_t n) const;
};

// m[n] = mu[1] + ... + mu[n]; m[0] = 0.
struct MertensTable {
  uint64_t limit = 0;
  std::vector<int64_t> m;

  int64_t mertens_at(uint64_t n) const;
};

// phi[n] and phi_sum[n] = phi[1] + ... + phi[n]; index 0 unused.
struct TotientTable {
  uint64_t limit = 0;
  std::vector<uint32_t> phi;
  std::vector<uint64_t> phi_sum;

  uint32_t phi_at(uint64_t n) const;
  uint64_t phi_sum_at(uint64_t n) const;
};

MobiusTable build_mobius(uint64_t limit, uint64_t capacity = kDefaultCapacity);
MertensTable build_mertens(const MobiusTable& mob);
TotientTable build_totient(uint64_t limit, uint64_t capacity = kDefaultCapacity);

// sum_{k=1..n} M(floor(n/k)), evaluated over quotient blocks in O(sqrt(n))
// lookups.  Equals 1 for every n >= 1.
int64_t check_sum_identity(const MertensTable& mert, uint64_t n);

// Same sum with the k-loop written out term by term; the slow cross-check.
int64_t sum_identity_direct(const MertensTable& mert, uint64_t n);

namespace detail {

// Internal builders, exposed so tests can drive both paths at any limit.
void mobius_linear(uint64_t limit, std::vector<int8_t>& mu);
void mobius_segmented(uint64_t limit, std::vector<int8_t>& mu);
void totient_linear(uint64_t limit, std::vector<uint32_t>& phi);
void totient_segmented(uint64_t limit, std::vector<uint32_t>& phi);

}  // namespace detail

}  // namespace mertens
