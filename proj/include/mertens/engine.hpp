#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "mertens/sieve.hpp"

namespace mertens {

// Smallest t with t^3 >= x^2, clamped to [1e4, 1e8].  Queries at or below
// the threshold come straight from the dense table; everything above runs
// the block recursion.
uint64_t default_threshold(uint64_t x_max);

uint32_t crc32_ieee(const void* data, size_t size);

// M(x) for arbitrary x: dense sieve table up to a threshold, and above it
// the identity sum_{k=1..x} M(floor(x/k)) = 1 rearranged to
//
//   M(x) = 1 - sum_{k=2..x} M(floor(x/k)),
//
// with the right side grouped over the O(sqrt(x)) distinct quotient values
// and every recursive result memoized.
//
// mertens() is safe to call from several threads; set_threshold() needs
// exclusive access.
class MertensOracle {
 public:
  explicit MertensOracle(uint64_t threshold, uint64_t capacity = kDefaultCapacity);
  MertensOracle(MertensOracle&& other) noexcept;
  MertensOracle(const MertensOracle&) = delete;
  MertensOracle& operator=(const MertensOracle&) = delete;
  MertensOracle& operator=(MertensOracle&&) = delete;

  int64_t mertens(uint64_t x) const;

  uint64_t threshold() const { return threshold_; }
  uint64_t capacity() const { return capacity_; }
  const MertensTable& dense() const { return dense_; }

  // Rebuilds the dense table for the new threshold.  Memo entries the new
  // table covers are checked against it and dropped; entries above stay.
  void set_threshold(uint64_t t);

  struct Stats {
    uint64_t dense_hits = 0;
    uint64_t memo_hits = 0;
    uint64_t computed = 0;
  };
  Stats stats() const;
  void reset_stats() const;

  size_t memo_size() const;
  std::map<uint64_t, int64_t> memo_snapshot() const;

  // Binary cache: "MRTC0001", threshold, entry count, (x, M(x)) pairs in
  // ascending x, CRC-32 of everything before the checksum.  Little-endian
  // throughout.
  void save_cache(const std::string& path) const;
  static MertensOracle load_cache(const std::string& path,
                                  uint64_t capacity = kDefaultCapacity);

 private:
  int64_t compute(uint64_t x) const;

  uint64_t threshold_ = 0;
  uint64_t capacity_ = 0;
  MertensTable dense_;
  mutable std::unordered_map<uint64_t, int64_t> memo_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::atomic<uint64_t> dense_hits_{0};
  mutable std::atomic<uint64_t> memo_hits_{0};
  mutable std::atomic<uint64_t> computed_{0};
};

}  // namespace mertens
