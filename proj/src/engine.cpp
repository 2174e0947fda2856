#include "mertens/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <vector>

#include "mertens/errors.hpp"

namespace mertens {

namespace {

constexpr uint64_t kThresholdFloor = 10'000;
constexpr uint64_t kThresholdCeiling = 100'000'000;
constexpr char kCacheMagic[8] = {'M', 'R', 'T', 'C', '0', '0', '0', '1'};

void put_u64(std::vector<uint8_t>& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_i64(std::vector<uint8_t>& buf, int64_t v) {
  put_u64(buf, static_cast<uint64_t>(v));
}

void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

uint32_t crc32_ieee(const void* data, size_t size) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  uint32_t crc = 0xFFFFFFFFu;
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < size; ++i) crc = table[(crc ^ p[i]) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

uint64_t default_threshold(uint64_t x_max) {
  if (x_max <= 1) return kThresholdFloor;
  uint64_t t = static_cast<uint64_t>(
      std::llround(std::pow(static_cast<long double>(x_max), 2.0L / 3.0L)));
  const auto cube_reaches = [&](uint64_t c) {
    return static_cast<__int128>(c) * c * c >=
           static_cast<__int128>(x_max) * x_max;
  };
  while (!cube_reaches(t)) ++t;
  while (t > 1 && cube_reaches(t - 1)) --t;
  return std::clamp(t, kThresholdFloor, kThresholdCeiling);
}

MertensOracle::MertensOracle(uint64_t threshold, uint64_t capacity)
    : capacity_(capacity) {
  set_threshold(threshold);
}

MertensOracle::MertensOracle(MertensOracle&& other) noexcept
    : threshold_(other.threshold_),
      capacity_(other.capacity_),
      dense_(std::move(other.dense_)),
      memo_(std::move(other.memo_)),
      dense_hits_(other.dense_hits_.load()),
      memo_hits_(other.memo_hits_.load()),
      computed_(other.computed_.load()) {}

void MertensOracle::set_threshold(uint64_t t) {
  if (t == 0) throw CapacityError("set_threshold: threshold must be positive");
  if (t > capacity_)
    throw CapacityError("set_threshold: threshold " + std::to_string(t) +
                        " exceeds capacity " + std::to_string(capacity_));
  MertensTable fresh = build_mertens(build_mobius(t, capacity_));
  for (auto it = memo_.begin(); it != memo_.end();) {
    if (it->first <= t) {
      if (it->second != fresh.m[it->first])
        throw std::logic_error("set_threshold: memo disagrees with sieve at " +
                               std::to_string(it->first));
      it = memo_.erase(it);
    } else {
      ++it;
    }
  }
  dense_ = std::move(fresh);
  threshold_ = t;
}

int64_t MertensOracle::mertens(uint64_t x) const {
  if (x == 0) throw DomainError("mertens: x must be positive");
  if (x <= threshold_) {
    dense_hits_.fetch_add(1, std::memory_order_relaxed);
    return dense_.m[x];
  }
  {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(x);
    if (it != memo_.end()) {
      memo_hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  const int64_t v = compute(x);
  {
    std::unique_lock lock(memo_mutex_);
    memo_.emplace(x, v);
  }
  computed_.fetch_add(1, std::memory_order_relaxed);
  return v;
}

int64_t MertensOracle::compute(uint64_t x) const {
  __int128 sum = 1;
  uint64_t k = 2;
  while (k <= x) {
    const uint64_t q = x / k;
    const uint64_t k2 = x / q;
    sum -= static_cast<__int128>(k2 - k + 1) * mertens(q);
    k = k2 + 1;
  }
  const auto v = static_cast<int64_t>(sum);
  if (static_cast<__int128>(v) != sum)
    throw std::logic_error("compute: partial sum overflow");
  return v;
}

MertensOracle::Stats MertensOracle::stats() const {
  return {dense_hits_.load(), memo_hits_.load(), computed_.load()};
}

void MertensOracle::reset_stats() const {
  dense_hits_ = 0;
  memo_hits_ = 0;
  computed_ = 0;
}

size_t MertensOracle::memo_size() const {
  std::shared_lock lock(memo_mutex_);
  return memo_.size();
}

std::map<uint64_t, int64_t> MertensOracle::memo_snapshot() const {
  std::shared_lock lock(memo_mutex_);
  return {memo_.begin(), memo_.end()};
}

void MertensOracle::save_cache(const std::string& path) const {
  const auto entries = memo_snapshot();
  std::vector<uint8_t> buf;
  buf.reserve(28 + 16 * entries.size());
  buf.insert(buf.end(), kCacheMagic, kCacheMagic + 8);
  put_u64(buf, threshold_);
  put_u64(buf, entries.size());
  for (const auto& [x, v] : entries) {
    put_u64(buf, x);
    put_i64(buf, v);
  }
  put_u32(buf, crc32_ieee(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_cache: cannot open " + path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("save_cache: write failed for " + path);
}

MertensOracle MertensOracle::load_cache(const std::string& path,
                                        uint64_t capacity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_cache: cannot open " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("load_cache: read failed for " + path);

  if (buf.size() < 28) throw CorruptCacheError("load_cache: truncated header");
  if (std::memcmp(buf.data(), kCacheMagic, 8) != 0)
    throw CorruptCacheError("load_cache: bad magic");
  const uint64_t threshold = get_u64(buf.data() + 8);
  const uint64_t count = get_u64(buf.data() + 16);
  if (count > (buf.size() - 28) / 16 || buf.size() != 28 + 16 * count)
    throw CorruptCacheError("load_cache: size does not match entry count");
  const uint32_t stored = get_u32(buf.data() + buf.size() - 4);
  const uint32_t actual = crc32_ieee(buf.data(), buf.size() - 4);
  if (stored != actual) throw CorruptCacheError("load_cache: checksum mismatch");

  MertensOracle oracle(threshold, capacity);
  uint64_t prev_x = 0;
  for (uint64_t i = 0; i < count; ++i) {
    const uint8_t* p = buf.data() + 24 + 16 * i;
    const uint64_t x = get_u64(p);
    const auto v = static_cast<int64_t>(get_u64(p + 8));
    if (x <= prev_x)
      throw CorruptCacheError("load_cache: entries not strictly ascending");
    prev_x = x;
    if (x <= threshold) {
      if (oracle.dense_.m[x] != v)
        throw CorruptCacheError("load_cache: entry disagrees with sieve at " +
                                std::to_string(x));
    } else {
      oracle.memo_.emplace(x, v);
    }
  }
  return oracle;
}

}  // namespace mertens
