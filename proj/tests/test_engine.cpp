#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mertens/engine.hpp"
#include "mertens/errors.hpp"
#include "mertens/sieve.hpp"

using namespace mertens;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path("engine_test_" + name + ".bin") {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<uint8_t> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::string& path, const std::vector<uint8_t>& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  REQUIRE(static_cast<bool>(out));
}

}  // namespace

TEST_CASE("crc32 matches the standard test vector") {
  const char* s = "123456789";
  CHECK(crc32_ieee(s, 9) == 0xCBF43926u);
  CHECK(crc32_ieee(s, 0) == 0x00000000u);
}

TEST_CASE("default threshold is the cube-root rule, clamped") {
  // smallest t with t^3 >= x^2
  CHECK(default_threshold(1) == 10000);
  CHECK(default_threshold(1000000) == 10000);
  CHECK(default_threshold(100000000) == 215444);     // t^3 >= 1e16
  CHECK(default_threshold(1000000000) == 1000000);   // exact cube
  const uint64_t t = default_threshold(123456789012ull);
  const __int128 x2 = static_cast<__int128>(123456789012ull) * 123456789012ull;
  CHECK(static_cast<__int128>(t) * t * t >= x2);
  CHECK(static_cast<__int128>(t - 1) * (t - 1) * (t - 1) < x2);
}

TEST_CASE("oracle equals the dense sieve everywhere it can be checked") {
  const MertensTable mert = build_mertens(build_mobius(100000));
  const MertensOracle oracle(1000);
  for (uint64_t x = 1; x <= 100000; ++x)
    REQUIRE(oracle.mertens(x) == mert.m[x]);
}

TEST_CASE("threshold choice never changes values") {
  const MertensOracle a(100), b(1000), c(10000);
  std::mt19937_64 rng(20260818);
  std::uniform_int_distribution<uint64_t> dist(100000, 10000000);
  for (int i = 0; i < 12; ++i) {
    const uint64_t x = dist(rng);
    const int64_t va = a.mertens(x);
    REQUIRE(va == b.mertens(x));
    REQUIRE(va == c.mertens(x));
  }
  REQUIRE(a.mertens(10000000) == 1037);
  REQUIRE(b.mertens(10000000) == 1037);
}

TEST_CASE("identity sum over the oracle is 1 at large x") {
  // sum_{k=1..x} M(floor(x/k)) over quotient blocks, all values from the
  // sublinear engine itself
  const MertensOracle oracle(10000);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<uint64_t> dist(100000, 10000000);
  std::vector<uint64_t> xs = {100000, 1234567};
  for (int i = 0; i < 3; ++i) xs.push_back(dist(rng));
  for (const uint64_t x : xs) {
    __int128 sum = 0;
    uint64_t k = 1;
    while (k <= x) {
      const uint64_t q = x / k;
      const uint64_t k2 = x / q;
      sum += static_cast<__int128>(k2 - k + 1) * oracle.mertens(q);
      k = k2 + 1;
    }
    REQUIRE(static_cast<int64_t>(sum) == 1);
  }
}

TEST_CASE("frozen values through the sublinear path") {
  const MertensOracle oracle(10000);
  CHECK(oracle.mertens(100000) == -48);
  CHECK(oracle.mertens(1000000) == 212);
  CHECK(oracle.mertens(10000000) == 1037);
}

TEST_CASE("stats distinguish dense hits, memo hits, and computations") {
  const MertensOracle oracle(1000);
  oracle.reset_stats();
  oracle.mertens(5);
  auto s = oracle.stats();
  CHECK(s.dense_hits == 1);
  CHECK(s.memo_hits == 0);
  CHECK(s.computed == 0);

  oracle.mertens(5000);
  s = oracle.stats();
  CHECK(s.computed >= 1);
  const uint64_t computed_before = s.computed;
  oracle.mertens(5000);
  s = oracle.stats();
  CHECK(s.computed == computed_before);
  CHECK(s.memo_hits >= 1);
}

TEST_CASE("set_threshold validates and trims the memo") {
  MertensOracle oracle(100);
  oracle.mertens(50000);
  const size_t before = oracle.memo_size();
  CHECK(before > 0);
  oracle.set_threshold(10000);
  CHECK(oracle.memo_size() < before);
  for (const auto& [x, v] : oracle.memo_snapshot()) CHECK(x > 10000);
  const MertensTable mert = build_mertens(build_mobius(50000));
  CHECK(oracle.mertens(50000) == mert.m[50000]);
  REQUIRE_THROWS_AS(oracle.set_threshold(0), CapacityError);
  REQUIRE_THROWS_AS(MertensOracle(100, 50), CapacityError);
  REQUIRE_THROWS_AS(oracle.mertens(0), DomainError);
}

TEST_CASE("cache round-trip preserves threshold and memo") {
  TempFile file("roundtrip");
  {
    MertensOracle oracle(2000);
    oracle.mertens(777777);
    oracle.save_cache(file.path);
  }
  const MertensOracle loaded = MertensOracle::load_cache(file.path);
  CHECK(loaded.threshold() == 2000);
  CHECK(loaded.memo_size() > 0);
  const auto stats_before = loaded.stats();
  CHECK(loaded.mertens(777777) == 28);
  // served from the restored memo, not recomputed
  CHECK(loaded.stats().computed == stats_before.computed);
}

TEST_CASE("empty cache round-trips") {
  TempFile file("empty");
  {
    const MertensOracle oracle(1500);
    oracle.save_cache(file.path);
  }
  const MertensOracle loaded = MertensOracle::load_cache(file.path);
  CHECK(loaded.threshold() == 1500);
  CHECK(loaded.memo_size() == 0);
}

TEST_CASE("corrupted caches are rejected") {
  TempFile file("corrupt");
  {
    MertensOracle oracle(1000);
    oracle.mertens(50000);
    oracle.mertens(60000);
    oracle.save_cache(file.path);
  }
  const std::vector<uint8_t> good = read_all(file.path);

  SUBCASE("flipped payload byte breaks the checksum") {
    std::vector<uint8_t> bad = good;
    bad[40] ^= 0x01;
    write_all(file.path, bad);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("bad magic") {
    std::vector<uint8_t> bad = good;
    bad[0] = 'X';
    write_all(file.path, bad);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("truncated file") {
    std::vector<uint8_t> bad(good.begin(), good.begin() + 20);
    write_all(file.path, bad);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("size inconsistent with entry count") {
    std::vector<uint8_t> bad = good;
    bad.insert(bad.end() - 4, 16, 0);
    write_all(file.path, bad);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("wrong value for a covered entry is caught by the sieve") {
    // rebuild a cache whose memo entry lies inside the dense range: forge
    // an entry x=500 with a wrong value and a fixed-up checksum
    std::vector<uint8_t> forged(good.begin(), good.begin() + 24);
    forged[16] = 1;  // count = 1
    for (int i = 17; i < 24; ++i) forged[i] = 0;
    const uint64_t x = 500;
    const uint64_t v = static_cast<uint64_t>(int64_t{9999});
    for (int i = 0; i < 8; ++i) forged.push_back(static_cast<uint8_t>(x >> (8 * i)));
    for (int i = 0; i < 8; ++i) forged.push_back(static_cast<uint8_t>(v >> (8 * i)));
    const uint32_t crc = crc32_ieee(forged.data(), forged.size());
    for (int i = 0; i < 4; ++i) forged.push_back(static_cast<uint8_t>(crc >> (8 * i)));
    write_all(file.path, forged);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("non-ascending entries are rejected") {
    // two entries with equal x
    std::vector<uint8_t> forged(good.begin(), good.begin() + 24);
    forged[16] = 2;
    for (int i = 17; i < 24; ++i) forged[i] = 0;
    const MertensOracle probe(1000);
    const uint64_t x = 50000;
    const auto val = static_cast<uint64_t>(probe.mertens(x));
    for (int rep = 0; rep < 2; ++rep) {
      for (int i = 0; i < 8; ++i) forged.push_back(static_cast<uint8_t>(x >> (8 * i)));
      for (int i = 0; i < 8; ++i) forged.push_back(static_cast<uint8_t>(val >> (8 * i)));
    }
    const uint32_t crc = crc32_ieee(forged.data(), forged.size());
    for (int i = 0; i < 4; ++i) forged.push_back(static_cast<uint8_t>(crc >> (8 * i)));
    write_all(file.path, forged);
    REQUIRE_THROWS_AS(MertensOracle::load_cache(file.path), CorruptCacheError);
  }
  SUBCASE("missing file is an io error") {
    REQUIRE_THROWS_AS(MertensOracle::load_cache("no_such_file.bin"), IoError);
  }
}

TEST_CASE("cache entries above the stored threshold survive a reload") {
  TempFile file("levels");
  MertensOracle oracle(1000);
  oracle.mertens(123456);
  oracle.save_cache(file.path);
  const auto snap = oracle.memo_snapshot();
  const MertensOracle loaded = MertensOracle::load_cache(file.path);
  CHECK(loaded.memo_snapshot() == snap);
}
