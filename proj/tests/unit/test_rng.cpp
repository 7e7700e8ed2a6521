#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "rgi/rng.hpp"

namespace rgi {
namespace {

TEST(Splitmix64, MatchesPublishedFirstOutputForZeroState) {
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Mt19937_64, EngineSequenceIsTheStandardOne) {
  // The 10000th output of a default-constructed engine is fixed by the standard.
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ULL);
}

TEST(RandomStream, EqualSpecsGiveEqualStreams) {
  RandomStream a(RngSpec{42});
  RandomStream b(RngSpec{42});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, SubstreamsAreDistinct) {
  const RngSpec root{7};
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(root.substream(i).seed);
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(root.substream("noise").seed, root.substream("roi").seed);
  EXPECT_EQ(root.substream("noise"), root.substream("noise"));
  EXPECT_NE(root.substream(0), RngSpec{8}.substream(0));
}

TEST(RandomStream, BitsComeMostSignificantFirst) {
  RandomStream words(RngSpec{3});
  RandomStream bits(RngSpec{3});
  const std::uint64_t w = words.next_u64();
  for (int k = 63; k >= 0; --k) ASSERT_EQ(bits.next_bit(), ((w >> k) & 1u) != 0);
}

TEST(RandomStream, UnitDrawsStayInHalfOpenInterval) {
  RandomStream s(RngSpec{11});
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(RandomStream, NormalMomentsWithinFiveSigma) {
  RandomStream s(RngSpec{5});
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(n));
  EXPECT_LT(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace rgi
