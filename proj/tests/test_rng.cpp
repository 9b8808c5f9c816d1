#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "textmark/error.hpp"
#include "textmark/rng.hpp"

using namespace textmark;

TEST(Rng, SplitMixReferenceValues) {
  SplitMix64 sm(0);
  EXPECT_EQ(sm.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(sm.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(sm.next(), 0x06C45D188009454FULL);
}

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r(1);
  for (uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 10ULL, 1000ULL}) {
    std::vector<int> seen(std::min<uint64_t>(bound, 1000), 0);
    for (int i = 0; i < 20000; ++i) {
      auto v = r.below(bound);
      ASSERT_LT(v, bound);
      ++seen[v];
    }
    for (int s : seen) EXPECT_GT(s, 0);
  }
  EXPECT_LT(r.below(~0ULL), ~0ULL);
  EXPECT_THROW(r.below(0), Error);
}

TEST(Rng, UnitInterval) {
  Rng r(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = r.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(9), b(9);
  auto c1 = a.split(0);
  auto c2 = a.split(1);
  auto c1_again = a.split(0);
  EXPECT_EQ(a.next(), b.next());
  auto x = c1.next();
  EXPECT_EQ(x, c1_again.next());
  EXPECT_NE(x, c2.next());
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(11);
  std::set<std::vector<int>> orders;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> v(5);
    std::iota(v.begin(), v.end(), 0);
    r.shuffle(v);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4}));
    orders.insert(v);
  }
  // 120 orders possible; 200 draws should hit most of them
  EXPECT_GT(orders.size(), 80u);
}
