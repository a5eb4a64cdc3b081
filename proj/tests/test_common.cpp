#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "dsrex/common.hpp"

using namespace dsrex;

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Fnv, ChainingEqualsConcatenation) {
  EXPECT_EQ(fnv1a64("bar", fnv1a64("foo")), fnv1a64("foobar"));
}

TEST(Crc32, CheckValue) {
  std::string s = "123456789";
  std::vector<unsigned char> bytes(s.begin(), s.end());
  EXPECT_EQ(crc32(bytes), 0xCBF43926u);
  EXPECT_EQ(crc32({}), 0u);
}

TEST(Strings, SplitKeepsEmptyFields) {
  EXPECT_EQ(split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split("", ','), (std::vector<std::string>{""}));
}

TEST(Strings, TrimAndLower) {
  EXPECT_EQ(trim("  x y \n"), "x y");
  EXPECT_EQ(to_lower("EGFR-T790M"), "egfr-t790m");
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowStaysInRange) {
  Rng r(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[r.below(7)];
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Rng, SampleIndicesDistinct) {
  Rng r(3);
  auto idx = r.sample_indices(50, 20);
  ASSERT_EQ(idx.size(), 20u);
  std::set<std::size_t> s(idx.begin(), idx.end());
  EXPECT_EQ(s.size(), 20u);
  for (auto i : idx) EXPECT_LT(i, 50u);
  EXPECT_EQ(r.sample_indices(5, 10).size(), 5u);
}

TEST(Diagnostics, MergeAddsCounters) {
  Diagnostics a, b;
  a.count("x");
  b.count("x", 2);
  b.warn("w");
  a.merge(b);
  EXPECT_EQ(a.get("x"), 3u);
  EXPECT_EQ(a.get("missing"), 0u);
  EXPECT_EQ(a.warnings.size(), 1u);
}

TEST(Errors, ParseErrorCarriesLine) {
  ParseError e("bad", 7);
  EXPECT_EQ(e.line(), 7u);
  EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  const DataError &base = e;
  EXPECT_NE(std::string(base.what()).find("bad"), std::string::npos);
}
