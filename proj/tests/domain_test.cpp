// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#include "qswitch/domain.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qswitch/policy_space.hpp"
#include "test_support.hpp"

namespace qswitch {
namespace {

using testing::example;
using testing::pol;

TEST(DomainStore, InitialDomains) {
  const DomainStore ds(example());
  EXPECT_EQ(ds.lower(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(ds.upper(), (std::vector<int>{3, 4, 5}));
  EXPECT_FALSE(ds.failed());
  EXPECT_EQ(ds.to_string(), "[0..3] [1..4] [2..5] [6]");
  EXPECT_EQ(ds.volume(), 64.0);
}

TEST(DomainStore, OrderingPropagation) {
  DomainStore ds(example());
  ASSERT_TRUE(ds.raise_lo(0, 2));
  EXPECT_EQ(ds.lower(), (std::vector<int>{2, 3, 4}));
  ASSERT_TRUE(ds.lower_hi(2, 4));
  EXPECT_EQ(ds.upper(), (std::vector<int>{2, 3, 4}));
  EXPECT_TRUE(ds.contains(pol({2, 3, 4, 6})));
  EXPECT_FALSE(ds.contains(pol({2, 3, 5, 6})));
}

TEST(DomainStore, NoOpShrinks) {
  DomainStore ds(example());
  const DomainStore before = ds;
  EXPECT_TRUE(ds.raise_lo(1, 0));
  EXPECT_TRUE(ds.lower_hi(1, 9));
  EXPECT_EQ(ds, before);
}

TEST(DomainStore, FailureIsSticky) {
  DomainStore ds(example());
  EXPECT_FALSE(ds.lower_hi(1, 0));
  EXPECT_TRUE(ds.failed());
  EXPECT_FALSE(ds.raise_lo(0, 0));
}

TEST(DomainStore, ExplicitBoundsArePropagated) {
  const DomainStore ds(6, {0, 0, 0}, {5, 5, 5});
  EXPECT_EQ(ds.lower(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(ds.upper(), (std::vector<int>{3, 4, 5}));
}

TEST(Completion, GminExamples) {
  const DomainStore ds(example());
  EXPECT_EQ(gmin(ds, fix_one(ds, 0, 3)), pol({3, 4, 5, 6}));
  EXPECT_EQ(gmin(ds, fix_one(ds, 2, 2)), pol({0, 1, 2, 6}));
  EXPECT_EQ(gmin(ds, PartialAssignment(3)), khat(example()));
  EXPECT_EQ(gmin(ds, PartialAssignment{}), khat(example()));
}

TEST(Completion, GmaxExamples) {
  const DomainStore ds(example());
  EXPECT_EQ(gmax(ds, fix_one(ds, 1, 1)), pol({0, 1, 5, 6}));
  EXPECT_EQ(gmax(ds, fix_one(ds, 0, 0)), pol({0, 4, 5, 6}));
  EXPECT_EQ(gmax(ds, PartialAssignment(3)), khathat(example()));
}

TEST(Completion, FailsOnEmptySubtree) {
  DomainStore ds(example());
  ds.lower_hi(1, 2);  // k_1 in [1..2] forces k_0 in [0..1]
  PartialAssignment fixed(3);
  fixed[0] = 1;
  fixed[1] = 1;
  EXPECT_FALSE(gmin(ds, fixed));
  EXPECT_FALSE(gmax(ds, fixed));
  EXPECT_FALSE(gmin(ds, fix_one(ds, 2, 9)));
}

// Corners bracket every policy in the subtree componentwise.
TEST(Completion, CornersBracketSubtree) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const Instance inst = testing::random_instance(rng, 12);
    const DomainStore ds(inst);
    const int i = std::uniform_int_distribution<int>(0, inst.workers - 1)(rng);
    const int v = std::uniform_int_distribution<int>(ds.lo(i), ds.hi(i))(rng);
    const auto lo = gmin(ds, fix_one(ds, i, v));
    const auto hi = gmax(ds, fix_one(ds, i, v));
    ASSERT_TRUE(lo && hi);
    enumerate(inst, [&](const Policy& k) {
      if (k[i] != v) return;
      for (int j = 0; j <= inst.workers; ++j) {
        EXPECT_LE((*lo)[j], k[j]);
        EXPECT_GE((*hi)[j], k[j]);
      }
    });
  }
}

}  // namespace
}  // namespace qswitch
