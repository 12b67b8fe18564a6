// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#include "qswitch/policy_space.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

namespace qswitch {
namespace {

using testing::example;
using testing::pol;

TEST(Binomial, SmallValuesAndSaturation) {
  EXPECT_EQ(binomial(6, 3), 20u);
  EXPECT_EQ(binomial(10, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(100, 50), std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
}

TEST(PolicySpace, CountMatchesEnumeration) {
  EXPECT_EQ(policy_count(example()), 20u);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Instance inst = testing::random_instance(rng, 14);
    std::uint64_t n = 0;
    std::set<Policy> seen;
    Policy prev;
    enumerate(inst, [&](const Policy& k) {
      EXPECT_TRUE(is_valid_policy(inst, k));
      if (n) EXPECT_LT(prev, k);
      prev = k;
      seen.insert(k);
      ++n;
    });
    EXPECT_EQ(n, policy_count(inst));
    EXPECT_EQ(seen.size(), n);
  }
}

TEST(PolicySpace, EnumerationStartsAndEndsAtExtremes) {
  PolicyIterator it(example());
  auto first = it.next();
  Policy last;
  while (auto k = it.next()) last = *k;
  EXPECT_EQ(*first, khat(example()));
  EXPECT_EQ(last, khathat(example()));
  EXPECT_FALSE(it.next());
}

TEST(PolicySpace, SinglePolicyWhenNEqualsS) {
  const Instance inst{3, 3, 2.0, 1.0, 0.0};
  int n = 0;
  enumerate(inst, [&](const Policy& k) {
    EXPECT_EQ(k, pol({0, 1, 2, 3}));
    ++n;
  });
  EXPECT_EQ(n, 1);
}

TEST(BruteForce, ExampleOptimum) {
  const auto res = brute_force_optimum(example());
  ASSERT_TRUE(res.policy);
  EXPECT_EQ(*res.policy, pol({0, 3, 4, 6}));
  EXPECT_NEAR(res.wait, 0.306323, 1e-5);
  EXPECT_EQ(res.evaluated, 20u);
}

TEST(BruteForce, InfeasibleAndTrivialCases) {
  Instance inst = example();
  inst.min_back_room = 0.7;
  EXPECT_FALSE(brute_force_optimum(inst).policy);
  inst.min_back_room = 0.0;
  EXPECT_EQ(*brute_force_optimum(inst).policy, khat(inst));
}

TEST(BruteForce, EvaluatorsAgree) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = testing::random_instance(rng, 16);
    const auto a = brute_force_optimum(inst, false, Evaluator::direct);
    const auto b = brute_force_optimum(inst, false, Evaluator::closed_form);
    ASSERT_EQ(a.policy.has_value(), b.policy.has_value());
    if (a.policy) EXPECT_NEAR(a.wait, b.wait, 1e-12 * a.wait + 1e-300);
  }
}

TEST(BruteForce, RefusesHugeSpaces) {
  const Instance inst{100, 50, 10.0, 1.0, 1.0};
  EXPECT_THROW(brute_force_optimum(inst), std::length_error);
}

}  // namespace
}  // namespace qswitch
