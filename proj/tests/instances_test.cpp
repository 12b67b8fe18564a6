// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#include "qswitch/instances.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qswitch/policy_space.hpp"
#include "test_support.hpp"

namespace qswitch {
namespace {

using testing::example;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qswitch_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Rng, StreamIsPinned) {
  // std::mt19937_64 with the default seed: the standard requires the 10000th
  // output to be 9981545732273789042.
  Rng def(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = def.next();
  EXPECT_EQ(x, 9981545732273789042ull);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(2, 38), b.uniform(2, 38));
}

TEST(Rng, BoundedDrawsCoverRangeUniformly) {
  Rng rng(1);
  std::vector<int> hist(4);
  for (int i = 0; i < 40000; ++i) ++hist[rng.uniform(1, 4) - 1];
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
  EXPECT_EQ(rng.uniform(7, 7), 7);
  EXPECT_THROW(rng.uniform(3, 2), std::invalid_argument);
}

TEST(Filter, WitnessIsExact) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 400; ++t) {
    const Instance inst = testing::random_instance(rng, 12);
    if (!is_feasible(evaluate_direct(inst, khathat(inst)), inst)) continue;
    bool other = false;
    enumerate(inst, [&](const Policy& k) {
      if (k != khathat(inst) && is_feasible(evaluate_direct(inst, k), inst)) other = true;
    });
    EXPECT_EQ(latest_switching_improvable(inst), other) << to_string(inst);
  }
}

TEST(Filter, Example) {
  EXPECT_TRUE(passes_filter(example()));
  Instance easy = example();
  easy.min_back_room = 0.05;  // khat feasible
  EXPECT_FALSE(passes_filter(easy));
  Instance hard = example();
  hard.min_back_room = 0.7;  // khathat infeasible
  EXPECT_FALSE(passes_filter(hard));
}

TEST(Generate, FilterPostconditions) {
  GenSpec spec;
  spec.s_values = {10};
  spec.per_s_count = 30;
  spec.seed = 42;
  const GenerateResult res = generate(spec);
  ASSERT_TRUE(res.complete());
  ASSERT_EQ(res.instances.size(), 30u);
  for (const auto& inst : res.instances) {
    EXPECT_NO_THROW(validate_instance(inst));
    EXPECT_EQ(inst.capacity, 10);
    EXPECT_GE(inst.workers, 2);
    EXPECT_LE(inst.workers, 10);
    EXPECT_GE(inst.min_back_room, 1.0);
    EXPECT_LE(inst.min_back_room, inst.workers);
    EXPECT_EQ(inst.arrival_rate, std::floor(inst.arrival_rate));
    // Independent re-check with the per-state evaluator.
    EXPECT_TRUE(is_feasible(evaluate_direct(inst, khathat(inst)), inst));
    EXPECT_FALSE(is_feasible(evaluate_direct(inst, khat(inst)), inst));
    const auto opt = brute_force_optimum(inst);
    ASSERT_TRUE(opt.policy);
    EXPECT_NE(*opt.policy, khathat(inst));
  }
}

TEST(Generate, FullSuiteSize) {
  GenSpec spec;
  for (int s = 10; s <= 100; s += 10) spec.s_values.push_back(s);
  spec.per_s_count = 30;
  spec.seed = 2007;
  const GenerateResult res = generate(spec);
  EXPECT_TRUE(res.complete());
  EXPECT_EQ(res.instances.size(), 300u);
}

TEST(Generate, SameSeedSameFile) {
  GenSpec spec;
  spec.s_values = {10, 40};
  spec.per_s_count = 5;
  spec.seed = 99;
  const std::string a = temp_path("gen_a.txt"), b = temp_path("gen_b.txt");
  write_instances(generate(spec).instances, a, "seed 99");
  write_instances(generate(spec).instances, b, "seed 99");
  EXPECT_EQ(slurp(a), slurp(b));
  spec.seed = 100;
  write_instances(generate(spec).instances, b, "seed 99");
  EXPECT_NE(slurp(a), slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST(Generate, ShortfallIsReported) {
  GenSpec spec;
  spec.s_values = {2};  // N = 2 = S leaves a single policy: never passes
  spec.per_s_count = 1;
  spec.max_attempts = 200;
  const GenerateResult res = generate(spec);
  EXPECT_TRUE(res.instances.empty());
  ASSERT_EQ(res.diagnostics.size(), 1u);
  EXPECT_NE(res.diagnostics[0].find("S=2"), std::string::npos);
}

TEST(Generate, RejectsBadSpec) {
  GenSpec spec;
  spec.s_values = {101};
  EXPECT_THROW(generate(spec), std::invalid_argument);
  spec.s_values = {10};
  spec.per_s_count = 0;
  EXPECT_THROW(generate(spec), std::invalid_argument);
}

TEST(InstanceFile, Formatting) {
  EXPECT_EQ(format_instance_line(example()), "6 3 15 3 0.32");
  EXPECT_EQ(format_real(1e-7), "0.0000001");
  EXPECT_EQ(format_real(1e22), "10000000000000000000000");
}

TEST(InstanceFile, RoundTrip) {
  std::mt19937_64 rng(6);
  std::vector<Instance> list;
  for (int i = 0; i < 200; ++i) list.push_back(testing::random_instance(rng, 100));
  const std::string path = temp_path("roundtrip.txt");
  write_instances(list, path, "header");
  EXPECT_EQ(read_instances(path), list);
  std::remove(path.c_str());
}

TEST(InstanceFile, CommentsAndBlankLines) {
  const auto list = parse_instances("# c\n\n6 3 15 3 0.32\n# d\n10 2 5 1 1\n\n");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0], example());
  EXPECT_EQ(list[1].capacity, 10);
}

TEST(InstanceFile, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_instances(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("6 3 15 3 0.32\n# x\n6 3 15 3\n"), 3);
  EXPECT_EQ(line_of("6 3 15 x 0.32\n"), 1);
  EXPECT_EQ(line_of("6  3 15 3 0.32\n"), 1);   // double space
  EXPECT_EQ(line_of("\n6 9 15 3 0.32\n"), 2);  // N > S
  EXPECT_EQ(line_of("6 3 15 3 0.32\n6 3 15 3 0.32"), 2);  // no final newline
  EXPECT_EQ(line_of("6 3 15 3 0.32\n"), -1);
  EXPECT_THROW(read_instances(temp_path("does_not_exist.txt")), std::runtime_error);
}

}  // namespace
}  // namespace qswitch
