// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qswitch/evaluate.hpp"
#include "qswitch/instance.hpp"

namespace qswitch {

/// C(n, r), saturating at UINT64_MAX.
inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned>(n - r + i) / static_cast<unsigned>(i);
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

/// Number of admissible policies for `inst`: choices of k_0 < ... < k_{N-1}
/// from {0, ..., S-1}.
inline std::uint64_t policy_count(const Instance& inst) {
  return binomial(inst.capacity, inst.workers);
}

/// Streams every admissible policy of an instance in lexicographic order
/// using O(N) state.
class PolicyIterator {
 public:
  explicit PolicyIterator(const Instance& inst) : inst_(validate_instance(inst)) {
    current_ = khat(inst_);
  }

  /// The policy under the cursor, or nullopt once exhausted.
  std::optional<Policy> next() {
    if (done_) return std::nullopt;
    Policy out = current_;
    advance();
    return out;
  }

 private:
  void advance() {
    const int n = inst_.workers;
    int i = n - 1;
    while (i >= 0 && current_[i] == domain_max(inst_, i)) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++current_[i];
    for (int j = i + 1; j < n; ++j) current_[j] = current_[j - 1] + 1;
  }

  Instance inst_;
  Policy current_;
  bool done_ = false;
};

/// Calls `visit(policy)` for every admissible policy in lexicographic order.
template <typename Visitor>
void enumerate(const Instance& inst, Visitor&& visit) {
  PolicyIterator it(inst);
  while (auto pol = it.next()) visit(*pol);
}

struct BruteForceResult {
  std::optional<Policy> policy;  // empty when the instance is infeasible
  double wait = 0.0;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

/// Exhaustive optimum of min W_q s.t. B >= B_l. Ties on W_q keep the
/// lexicographically smallest policy. Refuses instances with more than
/// kBruteForceLimit policies unless `force` is set.
inline BruteForceResult brute_force_optimum(const Instance& inst, bool force = false,
                                            Evaluator evaluator = Evaluator::direct,
                                            double eps_b = kDefaultEpsB) {
  validate_instance(inst);
  if (!force && policy_count(inst) > kBruteForceLimit)
    throw std::length_error("brute force refused: C(" + std::to_string(inst.capacity) + ", " +
                            std::to_string(inst.workers) + ") policies exceed the limit");
  BruteForceResult res;
  enumerate(inst, [&](const Policy& pol) {
    const Metrics m = evaluate(inst, pol, evaluator);
    ++res.evaluated;
    if (!is_feasible(m, inst, eps_b)) return;
    if (!res.policy || m.wait < res.wait) {
      res.policy = pol;
      res.wait = m.wait;
    }
  });
  return res;
}

}  // namespace qswitch
