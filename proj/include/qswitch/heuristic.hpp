// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "qswitch/evaluate.hpp"
#include "qswitch/instance.hpp"

namespace qswitch {

/// Switching point i can move down by one without touching k_{i-1}
/// (or, for i = 0, without going below zero).
inline bool type1_eligible(const Policy& pol, int i) {
  return i == 0 ? pol[0] > 0 : pol[i] - pol[i - 1] > 1;
}

/// Switching point i can move up by one without touching k_{i+1}.
inline bool type2_eligible(const Policy& pol, int i) { return pol[i + 1] - pol[i] > 1; }

/// An improvement must beat the best W_q by this much (relative below 1).
inline constexpr double kImprovementMargin = 1e-12;

/// Componentwise a <= b. Such a policy never has the larger W_q, so it wins
/// ties that double precision cannot resolve.
inline bool dominated_by(const Policy& a, const Policy& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

namespace detail {

struct SwitchingPointsHash {
  std::size_t operator()(const std::vector<int>& k) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the values
    for (int v : k) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

enum class HeuristicStatus { infeasible, solved };

struct HeuristicStep {
  enum class Action { start, decrement, increment };
  Policy policy;
  double back_room = 0.0;
  double wait = 0.0;
  Action action = Action::start;
  int index = -1;  // switching point moved, -1 for the start policy
};

inline const char* to_string(HeuristicStep::Action a) {
  switch (a) {
    case HeuristicStep::Action::start: return "start";
    case HeuristicStep::Action::decrement: return "decrement";
    case HeuristicStep::Action::increment: return "increment";
  }
  return "?";
}

struct HeuristicResult {
  HeuristicStatus status = HeuristicStatus::infeasible;
  Policy policy;      // best feasible policy seen
  double wait = 0.0;  // its W_q
  int steps = 0;      // policy evaluations
  std::vector<HeuristicStep> trace;
};

/// Local search for problem P1 (least W_q subject to B >= B_l).
///
/// Starts from the latest-switching policy and walks down by decrementing the
/// lowest-index decrementable switching point below the barrier J; when a move
/// breaks B >= B_l the barrier drops to that index and the walk climbs back by
/// incrementing the lowest-index incrementable point below J until feasible.
///
/// Read literally, the two phases can undo each other forever (for example
/// once the earliest-switching policy is reached and feasible). A move whose
/// target was already visited is therefore treated as not eligible, so every
/// evaluated policy is distinct and the walk is finite.
inline HeuristicResult run_p1(const Instance& inst, double eps_b = kDefaultEpsB) {
  validate_instance(inst);
  const int n = inst.workers;

  HeuristicResult res;
  Policy k = khathat(inst);
  std::unordered_set<std::vector<int>, detail::SwitchingPointsHash> visited;
  Metrics m;

  auto visit = [&](HeuristicStep::Action action, int index) {
    visited.insert(k.k);
    m = evaluate_closed_form(inst, k, /*distribution=*/false);
    ++res.steps;
    res.trace.push_back({k, m.back_room, m.wait, action, index});
    return is_feasible(m, inst, eps_b);
  };
  auto unvisited_after = [&](int i, int delta) {
    k[i] += delta;
    const bool fresh = !visited.contains(k.k);
    k[i] -= delta;
    return fresh;
  };

  if (!visit(HeuristicStep::Action::start, -1)) {
    res.status = HeuristicStatus::infeasible;
    res.policy = k;
    res.wait = m.wait;
    return res;
  }
  res.status = HeuristicStatus::solved;
  res.policy = k;
  res.wait = m.wait;
  int barrier = n;

  enum class Step { descend, record, climb, stop };
  Step step = Step::descend;
  while (step != Step::stop) {
    switch (step) {
      case Step::descend: {
        int j = 0;
        while (j < barrier && !(type1_eligible(k, j) && unvisited_after(j, -1))) ++j;
        if (j == barrier) {
          step = Step::climb;
          break;
        }
        --k[j];
        if (visit(HeuristicStep::Action::decrement, j)) {
          step = Step::record;
        } else {
          barrier = j;
          step = Step::climb;
        }
        break;
      }
      case Step::record: {
        const double margin = kImprovementMargin * std::min(1.0, res.wait);
        if (m.wait < res.wait - margin ||
            (m.wait <= res.wait + margin && dominated_by(k, res.policy))) {
          res.policy = k;
          res.wait = m.wait;
        }
        step = Step::descend;
        break;
      }
      case Step::climb: {
        int j = 0;
        while (j < barrier && !(type2_eligible(k, j) && unvisited_after(j, +1))) ++j;
        if (j == barrier) {
          step = Step::stop;
          break;
        }
        ++k[j];
        step = visit(HeuristicStep::Action::increment, j) ? Step::record : Step::climb;
        break;
      }
      case Step::stop:
        break;
    }
  }
  return res;
}

}  // namespace qswitch
