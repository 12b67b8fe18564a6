// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qswitch/evaluate.hpp"
#include "qswitch/instance.hpp"

namespace qswitch {

struct Incumbent {
  std::optional<Policy> policy;
  double wait = std::numeric_limits<double>::infinity();
  double back_room = 0.0;

  bool has_value() const { return policy.has_value(); }
};

/// Any policy strictly better than the incumbent that produced this cut must
/// place at least one of k_J..k_{N-1} below the recorded value.
struct DominanceCut {
  int suffix_start = 0;
  std::vector<int> values;

  bool operator==(const DominanceCut&) const = default;
};

/// For an incumbent of the form (0, 1, ..., J-1, k_J, ..., k_{N-1}, S) with
/// k_J > J, returns the cut over k_J..k_{N-1}; nullopt for the earliest-switching
/// policy, which no policy beats.
inline std::optional<DominanceCut> record_dominance(const Policy& incumbent) {
  const int n = incumbent.workers();
  int j = 0;
  while (j < n && incumbent[j] == j) ++j;
  if (j == n) return std::nullopt;
  DominanceCut cut{j, {}};
  for (int i = j; i < n; ++i) {
    if (incumbent[i] <= i) return std::nullopt;
    cut.values.push_back(incumbent[i]);
  }
  return cut;
}

/// True if every policy at or above `corner` (componentwise) violates `cut`.
inline bool cut_excludes(const DominanceCut& cut, const Policy& corner) {
  for (std::size_t t = 0; t < cut.values.size(); ++t)
    if (corner[cut.suffix_start + t] < cut.values[t]) return false;
  return true;
}

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t shave_probes = 0;
  std::uint64_t evaluations = 0;

  bool operator==(const SolveStats&) const = default;
};

struct TracePoint {
  double elapsed = 0.0;
  double wait = 0.0;
};

/// Mutable state shared by shaving and search during one solve.
class SolveContext {
 public:
  using Clock = std::chrono::steady_clock;

  SolveContext(const Instance& inst, double time_limit, double eps_wq = 1e-9,
               double eps_b = kDefaultEpsB, Evaluator evaluator = Evaluator::closed_form)
      : inst_(inst),
        eps_wq_(eps_wq),
        eps_b_(eps_b),
        evaluator_(evaluator),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(std::min(time_limit, 1e8)))) {}

  const Instance& instance() const { return inst_; }
  double eps_wq() const { return eps_wq_; }
  double eps_b() const { return eps_b_; }

  Metrics evaluate(const Policy& pol) {
    ++stats_.evaluations;
    return qswitch::evaluate(inst_, pol, evaluator_, /*distribution=*/false);
  }
  bool feasible(const Metrics& m) const { return is_feasible(m, inst_, eps_b_); }

  /// Margin by which W_q must differ from the incumbent's to count: eps_wq,
  /// scaled down proportionally once the incumbent's W_q is below 1 so that
  /// very short waits are still compared meaningfully.
  double wait_margin() const { return eps_wq_ * std::min(1.0, std::abs(best_.wait)); }

  /// Installs `pol` as incumbent if it beats the current one by more than
  /// the margin. The caller guarantees feasibility.
  bool offer(const Policy& pol, double wait, double back_room) {
    if (best_.has_value() && !(wait < best_.wait - wait_margin())) return false;
    best_.policy = pol;
    best_.wait = wait;
    best_.back_room = back_room;
    trace_.push_back({elapsed(), wait});
    if (dominance_)
      if (auto cut = record_dominance(pol)) cuts_.push_back(std::move(*cut));
    return true;
  }

  /// W_q at `corner` cannot beat the incumbent.
  bool no_improvement(double wait) const {
    return best_.has_value() && wait >= best_.wait - wait_margin();
  }

  bool dominated(const Policy& corner) const {
    for (const auto& cut : cuts_)
      if (cut_excludes(cut, corner)) return true;
    return false;
  }

  void enable_dominance(bool on) { dominance_ = on; }
  bool dominance() const { return dominance_; }

  bool timed_out() const { return Clock::now() >= deadline_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  const Incumbent& best() const { return best_; }
  SolveStats& stats() { return stats_; }
  const SolveStats& stats() const { return stats_; }
  const std::vector<TracePoint>& trace() const { return trace_; }
  const std::vector<DominanceCut>& cuts() const { return cuts_; }

 private:
  Instance inst_;
  double eps_wq_;
  double eps_b_;
  Evaluator evaluator_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  Incumbent best_;
  SolveStats stats_;
  std::vector<TracePoint> trace_;
  std::vector<DominanceCut> cuts_;
  bool dominance_ = false;
};

}  // namespace qswitch
