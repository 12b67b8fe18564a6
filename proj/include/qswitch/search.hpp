// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "qswitch/domain.hpp"
#include "qswitch/solve_context.hpp"

namespace qswitch {

enum class SearchStatus {
  exhausted,  // tree fully explored: incumbent optimal (or none exists)
  improved,   // stopped at the first new incumbent, as requested
  timeout,
};

namespace detail {

class DepthFirstSearch {
 public:
  DepthFirstSearch(const DomainStore& ds, SolveContext& ctx, bool stop_on_improvement)
      : ds_(ds), ctx_(ctx), stop_(stop_on_improvement), fixed_(ds.size()) {}

  SearchStatus run() {
    if (ds_.failed() || ds_.size() == 0) return SearchStatus::exhausted;
    return expand(0);
  }

 private:
  // Assigns k_depth, smallest value first. A node's subtree is bounded by its
  // two corners: the gmin completion has the least W_q and the gmax completion
  // the largest B of any policy below it.
  SearchStatus expand(int depth) {
    const int n = ds_.size();
    const int first = depth == 0 ? ds_.lo(0) : std::max(ds_.lo(depth), *fixed_[depth - 1] + 1);
    SearchStatus status = SearchStatus::exhausted;
    for (int v = first; v <= ds_.hi(depth); ++v) {
      if (ctx_.timed_out()) {
        status = SearchStatus::timeout;
        break;
      }
      ++ctx_.stats().nodes;
      fixed_[depth] = v;

      const auto low = gmin(ds_, fixed_);
      if (!low) break;
      // Corners only grow with v, so a node that cannot improve ends the loop.
      if (ctx_.dominance() && ctx_.dominated(*low)) break;
      const Metrics low_m = ctx_.evaluate(*low);
      if (ctx_.no_improvement(low_m.wait)) break;
      if (ctx_.feasible(low_m)) {
        // The minimum corner is feasible, hence the best policy in this
        // subtree, and it beats the incumbent.
        ctx_.offer(*low, low_m.wait, low_m.back_room);
        if (stop_) status = SearchStatus::improved;
        break;
      }
      if (depth == n - 1) continue;

      const auto high = gmax(ds_, fixed_);
      if (!high) continue;
      const Metrics high_m = ctx_.evaluate(*high);
      if (!ctx_.feasible(high_m)) continue;

      status = expand(depth + 1);
      if (status != SearchStatus::exhausted) break;
    }
    fixed_[depth].reset();
    return status;
  }

  const DomainStore& ds_;
  SolveContext& ctx_;
  bool stop_;
  PartialAssignment fixed_;
};

}  // namespace detail

/// Depth-first branch and bound over k_0..k_{N-1} inside `ds`.
///
/// Prunes a node when its maximum corner violates B >= B_l, when its minimum
/// corner cannot beat the incumbent by more than the W_q margin, or (with
/// dominance enabled) when a recorded cut excludes its whole box.
inline SearchStatus search(const DomainStore& ds, SolveContext& ctx,
                           bool stop_on_improvement = false) {
  return detail::DepthFirstSearch(ds, ctx, stop_on_improvement).run();
}

}  // namespace qswitch
