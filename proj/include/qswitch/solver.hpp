// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/domain.hpp"
#include "qswitch/heuristic.hpp"
#include "qswitch/search.hpp"
#include "qswitch/shaving.hpp"
#include "qswitch/solve_context.hpp"

namespace qswitch {

enum class Strategy { none, bl_shave, wq_shave, alt_shave, alt_search_shave };

inline constexpr Strategy kAllStrategies[] = {Strategy::none, Strategy::bl_shave,
                                              Strategy::wq_shave, Strategy::alt_shave,
                                              Strategy::alt_search_shave};

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::none: return "none";
    case Strategy::bl_shave: return "bl-shave";
    case Strategy::wq_shave: return "wq-shave";
    case Strategy::alt_shave: return "alt-shave";
    case Strategy::alt_search_shave: return "alt-search-shave";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

struct SolverConfig {
  Strategy strategy = Strategy::alt_search_shave;
  bool dominance = false;
  bool hybrid = false;
  double time_limit = 600.0;  // seconds
  double eps_wq = 1e-9;
  double eps_b = kDefaultEpsB;
  Evaluator evaluator = Evaluator::closed_form;

  void validate() const {
    if (!(time_limit > 0.0)) throw std::invalid_argument("time limit must be > 0");
    if (!(eps_wq > 0.0) || !(eps_b > 0.0))
      throw std::invalid_argument("tolerances must be > 0");
  }
};

enum class SolveStatus { optimal, feasible, infeasible, timeout_with_incumbent, timeout_none };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout_with_incumbent: return "timeout-with-incumbent";
    case SolveStatus::timeout_none: return "timeout-none";
  }
  return "?";
}

inline std::optional<SolveStatus> parse_solve_status(std::string_view name) {
  for (auto s : {SolveStatus::optimal, SolveStatus::feasible, SolveStatus::infeasible,
                 SolveStatus::timeout_with_incumbent, SolveStatus::timeout_none})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

struct SolveResult {
  SolveStatus status = SolveStatus::timeout_none;
  std::optional<Policy> incumbent;
  std::optional<double> wait;
  bool proof = false;
  std::vector<TracePoint> incumbent_trace;
  SolveStats stats;
  double elapsed = 0.0;
  /// Domains when the solve stopped.
  DomainStore final_domains;
};

namespace detail {

inline SolveResult finish(SolveContext& ctx, const DomainStore& ds, SolveStatus status) {
  SolveResult r;
  r.incumbent = ctx.best().policy;
  if (r.incumbent) r.wait = ctx.best().wait;
  if (status == SolveStatus::timeout_with_incumbent && !r.incumbent)
    status = SolveStatus::timeout_none;
  r.status = status;
  r.proof = status == SolveStatus::optimal || status == SolveStatus::infeasible;
  r.incumbent_trace = ctx.trace();
  r.stats = ctx.stats();
  r.elapsed = ctx.elapsed();
  r.final_domains = ds;
  return r;
}

inline SolveStatus from_search(SearchStatus s) {
  return s == SearchStatus::timeout ? SolveStatus::timeout_with_incumbent : SolveStatus::optimal;
}

}  // namespace detail

/// Exact solve of min W_q s.t. B >= B_l.
///
/// The latest-switching policy is checked first: if it is infeasible, so is
/// the instance. Otherwise it seeds the incumbent (after P1's answer when
/// `hybrid` is set) and the configured strategy runs shaving and/or search.
/// `optimal` means no policy beats the incumbent by more than eps_wq
/// (relative to W_q when W_q < 1).
inline SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
  validate_instance(inst);
  cfg.validate();
  SolveContext ctx(inst, cfg.time_limit, cfg.eps_wq, cfg.eps_b, cfg.evaluator);
  ctx.enable_dominance(cfg.dominance);
  DomainStore ds(inst);

  const Policy latest = khathat(inst);
  const Metrics latest_m = ctx.evaluate(latest);
  if (!ctx.feasible(latest_m)) return detail::finish(ctx, ds, SolveStatus::infeasible);

  if (cfg.hybrid) {
    const HeuristicResult h = run_p1(inst, cfg.eps_b);
    ctx.stats().evaluations += h.steps;
    if (h.status == HeuristicStatus::infeasible)
      return detail::finish(ctx, ds, SolveStatus::infeasible);
    const Metrics hm = ctx.evaluate(h.policy);
    ctx.offer(h.policy, hm.wait, hm.back_room);
  } else {
    ctx.offer(latest, latest_m.wait, latest_m.back_room);
  }

  auto shave_then_search = [&](ShaveResult shaved) {
    if (shaved.status == ShaveStatus::proved) return SolveStatus::optimal;
    if (shaved.status == ShaveStatus::timeout) return SolveStatus::timeout_with_incumbent;
    return detail::from_search(search(ds, ctx));
  };

  SolveStatus status = SolveStatus::timeout_with_incumbent;
  switch (cfg.strategy) {
    case Strategy::none:
      status = detail::from_search(search(ds, ctx));
      break;
    case Strategy::bl_shave:
      status = shave_then_search(bl_shave(ds, ctx));
      break;
    case Strategy::wq_shave:
      status = shave_then_search(wq_shave(ds, ctx));
      break;
    case Strategy::alt_shave:
      status = shave_then_search(alternating_shave(ds, ctx));
      break;
    case Strategy::alt_search_shave:
      // Shave, search until the incumbent improves, shave again with the
      // tighter bound, and restart the search from the shaved root.
      for (;;) {
        const ShaveResult shaved = alternating_shave(ds, ctx);
        if (shaved.status == ShaveStatus::proved) {
          status = SolveStatus::optimal;
          break;
        }
        if (shaved.status == ShaveStatus::timeout) {
          status = SolveStatus::timeout_with_incumbent;
          break;
        }
        const SearchStatus s = search(ds, ctx, /*stop_on_improvement=*/true);
        if (s != SearchStatus::improved) {
          status = detail::from_search(s);
          break;
        }
      }
      break;
  }
  return detail::finish(ctx, ds, status);
}

}  // namespace qswitch
