// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qswitch/domain.hpp"
#include "qswitch/solve_context.hpp"

namespace qswitch {

/// Outcome of a single shaving probe on one switching point.
enum class ProbeOutcome {
  unchanged,  // no inference
  shrunk,     // one bound moved by one
  proved,     // the inferred bound crosses the other one: incumbent is optimal
};

enum class ShaveStatus { fixpoint, proved, timeout };

struct ShaveResult {
  ShaveStatus status = ShaveStatus::fixpoint;
  bool changed = false;
};

/// gMin case: fix k_i = hi_i, complete at the minimum corner. If the result
/// satisfies B >= B_l it is offered as incumbent, and any better policy must
/// have k_i < hi_i.
inline ProbeOutcome probe_gmin_bl(DomainStore& ds, int i, SolveContext& ctx) {
  ++ctx.stats().shave_probes;
  const auto pol = gmin(ds, fix_one(ds, i, ds.hi(i)));
  if (!pol) return ProbeOutcome::proved;
  const Metrics m = ctx.evaluate(*pol);
  if (!ctx.feasible(m)) return ProbeOutcome::unchanged;
  ctx.offer(*pol, m.wait, m.back_room);
  if (ds.hi(i) - 1 < ds.lo(i)) return ProbeOutcome::proved;
  return ds.lower_hi(i, ds.hi(i) - 1) ? ProbeOutcome::shrunk : ProbeOutcome::proved;
}

/// gMax case: fix k_i = lo_i, complete at the maximum corner. If even that
/// violates B >= B_l, every feasible policy has k_i > lo_i.
inline ProbeOutcome probe_gmax_bl(DomainStore& ds, int i, SolveContext& ctx) {
  ++ctx.stats().shave_probes;
  const auto pol = gmax(ds, fix_one(ds, i, ds.lo(i)));
  if (!pol) return ProbeOutcome::proved;
  const Metrics m = ctx.evaluate(*pol);
  if (ctx.feasible(m)) {
    ctx.offer(*pol, m.wait, m.back_room);
    return ProbeOutcome::unchanged;
  }
  if (ds.lo(i) + 1 > ds.hi(i)) return ProbeOutcome::proved;
  return ds.raise_lo(i, ds.lo(i) + 1) ? ProbeOutcome::shrunk : ProbeOutcome::proved;
}

/// Objective probe with the back-room constraint dropped: fix k_i = hi_i and
/// complete at the minimum corner. If its W_q exceeds the incumbent's (beyond
/// the margin), so does every policy with k_i = hi_i.
inline ProbeOutcome probe_gmin_wq(DomainStore& ds, int i, SolveContext& ctx) {
  if (!ctx.best().has_value()) return ProbeOutcome::unchanged;
  ++ctx.stats().shave_probes;
  const auto pol = gmin(ds, fix_one(ds, i, ds.hi(i)));
  if (!pol) return ProbeOutcome::proved;
  const Metrics m = ctx.evaluate(*pol);
  if (!(m.wait > ctx.best().wait + ctx.wait_margin())) return ProbeOutcome::unchanged;
  if (ds.hi(i) - 1 < ds.lo(i)) return ProbeOutcome::proved;
  return ds.lower_hi(i, ds.hi(i) - 1) ? ProbeOutcome::shrunk : ProbeOutcome::proved;
}

/// B_l-based shaving to a fixpoint. For each switching point in turn the gMin
/// case is repeated while it shrinks, then the gMax case likewise; passes
/// repeat until one changes nothing.
inline ShaveResult bl_shave(DomainStore& ds, SolveContext& ctx) {
  ShaveResult res;
  if (ds.failed()) return {ShaveStatus::proved, false};
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < ds.size(); ++i) {
      for (;;) {
        if (ctx.timed_out()) return {ShaveStatus::timeout, res.changed};
        const auto out = probe_gmin_bl(ds, i, ctx);
        if (out == ProbeOutcome::proved) return {ShaveStatus::proved, res.changed};
        if (out == ProbeOutcome::unchanged) break;
        changed = res.changed = true;
      }
      for (;;) {
        if (ctx.timed_out()) return {ShaveStatus::timeout, res.changed};
        const auto out = probe_gmax_bl(ds, i, ctx);
        if (out == ProbeOutcome::proved) return {ShaveStatus::proved, res.changed};
        if (out == ProbeOutcome::unchanged) break;
        changed = res.changed = true;
      }
    }
  }
  return res;
}

/// W_q-based shaving to a fixpoint (upper bounds only).
inline ShaveResult wq_shave(DomainStore& ds, SolveContext& ctx) {
  ShaveResult res;
  if (ds.failed()) return {ShaveStatus::proved, false};
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < ds.size(); ++i) {
      for (;;) {
        if (ctx.timed_out()) return {ShaveStatus::timeout, res.changed};
        const auto out = probe_gmin_wq(ds, i, ctx);
        if (out == ProbeOutcome::proved) return {ShaveStatus::proved, res.changed};
        if (out == ProbeOutcome::unchanged) break;
        changed = res.changed = true;
      }
    }
  }
  return res;
}

/// Alternates bl_shave and wq_shave until a wq_shave round infers nothing
/// new (at which point the box is a fixpoint of both).
inline ShaveResult alternating_shave(DomainStore& ds, SolveContext& ctx) {
  ShaveResult res;
  for (;;) {
    const auto bl = bl_shave(ds, ctx);
    res.changed |= bl.changed;
    if (bl.status != ShaveStatus::fixpoint) return {bl.status, res.changed};
    const auto wq = wq_shave(ds, ctx);
    res.changed |= wq.changed;
    if (wq.status != ShaveStatus::fixpoint) return {wq.status, res.changed};
    if (!wq.changed) return res;
  }
}

}  // namespace qswitch
