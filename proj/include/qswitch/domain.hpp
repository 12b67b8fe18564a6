// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qswitch/instance.hpp"

namespace qswitch {

/// Interval domains [lo_i, hi_i] for the free switching points k_0..k_{N-1};
/// k_N is pinned to S.
///
/// Every shrink is followed by ordering propagation
/// (lo_{i+1} >= lo_i + 1, hi_i <= hi_{i+1} - 1). A store whose interval
/// becomes empty is failed and stays failed.
class DomainStore {
 public:
  DomainStore() = default;

  explicit DomainStore(const Instance& inst) : capacity_(inst.capacity) {
    const int n = inst.workers;
    lo_.resize(n);
    hi_.resize(n);
    for (int i = 0; i < n; ++i) {
      lo_[i] = domain_min(i);
      hi_[i] = domain_max(inst, i);
    }
  }

  DomainStore(int capacity, std::vector<int> lo, std::vector<int> hi)
      : capacity_(capacity), lo_(std::move(lo)), hi_(std::move(hi)) {
    propagate();
  }

  int size() const { return static_cast<int>(lo_.size()); }
  int capacity() const { return capacity_; }
  int lo(int i) const { return lo_[i]; }
  int hi(int i) const { return hi_[i]; }
  const std::vector<int>& lower() const { return lo_; }
  const std::vector<int>& upper() const { return hi_; }
  bool failed() const { return failed_; }

  /// Raises lo_i to v; returns false if the store failed.
  bool raise_lo(int i, int v) {
    if (v > lo_[i]) {
      lo_[i] = v;
      propagate();
    }
    return !failed_;
  }

  /// Lowers hi_i to v; returns false if the store failed.
  bool lower_hi(int i, int v) {
    if (v < hi_[i]) {
      hi_[i] = v;
      propagate();
    }
    return !failed_;
  }

  bool contains(const Policy& pol) const {
    if (pol.workers() != size() || pol[size()] != capacity_) return false;
    for (int i = 0; i < size(); ++i)
      if (pol[i] < lo_[i] || pol[i] > hi_[i]) return false;
    return true;
  }

  /// Number of integer points in the box (ignoring ordering), saturating.
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < size(); ++i) v *= std::max(0, hi_[i] - lo_[i] + 1);
    return v;
  }

  std::string to_string() const {
    std::string out;
    for (int i = 0; i < size(); ++i) {
      if (i) out += " ";
      out += "[" + std::to_string(lo_[i]) + ".." + std::to_string(hi_[i]) + "]";
    }
    return out + " [" + std::to_string(capacity_) + "]";
  }

  bool operator==(const DomainStore&) const = default;

 private:
  void propagate() {
    const int n = size();
    for (int i = 1; i < n; ++i) lo_[i] = std::max(lo_[i], lo_[i - 1] + 1);
    if (n > 0) hi_[n - 1] = std::min(hi_[n - 1], capacity_ - 1);
    for (int i = n - 2; i >= 0; --i) hi_[i] = std::min(hi_[i], hi_[i + 1] - 1);
    for (int i = 0; i < n; ++i)
      if (lo_[i] > hi_[i]) failed_ = true;
  }

  int capacity_ = 0;
  std::vector<int> lo_, hi_;
  bool failed_ = false;
};

/// Values fixed for some of k_0..k_{N-1}; unset entries are free.
using PartialAssignment = std::vector<std::optional<int>>;

inline PartialAssignment fix_one(const DomainStore& ds, int index, int value) {
  PartialAssignment fixed(ds.size());
  fixed[index] = value;
  return fixed;
}

/// Completes `fixed` by giving each free switching point the smallest value
/// its domain and k_{i-1} < k_i allow (left-to-right). nullopt when the
/// subtree has no admissible policy.
inline std::optional<Policy> gmin(const DomainStore& ds, const PartialAssignment& fixed) {
  const int n = ds.size();
  std::vector<int> k(n + 1);
  int prev = -1;
  for (int i = 0; i < n; ++i) {
    const bool is_fixed = i < static_cast<int>(fixed.size()) && fixed[i];
    const int v = is_fixed ? *fixed[i] : std::max(ds.lo(i), prev + 1);
    if (v <= prev || v < ds.lo(i) || v > ds.hi(i)) return std::nullopt;
    k[i] = prev = v;
  }
  if (prev >= ds.capacity()) return std::nullopt;
  k[n] = ds.capacity();
  return Policy(std::move(k));
}

/// Mirror image of gmin: each free switching point takes the largest value
/// allowed by its domain and k_i < k_{i+1} (right-to-left).
inline std::optional<Policy> gmax(const DomainStore& ds, const PartialAssignment& fixed) {
  const int n = ds.size();
  std::vector<int> k(n + 1);
  k[n] = ds.capacity();
  int next = ds.capacity();
  for (int i = n - 1; i >= 0; --i) {
    const bool is_fixed = i < static_cast<int>(fixed.size()) && fixed[i];
    const int v = is_fixed ? *fixed[i] : std::min(ds.hi(i), next - 1);
    if (v >= next || v < ds.lo(i) || v > ds.hi(i)) return std::nullopt;
    k[i] = next = v;
  }
  return Policy(std::move(k));
}

}  // namespace qswitch
