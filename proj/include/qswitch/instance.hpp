// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qswitch {

/// Parameters of one front-room/back-room switching problem.
///
/// `capacity` is the maximum number of customers in the front room (S),
/// `workers` the number of cross-trained workers (N). Rates are per unit of
/// time; `min_back_room` is the required expected back-room staffing B_l.
struct Instance {
  int capacity = 0;
  int workers = 0;
  double arrival_rate = 0.0;
  double service_rate = 0.0;
  double min_back_room = 0.0;

  bool operator==(const Instance&) const = default;
};

/// Switching vector k_0 < k_1 < ... < k_N = S. With j customers present,
/// i workers serve in the front room whenever k_{i-1} < j <= k_i.
struct Policy {
  std::vector<int> k;

  Policy() = default;
  explicit Policy(std::vector<int> values) : k(std::move(values)) {}

  int operator[](std::size_t i) const { return k[i]; }
  int& operator[](std::size_t i) { return k[i]; }
  std::size_t size() const { return k.size(); }
  /// Number of workers N the policy switches (k has N+1 entries).
  int workers() const { return static_cast<int>(k.size()) - 1; }

  auto operator<=>(const Policy&) const = default;
};

inline std::string to_string(const Policy& pol) {
  std::string out = "(";
  for (std::size_t i = 0; i < pol.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(pol[i]);
  }
  return out + ")";
}

inline std::string to_string(const Instance& inst) {
  std::ostringstream os;
  os << "S=" << inst.capacity << " N=" << inst.workers
     << " lambda=" << inst.arrival_rate << " mu=" << inst.service_rate
     << " Bl=" << inst.min_back_room;
  return os.str();
}

/// Returns `inst` unchanged if it describes a solvable parameter set; throws
/// std::invalid_argument naming the first violated condition otherwise.
inline const Instance& validate_instance(const Instance& inst) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("invalid instance (" + to_string(inst) + "): " + why);
  };
  if (inst.capacity < 1) fail("capacity S must be >= 1");
  if (inst.workers < 1) fail("worker count N must be >= 1");
  if (inst.workers > inst.capacity) fail("N > S leaves switching-point domains empty");
  if (!(inst.arrival_rate > 0.0)) fail("arrival rate lambda must be > 0");
  if (!(inst.service_rate > 0.0)) fail("service rate mu must be > 0");
  if (!(inst.min_back_room >= 0.0) || inst.min_back_room > inst.workers)
    fail("back-room requirement Bl must lie in [0, N]");
  return inst;
}

/// Smallest admissible value of switching point i.
constexpr int domain_min(int i) { return i; }
/// Largest admissible value of switching point i (i < N).
inline int domain_max(const Instance& inst, int i) {
  return inst.capacity - inst.workers + i;
}

/// Throws std::invalid_argument unless `pol` is a valid switching vector for
/// `inst`.
inline void validate_policy(const Instance& inst, const Policy& pol) {
  const int n = inst.workers;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("invalid policy " + to_string(pol) + ": " + why);
  };
  if (pol.workers() != n) fail("expected " + std::to_string(n + 1) + " switching points");
  if (pol[n] != inst.capacity) fail("last switching point must equal S");
  for (int i = 0; i < n; ++i) {
    if (pol[i] < domain_min(i) || pol[i] > domain_max(inst, i))
      fail("k_" + std::to_string(i) + " outside [" + std::to_string(domain_min(i)) + ", " +
           std::to_string(domain_max(inst, i)) + "]");
    if (pol[i] >= pol[i + 1]) fail("switching points must strictly increase");
  }
}

inline bool is_valid_policy(const Instance& inst, const Policy& pol) {
  try {
    validate_policy(inst, pol);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

/// (0, 1, ..., N-1, S): every worker joins as early as possible. Minimises
/// W_q and B over all policies.
inline Policy khat(const Instance& inst) {
  std::vector<int> k(inst.workers + 1);
  for (int i = 0; i < inst.workers; ++i) k[i] = i;
  k[inst.workers] = inst.capacity;
  return Policy(std::move(k));
}

/// (S-N, ..., S-1, S): workers join as late as possible. Maximises W_q and B;
/// if it is infeasible, so is every policy.
inline Policy khathat(const Instance& inst) {
  std::vector<int> k(inst.workers + 1);
  for (int i = 0; i <= inst.workers; ++i) k[i] = inst.capacity - inst.workers + i;
  return Policy(std::move(k));
}

}  // namespace qswitch
