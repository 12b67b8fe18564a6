// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace qswitch {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  CompensatedSum acc;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc.value());
}

namespace series {

/// Below this |r - 1| the closed forms lose more than ~1e-12 relative
/// accuracy to cancellation (error grows like eps / (1 - r)^2), so the sums
/// are accumulated term by term. At most S terms, so this stays cheap.
inline constexpr double kSummationWindow = 1e-2;

inline bool in_window(double r) { return std::abs(r - 1.0) < kSummationWindow; }

/// sum_{t=0}^{n-1} r^t
inline double geom(double r, int n) {
  if (n <= 0) return 0.0;
  if (r == 1.0) return n;
  if (in_window(r)) {
    CompensatedSum acc;
    double term = 1.0;
    for (int t = 0; t < n; ++t, term *= r) acc += term;
    return acc.value();
  }
  if (r < 1.0) return -std::expm1(n * std::log(r)) / (1.0 - r);
  return std::expm1(n * std::log(r)) / (r - 1.0);
}

/// sum_{t=1}^{n-1} t r^(t-1)
///   = [1 - n r^(n-1) + (n-1) r^n] / (1 - r)^2
inline double arith(double r, int n) {
  if (n <= 1) return 0.0;
  if (r == 1.0) return 0.5 * n * (n - 1.0);
  if (in_window(r)) {
    CompensatedSum acc;
    double term = 1.0;
    for (int t = 1; t < n; ++t, term *= r) acc += t * term;
    return acc.value();
  }
  // 1 - n r^(n-1) + (n-1) r^n, regrouped as 1 + r^(n-1) ((n-1)(r-1) - 1)
  const double num = 1.0 + std::pow(r, n - 1) * ((n - 1.0) * (r - 1.0) - 1.0);
  return num / ((1.0 - r) * (1.0 - r));
}

/// geom(r, n) given log_r = log(r).
inline double geom_log(double r, double log_r, int n) {
  if (n <= 0 || r == 1.0 || in_window(r)) return geom(r, n);
  return std::expm1(n * log_r) / (r - 1.0);
}

/// log of geom(r, n), without overflow for large r^n.
inline double log_geom(double r, int n) {
  if (n <= 0) return -std::numeric_limits<double>::infinity();
  if (r <= 1.0) return std::log(geom(r, n));
  // r^(n-1) * sum_{s=0}^{n-1} r^(-s)
  return (n - 1) * std::log(r) + std::log(geom(1.0 / r, n));
}

/// log of arith(r, n), without overflow for large r^n.
inline double log_arith(double r, int n) {
  if (n <= 1) return -std::numeric_limits<double>::infinity();
  if (r <= 1.0) return std::log(arith(r, n));
  // r^(n-2) * sum_{s=0}^{n-2} (n-1-s) r^(-s)
  const double q = 1.0 / r;
  CompensatedSum acc;
  double term = 1.0;
  for (int s = 0; s <= n - 2; ++s, term *= q) acc += (n - 1 - s) * term;
  return (n - 2) * std::log(r) + std::log(acc.value());
}

}  // namespace series
}  // namespace qswitch
