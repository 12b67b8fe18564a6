// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "qswitch/instance.hpp"
#include "qswitch/numerics.hpp"

namespace qswitch {

/// Default absolute tolerance on the back-room constraint B >= B_l.
inline constexpr double kDefaultEpsB = 1e-9;

/// Steady-state quantities of one policy.
///
/// `p` has S+1 entries (zero below k_0), or none if the caller skipped it.
/// `back_room` is accumulated directly as sum_j (N - i(j)) P(j) rather than
/// as N - F, so it stays accurate when F is close to N; the two agree to
/// rounding.
struct Metrics {
  std::vector<double> p;
  double front_room = 0.0;   // F
  double back_room = 0.0;    // B
  double customers = 0.0;    // L
  double queue_length = 0.0; // L_q = L - F
  double wait = 0.0;         // W_q
  double p_block = 0.0;      // P(k_N)
  /// Set when the closed-form evaluator had to fall back to log space.
  bool log_space = false;
};

namespace detail {

/// Expected wait by Little's law, L / (lambda (1 - P(k_N))) - 1/mu, written as
/// L_q / (lambda (1 - P(k_N))) so no large terms cancel.
inline double littles_wait(const Instance& inst, double queue_length, double served_mass) {
  return queue_length / (inst.arrival_rate * served_mass);
}

}  // namespace detail

/// Per-state evaluation: runs the birth-death balance recursion
/// P(j+1) = P(j) lambda / (i mu) over every state, normalises, and sums.
inline Metrics evaluate_direct(const Instance& inst, const Policy& pol) {
  validate_policy(inst, pol);
  const int s = inst.capacity;
  const int n = inst.workers;
  const double lambda = inst.arrival_rate;
  const double mu = inst.service_rate;

  constexpr double kRescaleAbove = 1e100;
  std::vector<double> q(s + 1, 0.0);
  q[pol[0]] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double r = lambda / (i * mu);
    for (int j = pol[i - 1]; j < pol[i]; ++j) {
      q[j + 1] = q[j] * r;
      if (q[j + 1] > kRescaleAbove) {
        const double scale = q[j + 1];
        for (int t = pol[0]; t <= j + 1; ++t) q[t] /= scale;
      }
    }
  }

  CompensatedSum total;
  for (int j = pol[0]; j <= s; ++j) total += q[j];
  const double z = total.value();

  Metrics m;
  m.p.assign(s + 1, 0.0);
  CompensatedSum f, b, l, lq, served;
  int servers = 0;
  for (int j = pol[0]; j <= s; ++j) {
    if (j > pol[servers]) ++servers;
    const double pj = q[j] / z;
    m.p[j] = pj;
    f += servers * pj;
    b += (n - servers) * pj;
    l += j * pj;
    lq += (j - servers) * pj;
    if (j < s) served += pj;
  }
  m.front_room = f.value();
  m.back_room = b.value();
  m.customers = l.value();
  m.queue_length = lq.value();
  m.p_block = m.p[s];
  m.wait = detail::littles_wait(inst, m.queue_length, served.value());
  return m;
}

/// Segment-level evaluation from closed-form expressions: P at the switching
/// points, geometric partial sums between them, and the normalising constant
/// from the per-segment sums of the unnormalised weights beta_j. The per-state
/// distribution costs O(S) and is skipped unless `distribution` is set.
inline Metrics evaluate_closed_form(const Instance& inst, const Policy& pol,
                                    bool distribution = true) {
  validate_policy(inst, pol);
  const int s = inst.capacity;
  const int n = inst.workers;
  const double lambda = inst.arrival_rate;
  const double mu = inst.service_rate;
  const int k0 = pol[0];

  // Segment i covers states k_i .. k_{i+1}-1; states above k_i get i+1
  // servers, so the ratio between neighbours is lambda / ((i+1) mu).
  // Everything here depends only on (lambda, mu, N) and is kept per thread.
  struct Tables {
    double lambda = -1.0, mu = -1.0, log_rho = 0.0;
    int n = -1, s = -1;
    std::vector<double> ratio, log_ratio, log_count;
    // Row i, column t: r_i^t, geom(r_i, t), arith(r_i, t) for t = 0..S.
    std::vector<double> pow_t, geom_t, arith_t;
  };
  thread_local Tables tab;
  if (tab.lambda != lambda || tab.mu != mu || tab.n != n || tab.s != s) {
    tab.lambda = lambda;
    tab.mu = mu;
    tab.n = n;
    tab.s = s;
    tab.log_rho = std::log(lambda / mu);
    tab.ratio.assign(n, 0.0);
    tab.log_ratio.assign(n, 0.0);
    tab.log_count.assign(n + 1, 0.0);
    tab.pow_t.assign(static_cast<std::size_t>(n) * (s + 1), 0.0);
    tab.geom_t.assign(tab.pow_t.size(), 0.0);
    tab.arith_t.assign(tab.pow_t.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double r = lambda / ((i + 1) * mu);
      tab.ratio[i] = r;
      tab.log_count[i + 1] = std::log(i + 1.0);
      tab.log_ratio[i] = tab.log_rho - tab.log_count[i + 1];
      for (int t = 0; t <= s; ++t) {
        const std::size_t at = static_cast<std::size_t>(i) * (s + 1) + t;
        tab.pow_t[at] = std::pow(r, t);
        tab.geom_t[at] = series::geom_log(r, tab.log_ratio[i], t);
        tab.arith_t[at] = series::arith(r, t);
      }
    }
  }
  auto cell = [&](const std::vector<double>& table, int i, int t) {
    return table[static_cast<std::size_t>(i) * (s + 1) + t];
  };
  const double log_rho = tab.log_rho;
  const std::vector<double>& ratio = tab.ratio;
  const std::vector<double>& log_ratio = tab.log_ratio;
  const std::vector<double>& log_count = tab.log_count;

  struct Scratch {
    std::vector<int> len;
    std::vector<double> log_x, beta_exponent, pk, psums, mass, log_pk, seg, log_beta;
  };
  thread_local Scratch w;
  std::vector<int>& len = w.len;
  len.resize(n);
  for (int i = 0; i < n; ++i) len[i] = pol[i + 1] - pol[i];

  // log X_i = -sum_{g=1}^{i-1} (k_g - k_{g-1}) log g, i = 1..N
  std::vector<double>& log_x = w.log_x;
  log_x.assign(n + 1, 0.0);
  for (int i = 2; i <= n; ++i) log_x[i] = log_x[i - 1] - len[i - 2] * log_count[i - 1];
  std::vector<double>& beta_exponent = w.beta_exponent;
  beta_exponent.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i)
    beta_exponent[i] = log_x[i] + (pol[i - 1] - k0 + 1) * log_rho - log_count[i];

  constexpr double kLogLimit = 300.0;
  bool use_logs = false;
  {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += len[i] * log_ratio[i];
      if (std::abs(len[i] * log_ratio[i]) > kLogLimit || std::abs(acc) > kLogLimit) use_logs = true;
    }
    for (int i = 1; i <= n; ++i)
      if (std::abs(beta_exponent[i]) + len[i - 1] * std::abs(log_ratio[i - 1]) > kLogLimit)
        use_logs = true;
  }

  std::vector<double>& pk = w.pk;
  std::vector<double>& psums = w.psums;
  std::vector<double>& mass = w.mass;
  std::vector<double>& log_pk = w.log_pk;  // normalised, log-space path only
  pk.resize(n + 1);
  psums.resize(n);
  mass.resize(n + 1);
  double served_mass = 0.0;

  if (!use_logs) {
    // geom(r_i, n_i) serves the normaliser, PSums and the segment masses.
    std::vector<double>& seg = w.seg;
    seg.resize(n);
    for (int i = 0; i < n; ++i) seg[i] = cell(tab.geom_t, i, len[i]);

    // Unnormalised: P(k_0) = 1, P(k_{i+1}) = r^(k_{i+1}-k_i) P(k_i).
    pk[0] = 1.0;
    for (int i = 0; i < n; ++i) pk[i + 1] = cell(tab.pow_t, i, len[i]) * pk[i];

    // betaSum(k_0) = 1; betaSum(k_i) = X_i rho^(k_{i-1}-k_0+1) (1/i) geom(lambda/(i mu)).
    CompensatedSum beta_total;
    beta_total += 1.0;
    for (int i = 1; i <= n; ++i) beta_total += std::exp(beta_exponent[i]) * seg[i - 1];
    const double p_k0 = 1.0 / beta_total.value();

    for (auto& v : pk) v *= p_k0;
    for (int i = 0; i < n; ++i) psums[i] = pk[i] * seg[i];
    mass[0] = pk[0];
    for (int i = 1; i <= n; ++i) mass[i] = pk[i - 1] * ratio[i - 1] * seg[i - 1];
  } else {
    std::vector<double>& log_beta = w.log_beta;
    std::vector<double>& log_seg = w.seg;
    log_beta.resize(n + 1);
    log_seg.resize(n);
    for (int i = 0; i < n; ++i) log_seg[i] = series::log_geom(ratio[i], len[i]);
    log_pk.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) log_pk[i + 1] = log_pk[i] + len[i] * log_ratio[i];
    log_beta[0] = 0.0;
    for (int i = 1; i <= n; ++i) log_beta[i] = beta_exponent[i] + log_seg[i - 1];
    const double log_z = log_sum_exp(log_beta);

    for (auto& v : log_pk) v -= log_z;
    for (int i = 0; i <= n; ++i) pk[i] = std::exp(log_pk[i]);
    for (int i = 0; i < n; ++i) psums[i] = std::exp(log_pk[i] + log_seg[i]);
    mass[0] = pk[0];
    for (int i = 1; i <= n; ++i)
      mass[i] = std::exp(log_pk[i - 1] + log_ratio[i - 1] + log_seg[i - 1]);
  }

  Metrics m;
  m.log_space = use_logs;

  CompensatedSum f, b, l, lq, served;
  for (int i = 0; i <= n; ++i) {
    f += i * mass[i];
    b += (n - i) * mass[i];
  }
  for (int i = 0; i < n; ++i) {
    served += psums[i];
    // sum_{j=k_i}^{k_{i+1}-1} j P(j)
    //   = k_i PSums(k_i) + P(k_i) r arith(r, k_{i+1}-k_i)
    // and the queued part sum (j - servers(j)) P(j)
    //   = (k_i - i) PSums(k_i) + P(k_i) r^2 arith(r, k_{i+1}-k_i-1)
    double tail_l, tail_lq;
    if (!use_logs) {
      const double r = ratio[i];
      tail_l = pk[i] * r * cell(tab.arith_t, i, len[i]);
      tail_lq = pk[i] * r * r * cell(tab.arith_t, i, len[i] - 1);
    } else {
      const double lp = log_pk[i];
      tail_l = std::exp(lp + log_ratio[i] + series::log_arith(ratio[i], len[i]));
      tail_lq = std::exp(lp + 2 * log_ratio[i] + series::log_arith(ratio[i], len[i] - 1));
    }
    l += pol[i] * psums[i];
    l += tail_l;
    lq += (pol[i] - i) * psums[i];
    lq += tail_lq;
  }
  l += s * pk[n];
  lq += (s - n) * pk[n];

  m.front_room = f.value();
  m.back_room = b.value();
  m.customers = l.value();
  m.queue_length = lq.value();
  m.p_block = pk[n];
  served_mass = served.value();
  m.wait = detail::littles_wait(inst, m.queue_length, served_mass);

  if (!distribution) return m;
  m.p.assign(s + 1, 0.0);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < len[i]; ++t)
      m.p[pol[i] + t] = use_logs ? std::exp(log_pk[i] + t * log_ratio[i])
                                 : pk[i] * std::pow(ratio[i], t);
  m.p[s] = pk[n];
  return m;
}

enum class Evaluator { direct, closed_form };

/// The direct evaluator always fills the distribution.
inline Metrics evaluate(const Instance& inst, const Policy& pol,
                        Evaluator which = Evaluator::closed_form, bool distribution = true) {
  return which == Evaluator::direct ? evaluate_direct(inst, pol)
                                    : evaluate_closed_form(inst, pol, distribution);
}

/// B >= B_l, up to `eps_b`.
inline bool is_feasible(const Metrics& m, const Instance& inst, double eps_b = kDefaultEpsB) {
  return m.back_room >= inst.min_back_room - eps_b;
}

}  // namespace qswitch
