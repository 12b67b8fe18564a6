// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include "qswitch/heuristic.hpp"
#include "qswitch/policy_space.hpp"
#include "qswitch/solver.hpp"

namespace qswitch {

/// A benchmarked method: the P1 heuristic, brute-force enumeration, or the
/// exact solver with some configuration.
struct Method {
  enum class Kind { p1, brute, solver };
  std::string name;
  Kind kind = Kind::solver;
  SolverConfig config;
};

/// Method names: `p1`, `brute`, or a strategy name (`none`, `bl-shave`,
/// `wq-shave`, `alt-shave`, `alt-search-shave`) optionally followed by
/// `+dom` and/or `+hybrid`. `hybrid` alone means `alt-search-shave+hybrid`.
inline std::optional<Method> parse_method(std::string_view name) {
  Method m;
  m.name = std::string(name);
  if (name == "p1") {
    m.kind = Method::Kind::p1;
    return m;
  }
  if (name == "brute") {
    m.kind = Method::Kind::brute;
    return m;
  }
  if (name == "hybrid") {
    m.config.strategy = Strategy::alt_search_shave;
    m.config.hybrid = true;
    return m;
  }
  const std::size_t plus = name.find('+');
  const auto strategy = parse_strategy(name.substr(0, plus));
  if (!strategy) return std::nullopt;
  m.config.strategy = *strategy;
  std::string_view rest = plus == std::string_view::npos ? "" : name.substr(plus);
  while (!rest.empty()) {
    rest.remove_prefix(1);
    const std::size_t next = rest.find('+');
    const std::string_view flag = rest.substr(0, next);
    if (flag == "dom" && !m.config.dominance)
      m.config.dominance = true;
    else if (flag == "hybrid" && !m.config.hybrid)
      m.config.hybrid = true;
    else
      return std::nullopt;
    rest = next == std::string_view::npos ? "" : rest.substr(next);
  }
  return m;
}

struct SuiteRecord {
  int instance_id = 0;
  std::string method;
  std::string status;
  std::optional<double> wait;
  bool proof = false;
  double elapsed = 0.0;
  std::uint64_t nodes = 0;
  std::uint64_t evaluations = 0;
  std::vector<TracePoint> trace;
};

/// Runs one method on one instance.
inline SuiteRecord run_method(const Instance& inst, int id, const Method& method,
                              double time_limit) {
  SuiteRecord rec;
  rec.instance_id = id;
  rec.method = method.name;
  const auto start = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  switch (method.kind) {
    case Method::Kind::p1: {
      const HeuristicResult h = run_p1(inst, method.config.eps_b);
      rec.elapsed = seconds();
      rec.evaluations = static_cast<std::uint64_t>(h.steps);
      if (h.status == HeuristicStatus::infeasible) {
        rec.status = "infeasible";
      } else {
        rec.status = "feasible";
        rec.wait = h.wait;
        rec.trace.push_back({rec.elapsed, h.wait});
      }
      break;
    }
    case Method::Kind::brute: {
      try {
        const BruteForceResult b = brute_force_optimum(inst, false, Evaluator::direct,
                                                       method.config.eps_b);
        rec.elapsed = seconds();
        rec.evaluations = b.evaluated;
        if (b.policy) {
          rec.status = "optimal";
          rec.wait = b.wait;
          rec.proof = true;
          rec.trace.push_back({rec.elapsed, b.wait});
        } else {
          rec.status = "infeasible";
          rec.proof = true;
        }
      } catch (const std::length_error&) {
        rec.elapsed = seconds();
        rec.status = "skipped";
      }
      break;
    }
    case Method::Kind::solver: {
      SolverConfig cfg = method.config;
      cfg.time_limit = time_limit;
      const SolveResult r = solve(inst, cfg);
      rec.elapsed = r.elapsed;
      rec.status = std::string(to_string(r.status));
      rec.wait = r.wait;
      rec.proof = r.proof;
      rec.nodes = r.stats.nodes;
      rec.evaluations = r.stats.evaluations;
      rec.trace = r.incumbent_trace;
      break;
    }
  }
  return rec;
}

/// Per-instance reference values for relative error: c*(m) is the smallest
/// W_q any method reached (or the enumerated optimum where enumeration is
/// cheap); `fallback` is W_q of the latest-switching policy, used for methods
/// with no solution.
struct BestKnownTable {
  std::map<int, double> best;
  std::map<int, double> fallback;

  void observe(int id, double wait) {
    auto [it, inserted] = best.emplace(id, wait);
    if (!inserted) it->second = std::min(it->second, wait);
  }
  std::optional<double> get(int id) const {
    const auto it = best.find(id);
    if (it == best.end()) return std::nullopt;
    return it->second;
  }
};

inline constexpr std::uint64_t kBestKnownBruteLimit = 100'000;

inline BestKnownTable build_best_known(const std::vector<Instance>& instances,
                                       const std::vector<SuiteRecord>& records,
                                       bool use_brute_force = true) {
  BestKnownTable table;
  for (int id = 0; id < static_cast<int>(instances.size()); ++id) {
    const Instance& inst = instances[id];
    const Metrics latest = evaluate_closed_form(inst, khathat(inst));
    if (!is_feasible(latest, inst)) continue;
    table.fallback[id] = latest.wait;
    if (use_brute_force && policy_count(inst) <= kBestKnownBruteLimit) {
      const BruteForceResult b = brute_force_optimum(inst);
      if (b.policy) table.observe(id, b.wait);
    }
  }
  for (const auto& rec : records)
    if (rec.wait && table.fallback.contains(rec.instance_id))
      table.observe(rec.instance_id, *rec.wait);
  return table;
}

/// Mean relative error of one method's records against the table. Records
/// with no W_q count at the fallback value; instances absent from the table
/// (infeasible ones) are skipped.
inline double mre(const std::vector<SuiteRecord>& records, const BestKnownTable& table) {
  double sum = 0.0;
  int count = 0;
  for (const auto& rec : records) {
    const auto star = table.get(rec.instance_id);
    if (!star) continue;
    const double c = rec.wait ? *rec.wait : table.fallback.at(rec.instance_id);
    sum += (c - *star) / *star;
    ++count;
  }
  return count ? sum / count : 0.0;
}

/// W_q of the incumbent held at time t according to the trace, or nullopt.
inline std::optional<double> incumbent_at(const std::vector<TracePoint>& trace, double t) {
  std::optional<double> out;
  for (const auto& p : trace) {
    if (p.elapsed > t) break;
    out = p.wait;
  }
  return out;
}

/// MRE of one method if every run had been stopped at time t.
inline double mre_at(const std::vector<SuiteRecord>& records, const BestKnownTable& table,
                     double t) {
  std::vector<SuiteRecord> cut;
  cut.reserve(records.size());
  for (const auto& rec : records) {
    SuiteRecord r;
    r.instance_id = rec.instance_id;
    r.wait = incumbent_at(rec.trace, t);
    cut.push_back(std::move(r));
  }
  return mre(cut, table);
}

inline const std::vector<double>& default_checkpoints() {
  static const std::vector<double> v{1, 5, 10, 50, 150, 500};
  return v;
}

struct MrePoint {
  std::string method;
  double time = 0.0;
  double value = 0.0;
};

inline std::vector<MrePoint> mre_curve(const std::vector<SuiteRecord>& records,
                                       const std::vector<std::string>& methods,
                                       const BestKnownTable& table,
                                       const std::vector<double>& checkpoints) {
  std::vector<MrePoint> out;
  for (const auto& m : methods) {
    std::vector<SuiteRecord> mine;
    for (const auto& r : records)
      if (r.method == m) mine.push_back(r);
    for (double t : checkpoints) out.push_back({m, t, mre_at(mine, table, t)});
  }
  return out;
}

struct SuiteResult {
  std::vector<SuiteRecord> records;  // instance-major, methods in given order
  BestKnownTable best_known;
};

/// Runs every (instance, method) pair with up to `workers` threads. Records
/// come back in a fixed order whatever the scheduling.
inline SuiteResult run_suite(const std::vector<Instance>& instances,
                             const std::vector<Method>& methods, double time_limit,
                             int workers = 1, bool brute_force_reference = true) {
  if (!(time_limit > 0.0)) throw std::invalid_argument("time limit must be > 0");
  const std::size_t jobs = instances.size() * methods.size();
  SuiteResult out;
  out.records.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t id = j / methods.size();
      out.records[j] = run_method(instances[id], static_cast<int>(id),
                                  methods[j % methods.size()], time_limit);
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(jobs, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.best_known = build_best_known(instances, out.records, brute_force_reference);
  return out;
}

// CSV emission and parsing. Reals use the shortest representation that
// reads back to the same double; an absent W_q is an empty field.

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = line.find(sep, start);
    out.push_back(line.substr(start, p - start));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

template <class T>
T csv_field(std::string_view s, int line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad field '" +
                             std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> csv_lines(std::string_view text, std::string_view header) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != header)
    throw std::runtime_error("csv: expected header '" + std::string(header) + "'");
  return lines;
}

}  // namespace detail

inline constexpr std::string_view kRecordHeader =
    "instance_id,method,status,wq,proof,elapsed_s,nodes,evals";
inline constexpr std::string_view kTraceHeader = "instance_id,method,t_s,wq";
inline constexpr std::string_view kMreHeader = "method,t_s,mre";

inline std::string records_csv(const std::vector<SuiteRecord>& records) {
  std::ostringstream out;
  out << kRecordHeader << "\n";
  for (const auto& r : records)
    out << r.instance_id << "," << r.method << "," << r.status << ","
        << (r.wait ? detail::format_double(*r.wait) : "") << "," << (r.proof ? 1 : 0) << ","
        << detail::format_double(r.elapsed) << "," << r.nodes << "," << r.evaluations << "\n";
  return out.str();
}

inline std::string trace_csv(const std::vector<SuiteRecord>& records) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (const auto& r : records)
    for (const auto& p : r.trace)
      out << r.instance_id << "," << r.method << "," << detail::format_double(p.elapsed) << ","
          << detail::format_double(p.wait) << "\n";
  return out.str();
}

inline std::string mre_csv(const std::vector<MrePoint>& curve) {
  std::ostringstream out;
  out << kMreHeader << "\n";
  for (const auto& p : curve)
    out << p.method << "," << detail::format_double(p.time) << ","
        << detail::format_double(p.value) << "\n";
  return out.str();
}

/// Parses the record CSV and, if given, the trace CSV back into records.
inline std::vector<SuiteRecord> parse_records_csv(std::string_view records_text,
                                                  std::string_view trace_text = {}) {
  std::vector<SuiteRecord> out;
  const auto lines = detail::csv_lines(records_text, kRecordHeader);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int ln = static_cast<int>(i + 1);
    const auto f = detail::split(lines[i], ',');
    if (f.size() != 8)
      throw std::runtime_error("csv line " + std::to_string(ln) + ": expected 8 fields");
    SuiteRecord r;
    r.instance_id = detail::csv_field<int>(f[0], ln);
    r.method = std::string(f[1]);
    r.status = std::string(f[2]);
    if (!f[3].empty()) r.wait = detail::csv_field<double>(f[3], ln);
    r.proof = detail::csv_field<int>(f[4], ln) != 0;
    r.elapsed = detail::csv_field<double>(f[5], ln);
    r.nodes = detail::csv_field<std::uint64_t>(f[6], ln);
    r.evaluations = detail::csv_field<std::uint64_t>(f[7], ln);
    out.push_back(std::move(r));
  }
  if (trace_text.empty()) return out;
  const auto tlines = detail::csv_lines(trace_text, kTraceHeader);
  for (std::size_t i = 1; i < tlines.size(); ++i) {
    const int ln = static_cast<int>(i + 1);
    const auto f = detail::split(tlines[i], ',');
    if (f.size() != 4)
      throw std::runtime_error("trace line " + std::to_string(ln) + ": expected 4 fields");
    const int id = detail::csv_field<int>(f[0], ln);
    const auto it = std::find_if(out.begin(), out.end(), [&](const SuiteRecord& r) {
      return r.instance_id == id && r.method == f[1];
    });
    if (it == out.end())
      throw std::runtime_error("trace line " + std::to_string(ln) + ": unknown record");
    it->trace.push_back({detail::csv_field<double>(f[2], ln), detail::csv_field<double>(f[3], ln)});
  }
  return out;
}

}  // namespace qswitch
