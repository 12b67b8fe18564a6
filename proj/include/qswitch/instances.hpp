// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qswitch/evaluate.hpp"
#include "qswitch/instance.hpp"

namespace qswitch {

/// 64-bit Mersenne Twister (std::mt19937_64, whose output sequence the C++
/// standard fixes) with bounded draws done by rejection on the raw 64-bit
/// output, so the streams do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % span + 1) % span;
    std::uint64_t x;
    do x = next();
    while (x > limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

/// Parameter ranges sampled for each generated instance.
struct ParameterRanges {
  int workers_min = 2, workers_max = 38;
  int arrival_min = 5, arrival_max = 99;
  int service_min = 1, service_max = 49;
  int back_room_min = 1, back_room_max = 4;
};

struct GenSpec {
  std::vector<int> s_values;
  int per_s_count = 30;
  std::uint64_t seed = 0;
  int max_attempts = 1'000'000;  // per value of S
  ParameterRanges ranges;

  void validate() const {
    if (per_s_count < 1) throw std::invalid_argument("per-S count must be >= 1");
    if (max_attempts < 1) throw std::invalid_argument("max attempts must be >= 1");
    if (s_values.empty()) throw std::invalid_argument("no values of S given");
    for (int s : s_values)
      if (s < 1 || s > 100) throw std::invalid_argument("S values must lie in [1, 100]");
  }
};

/// True if some feasible policy other than the latest-switching one exists.
/// Any such policy has some k_i <= S-N+i-1, so it lies componentwise below
/// the largest policy with that k_i, namely the latest-switching policy with
/// k_0..k_i each lowered by one, and has no more B. Checking those N
/// policies is therefore exact.
inline bool latest_switching_improvable(const Instance& inst, double eps_b = kDefaultEpsB) {
  const int n = inst.workers;
  if (inst.capacity == n) return false;
  for (int i = 0; i < n; ++i) {
    Policy pol = khathat(inst);
    for (int j = 0; j <= i; ++j) pol[j] -= 1;
    if (is_feasible(evaluate_closed_form(inst, pol, false), inst, eps_b)) return true;
  }
  return false;
}

/// Instance filter: the latest-switching policy is feasible but not optimal,
/// and the earliest-switching policy is infeasible.
inline bool passes_filter(const Instance& inst, double eps_b = kDefaultEpsB) {
  if (!is_feasible(evaluate_closed_form(inst, khathat(inst)), inst, eps_b)) return false;
  if (is_feasible(evaluate_closed_form(inst, khat(inst)), inst, eps_b)) return false;
  return latest_switching_improvable(inst, eps_b);
}

struct GenerateResult {
  std::vector<Instance> instances;
  std::vector<std::string> diagnostics;  // one per S that came up short

  bool complete() const { return diagnostics.empty(); }
};

/// Rejection-samples instances, per_s_count for each S in order. Draws per
/// attempt: N, lambda, mu, B_l. Tuples with N > S or B_l > N are redrawn.
inline GenerateResult generate(const GenSpec& spec) {
  spec.validate();
  const ParameterRanges& r = spec.ranges;
  Rng rng(spec.seed);
  GenerateResult out;
  for (int s : spec.s_values) {
    int found = 0;
    int attempts = 0;
    while (found < spec.per_s_count && attempts < spec.max_attempts) {
      ++attempts;
      Instance inst;
      inst.capacity = s;
      inst.workers = static_cast<int>(rng.uniform(r.workers_min, r.workers_max));
      inst.arrival_rate = static_cast<double>(rng.uniform(r.arrival_min, r.arrival_max));
      inst.service_rate = static_cast<double>(rng.uniform(r.service_min, r.service_max));
      inst.min_back_room = static_cast<double>(rng.uniform(r.back_room_min, r.back_room_max));
      if (inst.workers > s || inst.min_back_room > inst.workers) continue;
      if (!passes_filter(inst)) continue;
      out.instances.push_back(inst);
      ++found;
    }
    if (found < spec.per_s_count)
      out.diagnostics.push_back("S=" + std::to_string(s) + ": only " + std::to_string(found) +
                                " of " + std::to_string(spec.per_s_count) +
                                " instances after " + std::to_string(attempts) + " attempts");
  }
  return out;
}

// Instance files: one `S N lambda mu Bl` line per instance, single spaces,
// `#` comment lines and blank lines ignored, reals in plain decimal notation.

inline std::string format_real(double v) {
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (res.ec != std::errc()) throw std::runtime_error("cannot format real");
  return std::string(buf, res.ptr);
}

inline std::string format_instance_line(const Instance& inst) {
  return std::to_string(inst.capacity) + " " + std::to_string(inst.workers) + " " +
         format_real(inst.arrival_rate) + " " + format_real(inst.service_rate) + " " +
         format_real(inst.min_back_room);
}

inline std::string format_instances(const std::vector<Instance>& list) {
  std::string out;
  for (const auto& inst : list) out += format_instance_line(inst) + "\n";
  return out;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message, const std::string& file = {})
      : std::runtime_error((file.empty() ? "" : file + ":") + "line " + std::to_string(line) +
                           ": " + message),
        line_(line),
        message_(message) {}
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

namespace detail {

template <class T>
T parse_field(std::string_view field, int line, const char* name) {
  T v{};
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  return v;
}

}  // namespace detail

inline std::vector<Instance> parse_instances(std::string_view text) {
  std::vector<Instance> out;
  if (!text.empty() && text.back() != '\n') {
    const auto lines = 1 + std::count(text.begin(), text.end(), '\n');
    throw ParseError(static_cast<int>(lines), "missing final newline");
  }
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t sp = line.find(' ', start);
      fields.push_back(line.substr(start, sp - start));
      if (sp == std::string_view::npos) break;
      start = sp + 1;
    }
    if (fields.size() != 5)
      throw ParseError(line_no, "expected 5 fields 'S N lambda mu Bl', got " +
                                    std::to_string(fields.size()));
    Instance inst;
    inst.capacity = detail::parse_field<int>(fields[0], line_no, "S");
    inst.workers = detail::parse_field<int>(fields[1], line_no, "N");
    inst.arrival_rate = detail::parse_field<double>(fields[2], line_no, "lambda");
    inst.service_rate = detail::parse_field<double>(fields[3], line_no, "mu");
    inst.min_back_room = detail::parse_field<double>(fields[4], line_no, "Bl");
    try {
      validate_instance(inst);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    out.push_back(inst);
  }
  return out;
}

inline std::vector<Instance> read_instances(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instances(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

inline void write_instances(const std::vector<Instance>& list, const std::string& path,
                            const std::string& header = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!header.empty()) out << "# " << header << "\n";
  out << format_instances(list);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qswitch
