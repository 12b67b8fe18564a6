// Copyright 2026 The qswitch Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: evaluate policies, run the heuristic, the exact
// solver or enumeration on one instance, generate instance suites, and run
// benchmark batches.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qswitch/bench.hpp"
#include "qswitch/heuristic.hpp"
#include "qswitch/instances.hpp"
#include "qswitch/policy_space.hpp"
#include "qswitch/solver.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

struct InstanceArgs {
  std::string file;
  int index = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--instance-file", file, "Instance file")->required();
    cmd->add_option("--index", index, "0-based instance index (comment lines not counted)")
        ->check(CLI::NonNegativeNumber);
  }

  qswitch::Instance load() const {
    const auto list = qswitch::read_instances(file);
    if (index >= static_cast<int>(list.size()))
      throw std::runtime_error(file + " has " + std::to_string(list.size()) +
                               " instances; index " + std::to_string(index) +
                               " is out of range");
    return list[index];
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

qswitch::Policy parse_policy(const std::string& text) {
  std::vector<int> k;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma - start);
    std::size_t used = 0;
    const int v = std::stoi(part, &used);
    if (used != part.size()) throw std::invalid_argument("bad policy entry '" + part + "'");
    k.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return qswitch::Policy(std::move(k));
}

void print_metrics(const qswitch::Instance& inst, const qswitch::Metrics& m) {
  std::cout << "F " << fmt(m.front_room) << "\n"
            << "B " << fmt(m.back_room) << "\n"
            << "L " << fmt(m.customers) << "\n"
            << "Lq " << fmt(m.queue_length) << "\n"
            << "Wq " << fmt(m.wait) << "\n"
            << "P(S) " << fmt(m.p_block) << "\n"
            << "feasible " << (qswitch::is_feasible(m, inst) ? "yes" : "no") << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

std::string sibling(const std::string& csv, const std::string& suffix) {
  std::filesystem::path p(csv);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + suffix + ".csv")).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching policies for cross-trained workers: evaluation and optimization"};
  app.require_subcommand(1);

  // eval
  InstanceArgs eval_in;
  std::string policy_text;
  std::string method = "closed";
  auto* eval = app.add_subcommand("eval", "Evaluate one switching policy");
  eval_in.add_to(eval);
  eval->add_option("--policy", policy_text, "Switching points k0,k1,...,kN")->required();
  eval->add_option("--method", method, "Evaluator")
      ->check(CLI::IsMember({"direct", "closed"}));

  // heuristic
  InstanceArgs heur_in;
  bool show_trace = false;
  auto* heur = app.add_subcommand("heuristic", "Run the P1 local-search heuristic");
  heur_in.add_to(heur);
  heur->add_flag("--trace", show_trace, "Print every visited policy");

  // solve
  InstanceArgs solve_in;
  std::string strategy = "alt-search-shave";
  qswitch::SolverConfig cfg;
  auto* solve = app.add_subcommand("solve", "Exact branch and bound with shaving");
  solve_in.add_to(solve);
  solve->add_option("--strategy", strategy, "Domain reduction strategy")
      ->check(CLI::IsMember({"none", "bl-shave", "wq-shave", "alt-shave", "alt-search-shave"}));
  solve->add_flag("--dominance", cfg.dominance, "Add dominance cuts from incumbents");
  solve->add_flag("--hybrid", cfg.hybrid, "Seed the incumbent with the P1 heuristic");
  solve->add_option("--time-limit", cfg.time_limit, "Seconds")->check(CLI::PositiveNumber);

  // brute
  InstanceArgs brute_in;
  auto* brute = app.add_subcommand("brute", "Enumerate every policy");
  brute_in.add_to(brute);

  // generate
  qswitch::GenSpec spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Generate a filtered random instance suite");
  gen->add_option("--s", spec.s_values, "Comma-separated values of S")
      ->required()
      ->delimiter(',');
  gen->add_option("--count", spec.per_s_count, "Instances per value of S")->required();
  gen->add_option("--seed", spec.seed, "Generator seed")->required();
  gen->add_option("--max-attempts", spec.max_attempts, "Draws allowed per value of S");
  gen->add_option("--out", gen_out, "Output instance file")->required();

  // bench
  std::string bench_file, out_csv;
  std::vector<std::string> method_names;
  double bench_limit = 600.0;
  int workers = 1;
  std::vector<double> checkpoints = qswitch::default_checkpoints();
  auto* bench = app.add_subcommand("bench", "Run methods over an instance suite");
  bench->add_option("--instance-file", bench_file, "Instance file")->required();
  bench->add_option("--methods", method_names,
                    "Comma-separated methods: p1, brute, hybrid, or a strategy with optional "
                    "+dom/+hybrid")
      ->required()
      ->delimiter(',');
  bench->add_option("--time-limit", bench_limit, "Seconds per run")
      ->required()
      ->check(CLI::PositiveNumber);
  bench->add_option("--out-csv", out_csv, "Record CSV; traces and MRE curve go beside it")
      ->required();
  bench->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  bench->add_option("--checkpoints", checkpoints, "MRE checkpoint times in seconds")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every other usage error exits 1.
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*eval) {
      const auto inst = eval_in.load();
      const auto pol = parse_policy(policy_text);
      qswitch::validate_policy(inst, pol);
      const auto which =
          method == "direct" ? qswitch::Evaluator::direct : qswitch::Evaluator::closed_form;
      std::cout << "instance " << qswitch::to_string(inst) << "\n"
                << "policy " << qswitch::to_string(pol) << "\n";
      print_metrics(inst, qswitch::evaluate(inst, pol, which));
      return kOk;
    }

    if (*heur) {
      const auto inst = heur_in.load();
      const auto res = qswitch::run_p1(inst);
      if (show_trace)
        for (const auto& s : res.trace)
          std::cout << qswitch::to_string(s.action) << " " << s.index << " "
                    << qswitch::to_string(s.policy) << " B=" << fmt(s.back_room)
                    << " Wq=" << fmt(s.wait) << "\n";
      if (res.status == qswitch::HeuristicStatus::infeasible) {
        std::cout << "status infeasible\n";
        return kInfeasible;
      }
      std::cout << "status feasible\n"
                << "policy " << qswitch::to_string(res.policy) << "\n"
                << "Wq " << fmt(res.wait) << "\n"
                << "evaluations " << res.steps << "\n";
      return kOk;
    }

    if (*solve) {
      const auto inst = solve_in.load();
      cfg.strategy = *qswitch::parse_strategy(strategy);
      const auto res = qswitch::solve(inst, cfg);
      std::cout << "status " << qswitch::to_string(res.status) << "\n";
      if (res.status == qswitch::SolveStatus::infeasible) return kInfeasible;
      if (res.incumbent)
        std::cout << "policy " << qswitch::to_string(*res.incumbent) << "\n"
                  << "Wq " << fmt(*res.wait) << "\n";
      std::cout << "proof " << (res.proof ? "yes" : "no") << "\n"
                << "nodes " << res.stats.nodes << "\n"
                << "shave_probes " << res.stats.shave_probes << "\n"
                << "evaluations " << res.stats.evaluations << "\n"
                << "elapsed_s " << fmt(res.elapsed) << "\n";
      return kOk;
    }

    if (*brute) {
      const auto inst = brute_in.load();
      const auto res = qswitch::brute_force_optimum(inst);
      if (!res.policy) {
        std::cout << "status infeasible\nevaluated " << res.evaluated << "\n";
        return kInfeasible;
      }
      std::cout << "status optimal\n"
                << "policy " << qswitch::to_string(*res.policy) << "\n"
                << "Wq " << fmt(res.wait) << "\n"
                << "evaluated " << res.evaluated << "\n";
      return kOk;
    }

    if (*gen) {
      const auto res = qswitch::generate(spec);
      std::string header = "seed=" + std::to_string(spec.seed) + " count=" +
                           std::to_string(spec.per_s_count) + " s=";
      for (std::size_t i = 0; i < spec.s_values.size(); ++i)
        header += (i ? "," : "") + std::to_string(spec.s_values[i]);
      qswitch::write_instances(res.instances, gen_out, header);
      for (const auto& d : res.diagnostics) std::cerr << "warning: " << d << "\n";
      std::cout << res.instances.size() << " instances written to " << gen_out << "\n";
      return kOk;
    }

    if (*bench) {
      std::vector<qswitch::Method> methods;
      for (const auto& name : method_names) {
        auto m = qswitch::parse_method(name);
        if (!m) {
          std::cerr << "unknown method '" << name << "'\n";
          return kError;
        }
        methods.push_back(*m);
      }
      const auto instances = qswitch::read_instances(bench_file);
      const auto suite = qswitch::run_suite(instances, methods, bench_limit, workers);
      write_file(out_csv, qswitch::records_csv(suite.records));
      write_file(sibling(out_csv, "_trace"), qswitch::trace_csv(suite.records));
      const auto curve =
          qswitch::mre_curve(suite.records, method_names, suite.best_known, checkpoints);
      write_file(sibling(out_csv, "_mre"), qswitch::mre_csv(curve));

      std::cout << "method,runs,proved,mean_elapsed_s,mre\n";
      for (const auto& name : method_names) {
        std::vector<qswitch::SuiteRecord> mine;
        int proved = 0;
        double total = 0.0;
        for (const auto& r : suite.records)
          if (r.method == name) {
            mine.push_back(r);
            proved += r.proof;
            total += r.elapsed;
          }
        std::cout << name << "," << mine.size() << "," << proved << ","
                  << fmt(mine.empty() ? 0.0 : total / mine.size()) << ","
                  << fmt(qswitch::mre(mine, suite.best_known)) << "\n";
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
