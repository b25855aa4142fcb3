// Copyright 2026 The screfresh Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// screfresh: plan and simulate memory-assisted materialized-view refresh runs.
//
// Exit codes: 0 success, 2 unreadable / malformed / inconsistent input,
// 3 infeasible input (negative budget, impossible generator parameters).

#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "screfresh/alternating.h"
#include "screfresh/compare.h"
#include "screfresh/cost_model.h"
#include "screfresh/graph.h"
#include "screfresh/io.h"
#include "screfresh/simulator.h"
#include "screfresh/workgen.h"

namespace {

using namespace screfresh;

constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void SetUpLogging() {
  auto logger = spdlog::stderr_logger_mt("screfresh");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("SC_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::err);
  }
}

Bytes ParseBudget(const std::string& text) {
  if (!text.empty() && text.front() == '-') {
    throw InfeasibleInput("memory budget must be >= 0, got " + text);
  }
  try {
    return ParseBytes(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("--memory: ") + e.what());
  }
}

CostModel LoadCostModel(const std::string& path) {
  if (path.empty()) return CostModel{};
  return ParseCostModel(ReadFile(path));
}

DepGraph LoadGraph(const std::string& path) {
  const std::string text = ReadFile(path);
  DepGraph g = DepGraph::FromSpec(ParseWorkload(text));
  spdlog::info("loaded {} nodes, {} edges from {}", g.size(), g.edge_count(), path);
  return g;
}

void Emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty()) {
    std::cout << contents;
  } else {
    WriteFile(out_path, contents);
  }
}

struct CommonArgs {
  std::string graph;
  std::string memory;
  std::string cost_model;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format;
};

int RunValidate(const CommonArgs& args) {
  const DepGraph g = LoadGraph(args.graph);
  std::cout << "ok: " << g.size() << " nodes, " << g.edge_count() << " edges";
  if (!g.AllScored()) std::cout << " (scores missing; derived from the cost model)";
  std::cout << "\n";
  return 0;
}

int RunScore(const CommonArgs& args, bool recompute) {
  const DepGraph g = LoadGraph(args.graph);
  const CostModel cm = LoadCostModel(args.cost_model);
  DepGraph scored = recompute ? g.WithScores(ComputeSpeedupScores(g, cm))
                              : FillMissingScores(g, cm);
  Emit(args.out, SerializeWorkload(scored.ToSpec()));
  return 0;
}

int RunGenerate(const CommonArgs& args, GenParams params,
                const std::string& params_file) {
  if (!params_file.empty()) {
    GenParams from_file = ParseGenParams(ReadFile(params_file));
    params.node_count = from_file.node_count;
    params.height_width_ratio = from_file.height_width_ratio;
    params.max_outdegree = from_file.max_outdegree;
    params.stage_stdev = from_file.stage_stdev;
    params.source_size_pool = from_file.source_size_pool;
    params.seed = from_file.seed;
  }
  params.cost_model = LoadCostModel(args.cost_model);
  Emit(args.out, SerializeWorkload(Generate(params)));
  return 0;
}

int RunOptimize(const CommonArgs& args, OptimizeConfig config,
                const std::string& initial) {
  const CostModel cm = LoadCostModel(args.cost_model);
  const DepGraph g = FillMissingScores(LoadGraph(args.graph), cm);
  const Bytes budget = ParseBudget(args.memory);
  config.seed = args.seed;
  config.initial_strategy =
      initial == "arbitrary" ? TopoStrategy::kArbitrary : TopoStrategy::kBfsLayered;
  const OptimizeResult result = Optimize(g, budget, config);
  for (const auto& record : result.trace) {
    spdlog::debug("iteration {}: candidate score {} (size {}), plan score {}, peak {}",
                  record.iteration, record.candidate_score, record.candidate_size,
                  record.total_score, record.peak_memory);
    if (record.score_increased != record.size_increased) {
      spdlog::info("iteration {}: score and flagged-size stopping tests disagree",
                   record.iteration);
    }
  }
  if (result.mkp_timed_out) {
    spdlog::warn("knapsack node limit reached; plan uses the best incumbent");
  }
  const std::string plan = SerializePlan(g, result.plan, result.iterations);
  std::ostream& summary = args.out.empty() ? std::cerr : std::cout;
  Emit(args.out, plan);
  summary << "total_score: " << result.plan.total_score << "\n"
          << "flagged: " << result.plan.flagged.count() << " of " << g.size()
          << " nodes\n"
          << "peak_memory: " << FormatBytes(result.plan.peak_memory) << " ("
          << result.plan.peak_memory << " bytes) of "
          << FormatBytes(budget) << "\n"
          << "iterations: " << result.iterations << " ("
          << TerminationName(result.termination) << ")\n";
  return 0;
}

int RunSimulate(const CommonArgs& args, const std::string& plan_path,
                const std::string& trace_path) {
  const CostModel cm = LoadCostModel(args.cost_model);
  const DepGraph g = LoadGraph(args.graph);
  const PlanFile plan = ParsePlan(ReadFile(plan_path), g);
  const Bytes budget =
      args.memory.empty() ? plan.plan.peak_memory : ParseBudget(args.memory);
  const SimReport report = Simulate(g, plan.plan, cm, budget);
  if (!trace_path.empty()) WriteFile(trace_path, SerializeTrace(g, report));
  if (report.memory_violation) {
    spdlog::warn("realized catalog peak {} exceeds budget {}", report.realized_peak,
                 budget);
  }
  if (args.format == "json") {
    Emit(args.out, SerializeReport(report));
    return 0;
  }
  if (!args.out.empty()) WriteFile(args.out, SerializeReport(report));
  std::cout << "end_to_end_seconds: " << report.end_to_end << "\n"
            << "baseline_end_to_end_seconds: " << report.baseline_end_to_end << "\n"
            << "realized_savings_seconds: " << report.realized_savings << "\n"
            << "model_peak: " << FormatBytes(report.model_peak) << " ("
            << report.model_peak << " bytes)\n"
            << "realized_peak: " << FormatBytes(report.realized_peak) << " ("
            << report.realized_peak << " bytes)\n"
            << "memory_violation: " << (report.memory_violation ? "yes" : "no")
            << "\n";
  return 0;
}

int RunCompare(const CommonArgs& args, std::vector<std::uint64_t> seeds,
               int seed_count, int sa_iterations, bool timing) {
  CompareOptions options;
  options.cost_model = LoadCostModel(args.cost_model);
  const DepGraph g = FillMissingScores(LoadGraph(args.graph), options.cost_model);
  options.budget = ParseBudget(args.memory);
  options.sa_iterations = sa_iterations;
  if (seeds.empty()) {
    for (int i = 0; i < seed_count; ++i) seeds.push_back(args.seed + i);
  }
  options.seeds = std::move(seeds);
  const auto cells = screfresh::RunCompare(g, options);
  std::string text;
  if (args.format == "csv") {
    text = CompareCsv(cells, timing);
  } else if (args.format == "json") {
    text = CompareJson(cells, timing);
  } else {
    text = CompareTable(cells, timing);
  }
  Emit(args.out, text);
  return 0;
}

int RunExportDot(const CommonArgs& args, const std::string& plan_path) {
  const DepGraph g = LoadGraph(args.graph);
  if (plan_path.empty()) {
    Emit(args.out, ExportDot(g));
  } else {
    const PlanFile plan = ParsePlan(ReadFile(plan_path), g);
    Emit(args.out, ExportDot(g, &plan.plan));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  SetUpLogging();
  CLI::App app{"Plan and simulate memory-assisted materialized-view refresh runs"};
  app.require_subcommand(1);

  CommonArgs args;
  std::function<int()> action;

  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("--graph,-g", args.graph, "Workload JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_cost_model = [&](CLI::App* cmd) {
    cmd->add_option("--cost-model", args.cost_model, "Cost model JSON file");
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out,-o", args.out, "Output file (default: stdout)");
  };

  auto* validate = app.add_subcommand("validate", "Check a workload file");
  add_graph(validate);
  validate->callback([&] { action = [&] { return RunValidate(args); }; });

  bool recompute = false;
  auto* score = app.add_subcommand("score", "Fill in speedup scores from a cost model");
  add_graph(score);
  add_cost_model(score);
  add_out(score);
  score->add_flag("--recompute", recompute, "Replace scores already in the file");
  score->callback([&] { action = [&] { return RunScore(args, recompute); }; });

  GenParams gen;
  std::string params_file;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic workload");
  generate->add_option("--nodes", gen.node_count, "Node count");
  generate->add_option("--ratio", gen.height_width_ratio, "Height / width ratio");
  generate->add_option("--max-outdegree", gen.max_outdegree, "Maximum out-degree");
  generate->add_option("--stage-stdev", gen.stage_stdev,
                       "Standard deviation of nodes per stage");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--params", params_file, "GenParams JSON file")
      ->check(CLI::ExistingFile);
  add_cost_model(generate);
  add_out(generate);
  generate->callback([&] { action = [&] { return RunGenerate(args, gen, params_file); }; });

  OptimizeConfig config;
  std::string selector = "mkp";
  std::string orderer = "madfs";
  std::string initial = "bfs-layered";
  const std::vector<std::string> selectors = {"mkp", "greedy", "random", "ratio"};
  const std::vector<std::string> orderers = {"madfs", "sa", "separator"};
  auto* optimize = app.add_subcommand("optimize", "Choose flagged nodes and an order");
  add_graph(optimize);
  optimize->add_option("--memory,-m", args.memory, "Memory budget, e.g. 100GB")
      ->required();
  optimize->add_option("--selector", selector)->check(CLI::IsMember(selectors));
  optimize->add_option("--orderer", orderer)->check(CLI::IsMember(orderers));
  optimize->add_option("--initial", initial)
      ->check(CLI::IsMember({"bfs-layered", "arbitrary"}));
  optimize->add_option("--sa-iterations", config.sa_iterations);
  optimize->add_option("--seed", args.seed);
  add_cost_model(optimize);
  add_out(optimize);
  optimize->callback([&] {
    action = [&] {
      config.selector = ParseSelector(selector);
      config.orderer = ParseOrderer(orderer);
      return RunOptimize(args, config, initial);
    };
  });

  std::string plan_path;
  std::string trace_path;
  auto* simulate = app.add_subcommand("simulate", "Simulate a refresh run for a plan");
  add_graph(simulate);
  simulate->add_option("--plan,-p", plan_path, "Plan JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--memory,-m", args.memory,
                       "Budget for the violation check (default: plan peak)");
  simulate->add_option("--emit-trace", trace_path, "Write the event trace here");
  simulate->add_option("--format", args.format)->check(CLI::IsMember({"table", "json"}));
  add_cost_model(simulate);
  add_out(simulate);
  simulate->callback([&] { action = [&] { return RunSimulate(args, plan_path, trace_path); }; });

  std::vector<std::uint64_t> seeds;
  int seed_count = 1;
  int sa_iterations = 10'000;
  bool timing = false;
  auto* compare = app.add_subcommand("compare", "Run every selector x orderer pairing");
  add_graph(compare);
  compare->add_option("--memory,-m", args.memory, "Memory budget")->required();
  compare->add_option("--seeds", seeds, "Explicit seed list")->delimiter(',');
  compare->add_option("--seed-count", seed_count, "Seeds seed..seed+N-1");
  compare->add_option("--seed", args.seed);
  compare->add_option("--sa-iterations", sa_iterations);
  compare->add_option("--format", args.format)
      ->check(CLI::IsMember({"table", "csv", "json"}));
  compare->add_flag("--timing", timing, "Include wall-clock optimisation time");
  add_cost_model(compare);
  add_out(compare);
  compare->callback([&] {
    action = [&] { return RunCompare(args, seeds, seed_count, sa_iterations, timing); };
  });

  auto* dot = app.add_subcommand("export-dot", "Render a workload (and plan) as DOT");
  add_graph(dot);
  dot->add_option("--plan,-p", plan_path, "Plan JSON file")->check(CLI::ExistingFile);
  add_out(dot);
  dot->callback([&] { action = [&] { return RunExportDot(args, plan_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return action ? action() : 0;
  } catch (const InfeasibleInput& e) {
    spdlog::error("{}", e.what());
    return kExitInfeasible;
  } catch (const InfeasibleParamsError& e) {
    spdlog::error("{}", e.what());
    return kExitInfeasible;
  } catch (const ParseError& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  } catch (const GraphError& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  } catch (const PlanMismatchError& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInputError;
  }
}
