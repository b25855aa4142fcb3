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

#include "screfresh/compare.h"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "screfresh/simulator.h"

namespace screfresh {

namespace {

constexpr Selector kSelectors[] = {Selector::kMkp, Selector::kGreedy,
                                   Selector::kRandom, Selector::kRatio};
constexpr Orderer kOrderers[] = {Orderer::kMadfs, Orderer::kSa,
                                 Orderer::kSeparator};

std::string Status(const CompareCell& cell) {
  if (!cell.error.empty()) return "error";
  if (cell.mkp_timed_out) return "mkp_timeout";
  if (cell.order_infeasible) return "order_infeasible";
  return "ok";
}

// %.17g keeps full precision with a locale-independent, stable rendering.
std::string Num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

std::vector<CompareCell> RunCompare(const DepGraph& g,
                                    const CompareOptions& options) {
  std::vector<CompareCell> cells;
  for (Selector selector : kSelectors) {
    for (Orderer orderer : kOrderers) {
      for (std::uint64_t seed : options.seeds) {
        CompareCell cell;
        cell.selector = selector;
        cell.orderer = orderer;
        cell.seed = seed;
        try {
          OptimizeConfig config;
          config.selector = selector;
          config.orderer = orderer;
          config.seed = seed;
          config.sa_iterations = options.sa_iterations;
          const auto started = std::chrono::steady_clock::now();
          const OptimizeResult result = Optimize(g, options.budget, config);
          cell.optimize_seconds = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - started)
                                      .count();
          cell.total_score = result.plan.total_score;
          cell.peak_memory = result.plan.peak_memory;
          cell.feasible = result.plan.peak_memory <= options.budget;
          cell.mkp_timed_out = result.mkp_timed_out;
          cell.termination = result.termination;
          cell.iterations = result.iterations;
          for (const auto& record : result.trace) {
            if (record.reordered_peak && *record.reordered_peak > options.budget) {
              cell.order_infeasible = true;
            }
          }
          const SimReport report =
              Simulate(g, result.plan, options.cost_model, options.budget);
          cell.end_to_end = report.end_to_end;
          cell.baseline_end_to_end = report.baseline_end_to_end;
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<PairSummary> Summarize(const std::vector<CompareCell>& cells) {
  std::vector<PairSummary> out;
  for (Selector selector : kSelectors) {
    for (Orderer orderer : kOrderers) {
      PairSummary summary{selector, orderer};
      for (const auto& cell : cells) {
        if (cell.selector != selector || cell.orderer != orderer) continue;
        if (!cell.error.empty()) {
          ++summary.failures;
          continue;
        }
        ++summary.runs;
        summary.mean_score += cell.total_score;
        summary.mean_end_to_end += cell.end_to_end;
        summary.mean_optimize_seconds += cell.optimize_seconds;
        summary.order_infeasible += cell.order_infeasible;
      }
      if (summary.runs > 0) {
        summary.mean_score /= summary.runs;
        summary.mean_end_to_end /= summary.runs;
        summary.mean_optimize_seconds /= summary.runs;
      }
      if (summary.runs + summary.failures > 0) out.push_back(summary);
    }
  }
  return out;
}

std::string CompareCsv(const std::vector<CompareCell>& cells, bool timing) {
  std::ostringstream out;
  out << "schema_version,selector,orderer,seed,status,termination,total_score,"
         "peak_memory_bytes,feasible,iterations,end_to_end_seconds,"
         "baseline_end_to_end_seconds";
  if (timing) out << ",optimize_seconds";
  out << "\n";
  for (const auto& cell : cells) {
    out << kCompareSchemaVersion << ',' << SelectorName(cell.selector) << ','
        << OrdererName(cell.orderer) << ',' << cell.seed << ',' << Status(cell)
        << ',' << TerminationName(cell.termination) << ','
        << Num(cell.total_score) << ',' << cell.peak_memory << ','
        << (cell.feasible ? "true" : "false") << ',' << cell.iterations << ','
        << Num(cell.end_to_end) << ',' << Num(cell.baseline_end_to_end);
    if (timing) out << ',' << Num(cell.optimize_seconds);
    out << "\n";
  }
  return out.str();
}

std::string CompareJson(const std::vector<CompareCell>& cells, bool timing) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kCompareSchemaVersion;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& cell : cells) {
    nlohmann::ordered_json entry;
    entry["selector"] = std::string(SelectorName(cell.selector));
    entry["orderer"] = std::string(OrdererName(cell.orderer));
    entry["seed"] = cell.seed;
    entry["status"] = Status(cell);
    entry["termination"] = std::string(TerminationName(cell.termination));
    entry["total_score"] = cell.total_score;
    entry["peak_memory_bytes"] = cell.peak_memory;
    entry["feasible"] = cell.feasible;
    entry["iterations"] = cell.iterations;
    entry["end_to_end_seconds"] = cell.end_to_end;
    entry["baseline_end_to_end_seconds"] = cell.baseline_end_to_end;
    if (timing) entry["optimize_seconds"] = cell.optimize_seconds;
    if (!cell.error.empty()) entry["error"] = cell.error;
    doc["cells"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string CompareTable(const std::vector<CompareCell>& cells, bool timing) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-10s %5s %14s %14s %8s", "selector",
                "orderer", "runs", "mean_score", "mean_e2e_s", "infeas");
  out << line;
  if (timing) out << "    mean_opt_s";
  out << "\n";
  for (const auto& s : Summarize(cells)) {
    std::snprintf(line, sizeof(line), "%-8s %-10s %5d %14.3f %14.3f %8d",
                  std::string(SelectorName(s.selector)).c_str(),
                  std::string(OrdererName(s.orderer)).c_str(), s.runs,
                  s.mean_score, s.mean_end_to_end, s.order_infeasible);
    out << line;
    if (timing) {
      std::snprintf(line, sizeof(line), " %13.4f", s.mean_optimize_seconds);
      out << line;
    }
    if (s.failures > 0) out << "  (" << s.failures << " failed)";
    out << "\n";
  }
  return out.str();
}

}  // namespace screfresh
