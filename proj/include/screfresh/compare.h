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

#ifndef SCREFRESH_COMPARE_H_
#define SCREFRESH_COMPARE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "screfresh/alternating.h"
#include "screfresh/cost_model.h"
#include "screfresh/graph.h"

namespace screfresh {

// Bumped whenever the CSV columns change.
inline constexpr int kCompareSchemaVersion = 1;

struct CompareOptions {
  Bytes budget = 0;
  CostModel cost_model;
  std::vector<std::uint64_t> seeds = {kDefaultSeed};
  int sa_iterations = 10'000;
};

struct CompareCell {
  Selector selector = Selector::kMkp;
  Orderer orderer = Orderer::kMadfs;
  std::uint64_t seed = 0;
  double total_score = 0.0;
  Bytes peak_memory = 0;
  bool feasible = true;
  // Some order proposed by the orderer broke the budget.
  bool order_infeasible = false;
  bool mkp_timed_out = false;
  Termination termination = Termination::kNoImprovement;
  int iterations = 0;
  double end_to_end = 0.0;
  double baseline_end_to_end = 0.0;
  double optimize_seconds = 0.0;
  std::string error;  // non-empty when the cell failed
};

// Every selector x orderer pairing through alternating optimisation, once
// per seed, each plan simulated under the cost model. Cells are ordered by
// (selector, orderer, seed).
std::vector<CompareCell> RunCompare(const DepGraph& g,
                                    const CompareOptions& options);

struct PairSummary {
  Selector selector;
  Orderer orderer;
  int runs = 0;
  double mean_score = 0.0;
  double mean_end_to_end = 0.0;
  double mean_optimize_seconds = 0.0;
  int order_infeasible = 0;
  int failures = 0;
};

std::vector<PairSummary> Summarize(const std::vector<CompareCell>& cells);

// Wall-clock columns are only emitted when `timing` is set, so the default
// output is byte-identical across runs.
std::string CompareCsv(const std::vector<CompareCell>& cells, bool timing);
std::string CompareJson(const std::vector<CompareCell>& cells, bool timing);
std::string CompareTable(const std::vector<CompareCell>& cells, bool timing);

}  // namespace screfresh

#endif  // SCREFRESH_COMPARE_H_
