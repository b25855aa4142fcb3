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

#ifndef SCREFRESH_ALTERNATING_H_
#define SCREFRESH_ALTERNATING_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "screfresh/graph.h"
#include "screfresh/ordering.h"
#include "screfresh/selection.h"

namespace screfresh {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct OptimizeConfig {
  Selector selector = Selector::kMkp;
  Orderer orderer = Orderer::kMadfs;
  TopoStrategy initial_strategy = TopoStrategy::kBfsLayered;
  // Overrides initial_strategy when set.
  std::optional<ExecOrder> initial_order;
  std::uint64_t seed = kDefaultSeed;
  int sa_iterations = 10'000;
  int max_iterations = 25;
  MkpOptions mkp;
};

enum class Termination {
  kNoImprovement,   // the selector found nothing better for the current order
  kOrderViolation,  // the new order breaks the budget for the current flags
  kIterationCap,
};

std::string_view TerminationName(Termination t);

struct IterationRecord {
  int iteration = 0;  // 1-based
  // Selector output for the order held at the start of the iteration.
  FlagSet candidate;
  double candidate_score = 0.0;
  Bytes candidate_size = 0;
  // Alternative stopping test: does the candidate hold strictly more bytes
  // than the current flags? Logged only; termination uses the score.
  bool size_increased = false;
  bool score_increased = false;
  bool mkp_timed_out = false;
  // Reordering outcome, present when the candidate was accepted.
  std::optional<Bytes> reordered_peak;
  bool order_accepted = false;
  // Plan held at the end of the iteration.
  ExecOrder order;
  FlagSet flagged;
  double total_score = 0.0;
  Bytes peak_memory = 0;
  double avg_memory = 0.0;
};

struct OptimizeResult {
  Plan plan;
  int iterations = 0;
  Termination termination = Termination::kNoImprovement;
  bool mkp_timed_out = false;
  std::vector<IterationRecord> trace;
};

// Alternates node selection for a fixed order with reordering for fixed
// flags, starting from a topological order and no flags. Stops when the
// selector cannot raise the total score or the new order violates the budget,
// returning the last plan that was accepted. Throws std::invalid_argument for
// a negative budget.
OptimizeResult Optimize(const DepGraph& g, Bytes budget,
                        const OptimizeConfig& config = {});

class TooLargeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kBruteForceMaxNodes = 10;

struct JointOptimum {
  double total_score = 0.0;
  FlagSet flagged;
  ExecOrder order;
};

// Exact optimum over all flag sets and all topological orders. Flag sets are
// tried in descending score order; each is checked for a feasible order by
// dynamic programming over predecessor-closed node sets. Throws TooLargeError
// above kBruteForceMaxNodes nodes.
JointOptimum BruteForceJoint(const DepGraph& g, Bytes budget);

}  // namespace screfresh

#endif  // SCREFRESH_ALTERNATING_H_
