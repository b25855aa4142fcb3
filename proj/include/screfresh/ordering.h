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

#ifndef SCREFRESH_ORDERING_H_
#define SCREFRESH_ORDERING_H_

#include <cstdint>
#include <string_view>

#include "screfresh/graph.h"

namespace screfresh {

// Memory-aware DFS scheduling. Among ready nodes, pick the one with the
// smallest actual memory consumption (its size if flagged, else 0); among
// equals, the one that became ready most recently, so a branch is finished
// before an older one is resumed; then the smallest label.
ExecOrder OrderMadfs(const DepGraph& g, const FlagSet& flagged);

struct SaOptions {
  int iterations = 10'000;
  std::uint64_t seed = 0;
  // Start temperature as a fraction of the initial average memory usage.
  double initial_temperature_ratio = 0.1;
  double cooling = 0.999;
};

// Simulated annealing over swaps of adjacent, independent nodes, minimising
// average memory usage. Returns the best order visited, which is never worse
// than `initial`.
ExecOrder OrderSa(const DepGraph& g, const FlagSet& flagged,
                  const ExecOrder& initial, const SaOptions& options = {});

struct SeparatorResult {
  ExecOrder order;
  Bytes peak_memory = 0;
  // Whether peak_memory fits the budget. The separator ignores the budget
  // while ordering, so an infeasible order is a normal outcome.
  bool feasible = true;
};

// Recursive bisection by directed cuts: weakly connected components are
// ordered one after another; a connected part is split into a predecessor-
// closed half and the rest, choosing the cut (within 25% of an even split)
// that leaves the fewest flagged bytes waiting on the other side.
SeparatorResult OrderSeparator(const DepGraph& g, Bytes budget,
                               const FlagSet& flagged);

enum class Orderer { kMadfs, kSa, kSeparator };

std::string_view OrdererName(Orderer o);
// Throws std::invalid_argument.
Orderer ParseOrderer(std::string_view name);

}  // namespace screfresh

#endif  // SCREFRESH_ORDERING_H_
