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

// Choosing which node outputs to keep in memory for a fixed execution order.
//
// For an order, every slot i has a resident set: the flag-eligible nodes whose
// hold span covers i. Keeping the flagged bytes of every resident set within
// the budget is exactly the peak-memory constraint, so the selection problem
// is a multidimensional 0-1 knapsack with one row per resident set. Rows that
// are subsets of another row, or that cannot overflow even with every member
// flagged, are dropped before solving.

#ifndef SCREFRESH_SELECTION_H_
#define SCREFRESH_SELECTION_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "screfresh/graph.h"

namespace screfresh {

struct ConstraintSet {
  int position = 0;  // 1-based slot the set was observed at
  std::vector<NodeIndex> members;  // ascending index
};

struct ConstraintFamily {
  std::vector<ConstraintSet> sets;
  // Nodes that can never be usefully flagged: larger than the budget or with a
  // zero score.
  std::vector<NodeIndex> excluded;
  std::vector<NodeIndex> eligible;
};

// Maximal, non-trivial resident sets in one linear scan over the slots.
ConstraintFamily DeriveConstraints(const DepGraph& g, const ExecOrder& order,
                                   Bytes budget);

// Every non-empty per-slot resident set, with no pruning at all.
ConstraintFamily DeriveRawConstraints(const DepGraph& g,
                                      const ExecOrder& order, Bytes budget);

// Scores are seconds; profits are whole milliseconds, at least 1.
std::int64_t ScoreToProfit(double seconds);

struct MkpRow {
  std::vector<int> vars;
  std::vector<std::int64_t> weights;  // parallel to vars
  std::int64_t capacity = 0;
};

struct MkpInstance {
  std::vector<std::int64_t> profits;
  std::vector<MkpRow> rows;
  // Node behind each variable, when built from a graph.
  std::vector<NodeIndex> nodes;

  int variable_count() const { return static_cast<int>(profits.size()); }
};

// One variable per node that appears in some set of `family`.
MkpInstance BuildMkpInstance(const DepGraph& g, const ConstraintFamily& family,
                             Bytes budget);

struct MkpOptions {
  std::int64_t node_limit = 10'000'000;
};

struct MkpSolution {
  std::vector<char> take;
  std::int64_t objective = 0;
  // The node limit was hit; `take` is the best incumbent, not a proven optimum.
  bool timed_out = false;
  std::int64_t nodes_expanded = 0;
};

// Exact depth-first branch and bound.
MkpSolution SolveMkp(const MkpInstance& instance, const MkpOptions& options = {});

struct Selection {
  FlagSet flagged;
  bool timed_out = false;
};

// MKP over the pruned family, plus every eligible node that sits in no
// retained set.
Selection SelectNodesMkp(const DepGraph& g, Bytes budget,
                         const ExecOrder& order,
                         const MkpOptions& options = {});

// Visit nodes in execution order; flag each one that keeps the peak within
// the budget.
FlagSet SelectNodesGreedy(const DepGraph& g, Bytes budget,
                          const ExecOrder& order);

// Same admission rule, visiting nodes in a seeded random order.
FlagSet SelectNodesRandom(const DepGraph& g, Bytes budget,
                          const ExecOrder& order, std::uint64_t seed);

// Same admission rule, visiting nodes by descending score/size. Zero-size
// nodes come first.
FlagSet SelectNodesRatio(const DepGraph& g, Bytes budget,
                         const ExecOrder& order);

enum class Selector { kMkp, kGreedy, kRandom, kRatio };

std::string_view SelectorName(Selector s);
// Throws std::invalid_argument.
Selector ParseSelector(std::string_view name);

}  // namespace screfresh

#endif  // SCREFRESH_SELECTION_H_
