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

// Discrete-event model of one refresh run.
//
// Nodes run one at a time on a single compute lane, in plan order. A node
// reads every parent (from the memory catalog when the parent is flagged,
// otherwise from disk), computes, and writes its output: to disk when
// unflagged, to the catalog when flagged. A flagged output is also persisted
// by a single background lane, FIFO, at disk write bandwidth; persisting starts
// when the output starts being produced. A catalog entry is released once all
// of its dependents finished and it has been persisted.

#ifndef SCREFRESH_SIMULATOR_H_
#define SCREFRESH_SIMULATOR_H_

#include <optional>
#include <string_view>
#include <vector>

#include "screfresh/cost_model.h"
#include "screfresh/graph.h"

namespace screfresh {

enum class EventKind {
  kComputeStart,
  kRead,
  kComputeEnd,
  kMemWriteEnd,
  kMaterializeStart,
  kMaterializeEnd,
  kCatalogFree,
};

std::string_view EventKindName(EventKind kind);

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::kComputeStart;
  NodeIndex node = 0;
  // For kRead: the parent being read and whether it came from memory.
  std::optional<NodeIndex> source;
  bool from_memory = false;
};

struct SimReport {
  double end_to_end = 0.0;
  double baseline_end_to_end = 0.0;
  double realized_savings = 0.0;
  Bytes model_peak = 0;
  Bytes realized_peak = 0;
  Bytes budget = 0;
  bool memory_violation = false;
  std::vector<SimEvent> events;  // time-ordered
};

// Sequential run with nothing kept in memory. Independent of the order.
double BaselineTime(const DepGraph& g, const CostModel& cm);

// Throws std::invalid_argument if the plan's order is not topological.
SimReport Simulate(const DepGraph& g, const Plan& plan, const CostModel& cm,
                   Bytes budget);

}  // namespace screfresh

#endif  // SCREFRESH_SIMULATOR_H_
