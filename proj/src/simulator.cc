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

#include "screfresh/simulator.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace screfresh {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kComputeStart:
      return "compute_start";
    case EventKind::kRead:
      return "read";
    case EventKind::kComputeEnd:
      return "compute_end";
    case EventKind::kMemWriteEnd:
      return "mem_write_end";
    case EventKind::kMaterializeStart:
      return "materialize_start";
    case EventKind::kMaterializeEnd:
      return "materialize_end";
    case EventKind::kCatalogFree:
      return "catalog_free";
  }
  return "unknown";
}

namespace {

struct LaneRun {
  double end_to_end = 0.0;
  Bytes realized_peak = 0;
  std::vector<SimEvent> events;
};

LaneRun RunLanes(const DepGraph& g, const ExecOrder& order,
                 const FlagSet& flagged, const CostModel& cm) {
  const int n = g.size();
  const double lat = cm.per_access_latency;
  LaneRun run;
  std::vector<double> write_start(n), end(n), slot_end(n);
  double clock = 0.0;
  for (int k = 0; k < n; ++k) {
    const NodeIndex v = order.at(k);
    run.events.push_back({clock, EventKind::kComputeStart, v, std::nullopt, false});
    for (NodeIndex p : g.parents(v)) {
      const bool in_memory = flagged.Contains(p);
      run.events.push_back({clock, EventKind::kRead, v, p, in_memory});
      const double bytes = static_cast<double>(g.node_size(p));
      clock += AccessTime(bytes, in_memory ? cm.mem_read_bw : cm.disk_read_bw,
                          lat);
    }
    clock += g.compute_seconds(v);
    write_start[v] = clock;
    const double bytes = static_cast<double>(g.node_size(v));
    clock += AccessTime(
        bytes, flagged.Contains(v) ? cm.mem_write_bw : cm.disk_write_bw, lat);
    end[v] = clock;
    slot_end[k] = clock;
    if (flagged.Contains(v)) {
      run.events.push_back({clock, EventKind::kMemWriteEnd, v, std::nullopt, false});
    }
    run.events.push_back({clock, EventKind::kComputeEnd, v, std::nullopt, false});
  }
  run.end_to_end = clock;

  // Background persistence, FIFO in creation order.
  std::vector<double> persisted(n, 0.0);
  double lane_free = 0.0;
  for (int k = 0; k < n; ++k) {
    const NodeIndex v = order.at(k);
    if (!flagged.Contains(v)) continue;
    const double start = std::max(write_start[v], lane_free);
    const double bytes = static_cast<double>(g.node_size(v));
    lane_free = start + AccessTime(bytes, cm.disk_write_bw, lat);
    persisted[v] = lane_free;
    run.events.push_back({start, EventKind::kMaterializeStart, v, std::nullopt, false});
    run.events.push_back({lane_free, EventKind::kMaterializeEnd, v, std::nullopt, false});
    run.end_to_end = std::max(run.end_to_end, lane_free);
  }

  // Catalog occupancy. Ties in time are broken by the slot an allocation or
  // release belongs to, releases after allocations of the same slot, so
  // zero-duration nodes still overlap the way their slots do.
  using Change = std::tuple<double, int, int, Bytes>;
  std::vector<Change> changes;
  for (int k = 0; k < n; ++k) {
    const NodeIndex v = order.at(k);
    if (!flagged.Contains(v)) continue;
    int last_slot = k;
    double release = end[v];
    for (NodeIndex c : g.children(v)) {
      last_slot = std::max(last_slot, order.SlotOf(c));
      release = std::max(release, end[c]);
    }
    release = std::max(release, persisted[v]);
    const int slot_at_release = static_cast<int>(
        std::lower_bound(slot_end.begin(), slot_end.end(), release) -
        slot_end.begin());
    const int tag = std::max(last_slot, slot_at_release);
    changes.emplace_back(write_start[v], k, 0, g.node_size(v));
    changes.emplace_back(release, tag, 1, -g.node_size(v));
    run.events.push_back({release, EventKind::kCatalogFree, v, std::nullopt, false});
  }
  std::sort(changes.begin(), changes.end());
  Bytes resident = 0;
  for (const auto& change : changes) {
    resident += std::get<3>(change);
    run.realized_peak = std::max(run.realized_peak, resident);
  }

  std::stable_sort(run.events.begin(), run.events.end(),
                   [](const SimEvent& a, const SimEvent& b) {
                     return a.time < b.time;
                   });
  return run;
}

}  // namespace

double BaselineTime(const DepGraph& g, const CostModel& cm) {
  const double lat = cm.per_access_latency;
  double total = 0.0;
  for (int v = 0; v < g.size(); ++v) {
    for (NodeIndex p : g.parents(v)) {
      total += AccessTime(static_cast<double>(g.node_size(p)), cm.disk_read_bw,
                          lat);
    }
    total += g.compute_seconds(v);
    total += AccessTime(static_cast<double>(g.node_size(v)), cm.disk_write_bw,
                        lat);
  }
  return total;
}

SimReport Simulate(const DepGraph& g, const Plan& plan, const CostModel& cm,
                   Bytes budget) {
  if (!IsTopological(g, plan.order)) {
    throw std::invalid_argument("plan order is not topological");
  }
  if (plan.flagged.universe() != g.size()) {
    throw std::invalid_argument("plan flag set does not match the graph");
  }
  LaneRun run = RunLanes(g, plan.order, plan.flagged, cm);
  const LaneRun baseline = RunLanes(g, plan.order, FlagSet(g.size()), cm);

  SimReport report;
  report.end_to_end = run.end_to_end;
  report.baseline_end_to_end = baseline.end_to_end;
  report.realized_savings = baseline.end_to_end - run.end_to_end;
  report.model_peak = PeakMemory(g, plan.order, plan.flagged);
  report.realized_peak = run.realized_peak;
  report.budget = budget;
  report.memory_violation = report.realized_peak > budget;
  report.events = std::move(run.events);
  return report;
}

}  // namespace screfresh
