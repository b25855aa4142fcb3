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

#include "screfresh/cost_model.h"

#include <algorithm>
#include <cmath>

namespace screfresh {

void CostModel::Validate() const {
  auto positive = [](double bw) { return bw > 0.0; };
  if (!positive(disk_read_bw) || !positive(disk_write_bw) ||
      !positive(mem_read_bw) || !positive(mem_write_bw)) {
    throw std::invalid_argument("cost model bandwidths must be positive");
  }
  if (mem_read_bw < disk_read_bw || mem_write_bw < disk_write_bw) {
    throw std::invalid_argument(
        "memory bandwidth must be at least the matching disk bandwidth");
  }
  if (!(per_access_latency >= 0.0) || std::isinf(per_access_latency)) {
    throw std::invalid_argument("per-access latency must be finite and >= 0");
  }
}

double AccessTime(double bytes, double bandwidth, double latency) {
  if (std::isinf(bandwidth)) return latency;
  return latency + bytes / bandwidth;
}

std::vector<double> ComputeSpeedupScores(const DepGraph& g,
                                         const CostModel& cm) {
  const double lat = cm.per_access_latency;
  std::vector<double> scores(g.size(), 0.0);
  for (int v = 0; v < g.size(); ++v) {
    const double bytes = static_cast<double>(g.node_size(v));
    const double read_saving = AccessTime(bytes, cm.disk_read_bw, lat) -
                               AccessTime(bytes, cm.mem_read_bw, lat);
    const double write_saving = AccessTime(bytes, cm.disk_write_bw, lat) -
                                AccessTime(bytes, cm.mem_write_bw, lat);
    const double fanout = static_cast<double>(g.children(v).size());
    // Clamp away rounding noise when memory and disk bandwidths coincide.
    scores[v] = std::max(0.0, fanout * read_saving + write_saving);
  }
  return scores;
}

DepGraph FillMissingScores(const DepGraph& g, const CostModel& cm) {
  if (g.AllScored()) return g;
  std::vector<double> derived = ComputeSpeedupScores(g, cm);
  for (int v = 0; v < g.size(); ++v) {
    if (g.has_score(v)) derived[v] = g.score(v);
  }
  return g.WithScores(std::move(derived));
}

}  // namespace screfresh
