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

#ifndef SCREFRESH_COST_MODEL_H_
#define SCREFRESH_COST_MODEL_H_

#include <limits>
#include <stdexcept>
#include <vector>

#include "screfresh/graph.h"

namespace screfresh {

inline constexpr double kInfiniteBandwidth =
    std::numeric_limits<double>::infinity();

// Bandwidths in bytes per second, latency in seconds per access.
struct CostModel {
  double disk_read_bw = 1e9;
  double disk_write_bw = 5e8;
  double mem_read_bw = kInfiniteBandwidth;
  double mem_write_bw = kInfiniteBandwidth;
  double per_access_latency = 0.0;

  // Throws std::invalid_argument unless every bandwidth is positive and the
  // memory bandwidths are at least the matching disk bandwidths.
  void Validate() const;
};

// latency + bytes / bandwidth; an infinite bandwidth costs only the latency.
double AccessTime(double bytes, double bandwidth, double latency);

// Per-node seconds saved by keeping the node's output in memory: one read
// saving per child plus the write saving of creating it in memory.
std::vector<double> ComputeSpeedupScores(const DepGraph& g,
                                         const CostModel& cm);

// Returns g with scores from the cost model for every node the workload left
// unscored; nodes that already carry a score keep it.
DepGraph FillMissingScores(const DepGraph& g, const CostModel& cm);

}  // namespace screfresh

#endif  // SCREFRESH_COST_MODEL_H_
