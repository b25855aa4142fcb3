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

// Synthetic refresh workloads shaped like staged query plans.
//
// Nodes are laid out in stages (height = stage count, width = mean nodes per
// stage). Stage 0 holds base-table scans sized from a pool; every later node
// gets an operator from a fixed Markov chain over its first parent's operator,
// parents from earlier stages (mostly the previous one), and an output size
// derived from its parents by the operator's multiplier.

#ifndef SCREFRESH_WORKGEN_H_
#define SCREFRESH_WORKGEN_H_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "screfresh/cost_model.h"
#include "screfresh/graph.h"

namespace screfresh {

enum class OpKind { kJoin, kAgg, kFilter, kProject };
inline constexpr int kOpKindCount = 4;

std::string_view OpKindName(OpKind op);

struct SizeMultipliers {
  double join = 1.2;     // x max parent
  double agg = 0.1;      // x sum of parents
  double filter = 0.3;   // x sum of parents
  double project = 0.6;  // x sum of parents
};

// Output size of a node with operator `op` over parents of the given sizes.
Bytes DeriveSize(OpKind op, const std::vector<Bytes>& parent_sizes,
                 const SizeMultipliers& multipliers = {});

// 24 sizes between 1 MB and 10 GB.
const std::vector<Bytes>& DefaultSourceSizePool();

struct GenParams {
  int node_count = 50;
  double height_width_ratio = 1.0;
  int max_outdegree = 3;
  double stage_stdev = 1.0;
  std::vector<Bytes> source_size_pool = DefaultSourceSizePool();
  std::uint64_t seed = 1;
  SizeMultipliers multipliers;
  // Throughput used to derive per-node compute seconds from input + output
  // bytes.
  double compute_bytes_per_second = 2e9;
  CostModel cost_model;
};

class InfeasibleParamsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Deterministic per seed. Throws InfeasibleParamsError.
GraphSpec Generate(const GenParams& params);

// Stage count and mean stage width implied by node_count and the ratio.
struct StageShape {
  int stages = 1;
  double width = 1.0;
};
StageShape ShapeFor(int node_count, double height_width_ratio);

}  // namespace screfresh

#endif  // SCREFRESH_WORKGEN_H_
