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

#include "screfresh/workgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace screfresh {

namespace {

// Rows: operator of the first parent (scan, join, agg, filter, project).
// Columns: next operator (join, agg, filter, project).
constexpr std::array<std::array<double, kOpKindCount>, kOpKindCount + 1>
    kTransitions = {{
        {0.45, 0.10, 0.30, 0.15},  // scan
        {0.35, 0.30, 0.15, 0.20},  // join
        {0.20, 0.40, 0.15, 0.25},  // agg
        {0.45, 0.25, 0.10, 0.20},  // filter
        {0.30, 0.40, 0.15, 0.15},  // project
    }};
constexpr int kScanState = 0;

constexpr double kPreviousStageBias = 0.7;
constexpr double kWideJoinProbability = 0.2;

std::string Label(int index, int count) {
  const int digits = static_cast<int>(std::to_string(std::max(count - 1, 0)).size());
  std::string num = std::to_string(index);
  return "n" + std::string(digits - num.size(), '0') + num;
}

}  // namespace

std::string_view OpKindName(OpKind op) {
  switch (op) {
    case OpKind::kJoin:
      return "JOIN";
    case OpKind::kAgg:
      return "AGG";
    case OpKind::kFilter:
      return "FILTER";
    case OpKind::kProject:
      return "PROJECT";
  }
  return "UNKNOWN";
}

Bytes DeriveSize(OpKind op, const std::vector<Bytes>& parent_sizes,
                 const SizeMultipliers& multipliers) {
  if (parent_sizes.empty()) return 1;
  const double sum = static_cast<double>(
      std::accumulate(parent_sizes.begin(), parent_sizes.end(), Bytes{0}));
  const double max = static_cast<double>(
      *std::max_element(parent_sizes.begin(), parent_sizes.end()));
  double out = 0.0;
  switch (op) {
    case OpKind::kJoin:
      out = multipliers.join * max;
      break;
    case OpKind::kAgg:
      out = multipliers.agg * sum;
      break;
    case OpKind::kFilter:
      out = multipliers.filter * sum;
      break;
    case OpKind::kProject:
      out = multipliers.project * sum;
      break;
  }
  return std::max<Bytes>(1, std::llround(out));
}

const std::vector<Bytes>& DefaultSourceSizePool() {
  static const std::vector<Bytes> pool = {
      1'000'000,      2'000'000,      4'000'000,      8'000'000,
      15'000'000,     25'000'000,     40'000'000,     60'000'000,
      90'000'000,     130'000'000,    180'000'000,    250'000'000,
      350'000'000,    500'000'000,    700'000'000,    900'000'000,
      1'200'000'000,  1'600'000'000,  2'100'000'000,  2'800'000'000,
      3'700'000'000,  5'000'000'000,  7'000'000'000,  10'000'000'000,
  };
  return pool;
}

StageShape ShapeFor(int node_count, double height_width_ratio) {
  StageShape shape;
  shape.width = std::max(1.0, std::sqrt(node_count / height_width_ratio));
  shape.stages = std::max(1, static_cast<int>(std::lround(node_count / shape.width)));
  return shape;
}

GraphSpec Generate(const GenParams& params) {
  if (params.node_count < 1) {
    throw InfeasibleParamsError("node_count must be at least 1");
  }
  if (!(params.height_width_ratio > 0.0) || std::isinf(params.height_width_ratio)) {
    throw InfeasibleParamsError("height_width_ratio must be positive");
  }
  if (params.max_outdegree < 0) {
    throw InfeasibleParamsError("max_outdegree must be >= 0");
  }
  if (!(params.stage_stdev >= 0.0)) {
    throw InfeasibleParamsError("stage_stdev must be >= 0");
  }
  if (params.source_size_pool.empty() ||
      std::any_of(params.source_size_pool.begin(), params.source_size_pool.end(),
                  [](Bytes b) { return b <= 0; })) {
    throw InfeasibleParamsError("source_size_pool must hold positive sizes");
  }
  if (!(params.compute_bytes_per_second > 0.0)) {
    throw InfeasibleParamsError("compute_bytes_per_second must be positive");
  }
  params.cost_model.Validate();

  const int n = params.node_count;
  std::mt19937_64 rng(params.seed);
  const StageShape shape = ShapeFor(n, params.height_width_ratio);

  std::vector<int> stage_of;
  stage_of.reserve(n);
  std::normal_distribution<double> stage_width(shape.width, params.stage_stdev);
  for (int stage = 0; static_cast<int>(stage_of.size()) < n; ++stage) {
    const double drawn = params.stage_stdev > 0.0 ? stage_width(rng) : shape.width;
    const int count = std::max(1, static_cast<int>(std::lround(drawn)));
    for (int i = 0; i < count && static_cast<int>(stage_of.size()) < n; ++i) {
      stage_of.push_back(stage);
    }
  }
  const int first_stage = static_cast<int>(
      std::count(stage_of.begin(), stage_of.end(), 0));
  if (params.max_outdegree == 0 && n > first_stage) {
    throw InfeasibleParamsError(
        "max_outdegree 0 leaves " + std::to_string(n - first_stage) +
        " nodes beyond the source stage without parents");
  }

  std::uniform_int_distribution<int> outdegree_cap(0, params.max_outdegree);
  std::uniform_int_distribution<size_t> pool_pick(
      0, params.source_size_pool.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<int> remaining(n);
  for (int v = 0; v < n; ++v) remaining[v] = outdegree_cap(rng);
  std::vector<int> state(n, kScanState);  // Markov state: 0 scan, 1 + OpKind
  std::vector<Bytes> size(n, 0);
  std::vector<std::vector<int>> parents(n);

  auto draw_parent = [&](int v, const std::vector<int>& taken) -> int {
    std::vector<int> previous, earlier;
    for (int u = 0; u < v; ++u) {
      if (stage_of[u] >= stage_of[v] || remaining[u] == 0) continue;
      if (std::find(taken.begin(), taken.end(), u) != taken.end()) continue;
      earlier.push_back(u);
      if (stage_of[u] == stage_of[v] - 1) previous.push_back(u);
    }
    if (earlier.empty()) return -1;
    const auto& pool =
        (!previous.empty() && unit(rng) < kPreviousStageBias) ? previous : earlier;
    return pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
  };

  for (int v = 0; v < n; ++v) {
    const int first = stage_of[v] == 0 ? -1 : draw_parent(v, {});
    if (first < 0) {
      size[v] = params.source_size_pool[pool_pick(rng)];
      continue;
    }
    const auto& row = kTransitions[state[first]];
    std::discrete_distribution<int> next_op(row.begin(), row.end());
    const OpKind op = static_cast<OpKind>(next_op(rng));
    state[v] = 1 + static_cast<int>(op);
    parents[v].push_back(first);
    --remaining[first];
    if (op == OpKind::kJoin) {
      const int wanted = unit(rng) < kWideJoinProbability ? 3 : 2;
      while (static_cast<int>(parents[v].size()) < wanted) {
        const int extra = draw_parent(v, parents[v]);
        if (extra < 0) break;
        parents[v].push_back(extra);
        --remaining[extra];
      }
    }
    std::vector<Bytes> parent_sizes;
    for (int p : parents[v]) parent_sizes.push_back(size[p]);
    size[v] = DeriveSize(op, parent_sizes, params.multipliers);
  }

  GraphSpec spec;
  for (int v = 0; v < n; ++v) {
    NodeMeta meta;
    meta.id = Label(v, n);
    meta.size = size[v];
    double input = 0.0;
    for (int p : parents[v]) input += static_cast<double>(size[p]);
    if (parents[v].empty()) input = static_cast<double>(size[v]);
    meta.compute_seconds =
        (input + static_cast<double>(size[v])) / params.compute_bytes_per_second;
    spec.nodes.push_back(std::move(meta));
  }
  for (int v = 0; v < n; ++v) {
    for (int p : parents[v]) spec.edges.push_back({spec.nodes[p].id, spec.nodes[v].id});
  }
  const DepGraph g = DepGraph::FromSpec(spec);
  const std::vector<double> scores = ComputeSpeedupScores(g, params.cost_model);
  for (int v = 0; v < n; ++v) spec.nodes[v].speedup_score = scores[v];
  return spec;
}

}  // namespace screfresh
