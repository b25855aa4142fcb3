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

#include "screfresh/graph.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace screfresh {

namespace {

std::string JoinCycle(const std::vector<std::string>& cycle) {
  std::string out;
  for (const auto& label : cycle) {
    out += label;
    out += " -> ";
  }
  if (!cycle.empty()) out += cycle.front();
  return out;
}

// Iterative three-colour DFS. Returns the labels of one cycle, or empty.
std::vector<std::string> FindCycle(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<int>>& children) {
  const int n = static_cast<int>(labels.size());
  std::vector<char> colour(n, 0);
  std::vector<int> parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (colour[root] != 0) continue;
    std::vector<std::pair<int, size_t>> stack = {{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < children[v].size()) {
        const int c = children[v][next++];
        if (colour[c] == 0) {
          colour[c] = 1;
          parent[c] = v;
          stack.emplace_back(c, 0);
        } else if (colour[c] == 1) {
          std::vector<std::string> cycle;
          for (int w = v; w != c; w = parent[w]) cycle.push_back(labels[w]);
          cycle.push_back(labels[c]);
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
      } else {
        colour[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : GraphError("dependency cycle: " + JoinCycle(cycle)),
      cycle_(std::move(cycle)) {}

void ValidateGraph(const GraphSpec& spec) {
  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;
  for (const auto& node : spec.nodes) {
    if (!index.emplace(node.id, static_cast<int>(labels.size())).second) {
      throw DuplicateIdError("duplicate node id \"" + node.id + "\"");
    }
    labels.push_back(node.id);
    if (node.size < 0) {
      throw GraphError("node \"" + node.id + "\" has negative size");
    }
    if (node.speedup_score && !(*node.speedup_score >= 0.0)) {
      throw GraphError("node \"" + node.id + "\" has negative speedup score");
    }
    if (node.compute_seconds && !(*node.compute_seconds >= 0.0)) {
      throw GraphError("node \"" + node.id + "\" has negative compute time");
    }
  }
  std::vector<std::vector<int>> children(labels.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& edge : spec.edges) {
    auto p = index.find(edge.parent);
    auto c = index.find(edge.child);
    if (p == index.end() || c == index.end()) {
      const std::string& missing =
          p == index.end() ? edge.parent : edge.child;
      throw DanglingEdgeError("edge " + edge.parent + " -> " + edge.child +
                              " references unknown node \"" + missing + "\"");
    }
    if (p->second == c->second) throw CycleError({edge.parent});
    if (!seen.emplace(p->second, c->second).second) {
      throw DuplicateIdError("duplicate edge " + edge.parent + " -> " +
                             edge.child);
    }
    children[p->second].push_back(c->second);
  }
  auto cycle = FindCycle(labels, children);
  if (!cycle.empty()) throw CycleError(std::move(cycle));
}

DepGraph DepGraph::FromSpec(const GraphSpec& spec) {
  ValidateGraph(spec);
  DepGraph g;
  const int n = static_cast<int>(spec.nodes.size());
  g.labels_.reserve(n);
  for (const auto& node : spec.nodes) {
    g.index_.emplace(node.id, static_cast<int>(g.labels_.size()));
    g.labels_.push_back(node.id);
    g.sizes_.push_back(node.size);
    g.scores_.push_back(node.speedup_score.value_or(0.0));
    g.has_score_.push_back(node.speedup_score.has_value());
    g.compute_.push_back(node.compute_seconds.value_or(0.0));
    g.has_compute_.push_back(node.compute_seconds.has_value());
  }
  std::vector<int> by_label(n);
  std::iota(by_label.begin(), by_label.end(), 0);
  std::sort(by_label.begin(), by_label.end(),
            [&](int a, int b) { return g.labels_[a] < g.labels_[b]; });
  g.label_rank_.assign(n, 0);
  for (int r = 0; r < n; ++r) g.label_rank_[by_label[r]] = r;

  g.children_.assign(n, {});
  g.parents_.assign(n, {});
  for (const auto& edge : spec.edges) {
    const int p = g.index_.at(edge.parent);
    const int c = g.index_.at(edge.child);
    g.children_[p].push_back(c);
    g.parents_[c].push_back(p);
  }
  auto by_rank = [&](int a, int b) { return g.label_rank_[a] < g.label_rank_[b]; };
  for (int v = 0; v < n; ++v) {
    std::sort(g.children_[v].begin(), g.children_[v].end(), by_rank);
    std::sort(g.parents_[v].begin(), g.parents_[v].end(), by_rank);
  }
  for (int v = 0; v < n; ++v) {
    for (int c : g.children_[v]) g.edges_.emplace_back(v, c);
  }
  return g;
}

bool DepGraph::HasEdge(NodeIndex parent, NodeIndex child) const {
  const auto& kids = children_[parent];
  return std::binary_search(
      kids.begin(), kids.end(), child,
      [&](int a, int b) { return label_rank_[a] < label_rank_[b]; });
}

std::optional<NodeIndex> DepGraph::Find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex DepGraph::IndexOf(const std::string& label) const {
  auto v = Find(label);
  if (!v) throw UnknownNodeError("unknown node \"" + label + "\"");
  return *v;
}

DepGraph DepGraph::WithScores(std::vector<double> scores) const {
  if (static_cast<int>(scores.size()) != size()) {
    throw std::invalid_argument("score vector does not match node count");
  }
  DepGraph copy = *this;
  copy.scores_ = std::move(scores);
  copy.has_score_.assign(size(), 1);
  return copy;
}

bool DepGraph::AllScored() const {
  return std::all_of(has_score_.begin(), has_score_.end(),
                     [](char c) { return c != 0; });
}

Bytes DepGraph::TotalSize() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), Bytes{0});
}

GraphSpec DepGraph::ToSpec() const {
  GraphSpec spec;
  for (int v = 0; v < size(); ++v) {
    NodeMeta meta;
    meta.id = labels_[v];
    meta.size = sizes_[v];
    if (has_score_[v]) meta.speedup_score = scores_[v];
    if (has_compute_[v]) meta.compute_seconds = compute_[v];
    spec.nodes.push_back(std::move(meta));
  }
  for (const auto& [p, c] : edges_) {
    spec.edges.push_back({labels_[p], labels_[c]});
  }
  return spec;
}

ExecOrder::ExecOrder(std::vector<NodeIndex> sequence)
    : sequence_(std::move(sequence)), slot_(sequence_.size(), -1) {
  const int n = static_cast<int>(sequence_.size());
  for (int k = 0; k < n; ++k) {
    const NodeIndex v = sequence_[k];
    if (v < 0 || v >= n || slot_[v] != -1) {
      throw std::invalid_argument("execution order is not a permutation");
    }
    slot_[v] = k;
  }
}

FlagSet::FlagSet(int node_count, std::span<const NodeIndex> members)
    : member_(node_count, 0) {
  for (NodeIndex v : members) Insert(v);
}

void FlagSet::Insert(NodeIndex v) {
  if (member_[v] == 0) {
    member_[v] = 1;
    ++count_;
  }
}

void FlagSet::Erase(NodeIndex v) {
  if (member_[v] != 0) {
    member_[v] = 0;
    --count_;
  }
}

std::vector<NodeIndex> FlagSet::Members() const {
  std::vector<NodeIndex> out;
  out.reserve(count_);
  for (int v = 0; v < universe(); ++v) {
    if (member_[v] != 0) out.push_back(v);
  }
  return out;
}

ExecOrder TopoOrder(const DepGraph& g, TopoStrategy strategy) {
  const int n = g.size();
  std::vector<int> pending(n);
  for (int v = 0; v < n; ++v) pending[v] = static_cast<int>(g.parents(v).size());
  auto by_rank = [&](int a, int b) { return g.label_rank(a) < g.label_rank(b); };
  std::vector<NodeIndex> out;
  out.reserve(n);

  if (strategy == TopoStrategy::kBfsLayered) {
    std::vector<int> layer;
    for (int v = 0; v < n; ++v) {
      if (pending[v] == 0) layer.push_back(v);
    }
    while (!layer.empty()) {
      std::sort(layer.begin(), layer.end(), by_rank);
      std::vector<int> next;
      for (int v : layer) {
        out.push_back(v);
        for (int c : g.children(v)) {
          if (--pending[c] == 0) next.push_back(c);
        }
      }
      layer = std::move(next);
    }
    return ExecOrder(std::move(out));
  }

  auto later = [&](int a, int b) { return g.label_rank(a) > g.label_rank(b); };
  std::priority_queue<int, std::vector<int>, decltype(later)> ready(later);
  for (int v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    out.push_back(v);
    for (int c : g.children(v)) {
      if (--pending[c] == 0) ready.push(c);
    }
  }
  return ExecOrder(std::move(out));
}

bool IsTopological(const DepGraph& g, const ExecOrder& order) {
  if (order.size() != g.size()) return false;
  for (const auto& [p, c] : g.edges()) {
    if (order.SlotOf(p) >= order.SlotOf(c)) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> HoldSlots(const DepGraph& g,
                                           const ExecOrder& order) {
  std::vector<std::pair<int, int>> spans(g.size());
  for (int v = 0; v < g.size(); ++v) {
    const int start = order.SlotOf(v);
    int end = start;
    for (int c : g.children(v)) end = std::max(end, order.SlotOf(c));
    spans[v] = {start, end};
  }
  return spans;
}

HoldSpan GetHoldSpan(const DepGraph& g, const ExecOrder& order, NodeIndex v) {
  if (v < 0 || v >= g.size()) {
    throw UnknownNodeError("node index " + std::to_string(v) +
                           " out of range");
  }
  int end = order.SlotOf(v);
  for (int c : g.children(v)) end = std::max(end, order.SlotOf(c));
  return {order.PositionOf(v), end + 1};
}

Bytes PeakMemory(const DepGraph& g, const ExecOrder& order,
                 const FlagSet& flagged) {
  if (flagged.empty()) return 0;
  const int n = g.size();
  std::vector<Bytes> delta(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    if (!flagged.Contains(v)) continue;
    const int start = order.SlotOf(v);
    int end = start;
    for (int c : g.children(v)) end = std::max(end, order.SlotOf(c));
    delta[start] += g.node_size(v);
    delta[end + 1] -= g.node_size(v);
  }
  Bytes running = 0;
  Bytes peak = 0;
  for (int k = 0; k < n; ++k) {
    running += delta[k];
    peak = std::max(peak, running);
  }
  return peak;
}

double AvgMemoryUsage(const DepGraph& g, const ExecOrder& order,
                      const FlagSet& flagged) {
  const int n = g.size();
  if (n == 0 || flagged.empty()) return 0.0;
  double byte_slots = 0.0;
  for (int v = 0; v < n; ++v) {
    if (!flagged.Contains(v)) continue;
    const int start = order.SlotOf(v);
    int end = start;
    for (int c : g.children(v)) end = std::max(end, order.SlotOf(c));
    byte_slots += static_cast<double>(end - start) *
                  static_cast<double>(g.node_size(v));
  }
  return byte_slots / n;
}

double TotalScore(const DepGraph& g, const FlagSet& flagged) {
  double total = 0.0;
  for (int v = 0; v < g.size(); ++v) {
    if (flagged.Contains(v)) total += g.score(v);
  }
  return total;
}

Bytes TotalFlaggedSize(const DepGraph& g, const FlagSet& flagged) {
  Bytes total = 0;
  for (int v = 0; v < g.size(); ++v) {
    if (flagged.Contains(v)) total += g.node_size(v);
  }
  return total;
}

}  // namespace screfresh
