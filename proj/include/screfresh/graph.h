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

#ifndef SCREFRESH_GRAPH_H_
#define SCREFRESH_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace screfresh {

// Dense node index. External formats use string labels; everything inside the
// library works on indices in [0, n).
using NodeIndex = int;
using Bytes = std::int64_t;

struct NodeMeta {
  std::string id;
  Bytes size = 0;
  // Seconds saved by keeping this node's output in memory. Absent when the
  // workload leaves scoring to the cost model.
  std::optional<double> speedup_score;
  std::optional<double> compute_seconds;
};

struct EdgeSpec {
  std::string parent;
  std::string child;
  bool operator==(const EdgeSpec&) const = default;
};

// Unvalidated workload description, as read from a file or produced by the
// generator.
struct GraphSpec {
  std::vector<NodeMeta> nodes;
  std::vector<EdgeSpec> edges;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public GraphError {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  // Labels along the cycle; the last element has an edge back to the first.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class DanglingEdgeError : public GraphError {
 public:
  using GraphError::GraphError;
};

class DuplicateIdError : public GraphError {
 public:
  using GraphError::GraphError;
};

class UnknownNodeError : public GraphError {
 public:
  using GraphError::GraphError;
};

// Throws CycleError, DanglingEdgeError or DuplicateIdError. Duplicate edges
// and self-loops are reported as DuplicateIdError and CycleError.
void ValidateGraph(const GraphSpec& spec);

// Immutable, validated dependency graph. Children and parents of every node
// are stored sorted by ascending label so traversals are reproducible.
class DepGraph {
 public:
  DepGraph() = default;

  // Validates `spec` and builds the adjacency structure.
  static DepGraph FromSpec(const GraphSpec& spec);

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& label(NodeIndex v) const { return labels_[v]; }
  Bytes node_size(NodeIndex v) const { return sizes_[v]; }
  double score(NodeIndex v) const { return scores_[v]; }
  bool has_score(NodeIndex v) const { return has_score_[v] != 0; }
  double compute_seconds(NodeIndex v) const { return compute_[v]; }
  bool has_compute_seconds(NodeIndex v) const { return has_compute_[v] != 0; }
  // Position of v when all nodes are sorted by label.
  int label_rank(NodeIndex v) const { return label_rank_[v]; }

  std::span<const Bytes> sizes() const { return sizes_; }
  std::span<const double> scores() const { return scores_; }
  std::span<const NodeIndex> children(NodeIndex v) const { return children_[v]; }
  std::span<const NodeIndex> parents(NodeIndex v) const { return parents_[v]; }
  const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const {
    return edges_;
  }
  bool HasEdge(NodeIndex parent, NodeIndex child) const;

  std::optional<NodeIndex> Find(const std::string& label) const;
  // Throws UnknownNodeError.
  NodeIndex IndexOf(const std::string& label) const;

  // Copy with all speedup scores replaced.
  DepGraph WithScores(std::vector<double> scores) const;
  bool AllScored() const;
  Bytes TotalSize() const;

  GraphSpec ToSpec() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Bytes> sizes_;
  std::vector<double> scores_;
  std::vector<char> has_score_;
  std::vector<double> compute_;
  std::vector<char> has_compute_;
  std::vector<int> label_rank_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<std::vector<NodeIndex>> parents_;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
  std::unordered_map<std::string, NodeIndex> index_;
};

// A permutation of the graph's nodes. Slots are 0-based internally;
// PositionOf() reports the 1-based execution position.
class ExecOrder {
 public:
  ExecOrder() = default;
  // `sequence[k]` is the node executed in slot k. Throws std::invalid_argument
  // unless it is a permutation of [0, sequence.size()).
  explicit ExecOrder(std::vector<NodeIndex> sequence);

  int size() const { return static_cast<int>(sequence_.size()); }
  NodeIndex at(int slot) const { return sequence_[slot]; }
  int SlotOf(NodeIndex v) const { return slot_[v]; }
  int PositionOf(NodeIndex v) const { return slot_[v] + 1; }
  const std::vector<NodeIndex>& sequence() const { return sequence_; }

  bool operator==(const ExecOrder& other) const {
    return sequence_ == other.sequence_;
  }

 private:
  std::vector<NodeIndex> sequence_;
  std::vector<int> slot_;
};

class FlagSet {
 public:
  FlagSet() = default;
  explicit FlagSet(int node_count) : member_(node_count, 0) {}
  FlagSet(int node_count, std::span<const NodeIndex> members);

  int universe() const { return static_cast<int>(member_.size()); }
  bool Contains(NodeIndex v) const { return member_[v] != 0; }
  void Insert(NodeIndex v);
  void Erase(NodeIndex v);
  int count() const { return count_; }
  bool empty() const { return count_ == 0; }
  // Members in ascending index order.
  std::vector<NodeIndex> Members() const;

  bool operator==(const FlagSet& other) const {
    return member_ == other.member_;
  }

 private:
  std::vector<char> member_;
  int count_ = 0;
};

struct Plan {
  ExecOrder order;
  FlagSet flagged;
  double total_score = 0.0;
  Bytes peak_memory = 0;
};

enum class TopoStrategy { kArbitrary, kBfsLayered };

// kArbitrary: Kahn's algorithm always taking the smallest ready label.
// kBfsLayered: Kahn's algorithm in rounds; each round emits every currently
// ready node in label order.
ExecOrder TopoOrder(const DepGraph& g, TopoStrategy strategy);

bool IsTopological(const DepGraph& g, const ExecOrder& order);

struct HoldSpan {
  int start = 0;  // 1-based positions, inclusive
  int end = 0;
};

// Interval during which v would occupy the catalog if flagged: its own slot
// through its last child's slot. Throws UnknownNodeError for a bad index.
HoldSpan GetHoldSpan(const DepGraph& g, const ExecOrder& order, NodeIndex v);

// Same as GetHoldSpan for all nodes, 0-based slots, O(n + m).
std::vector<std::pair<int, int>> HoldSlots(const DepGraph& g,
                                           const ExecOrder& order);

Bytes PeakMemory(const DepGraph& g, const ExecOrder& order,
                 const FlagSet& flagged);

// Mean flagged byte-slots per executed node: sum over flagged v of
// (last child position - own position) * size, divided by n.
double AvgMemoryUsage(const DepGraph& g, const ExecOrder& order,
                      const FlagSet& flagged);

double TotalScore(const DepGraph& g, const FlagSet& flagged);
Bytes TotalFlaggedSize(const DepGraph& g, const FlagSet& flagged);

}  // namespace screfresh

#endif  // SCREFRESH_GRAPH_H_
