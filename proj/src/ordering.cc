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

#include "screfresh/ordering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace screfresh {

ExecOrder OrderMadfs(const DepGraph& g, const FlagSet& flagged) {
  const int n = g.size();
  std::vector<int> pending(n);
  // (consumption, -readiness batch, label rank, node)
  using Key = std::tuple<Bytes, std::int64_t, int, NodeIndex>;
  std::set<Key> ready;
  auto consumption = [&](NodeIndex v) {
    return flagged.Contains(v) ? g.node_size(v) : Bytes{0};
  };
  std::int64_t batch = 0;
  for (int v = 0; v < n; ++v) {
    pending[v] = static_cast<int>(g.parents(v).size());
    if (pending[v] == 0) ready.emplace(consumption(v), 0, g.label_rank(v), v);
  }
  std::vector<NodeIndex> out;
  out.reserve(n);
  while (!ready.empty()) {
    const NodeIndex v = std::get<3>(*ready.begin());
    ready.erase(ready.begin());
    out.push_back(v);
    --batch;
    for (NodeIndex c : g.children(v)) {
      if (--pending[c] == 0) ready.emplace(consumption(c), batch, g.label_rank(c), c);
    }
  }
  return ExecOrder(std::move(out));
}

namespace {

class AnnealingState {
 public:
  AnnealingState(const DepGraph& g, const FlagSet& flagged,
                 const ExecOrder& initial)
      : g_(g), flagged_(flagged), sequence_(initial.sequence()),
        slot_(g.size()) {
    for (int k = 0; k < g.size(); ++k) slot_[sequence_[k]] = k;
    for (int v = 0; v < g.size(); ++v) byte_slots_ += Contribution(v);
  }

  std::int64_t byte_slots() const { return byte_slots_; }
  const std::vector<NodeIndex>& sequence() const { return sequence_; }

  bool Swappable(int k) const {
    return !g_.HasEdge(sequence_[k], sequence_[k + 1]);
  }

  // Swaps slots k and k + 1 and returns the change in byte-slots.
  std::int64_t Swap(int k) {
    const NodeIndex a = sequence_[k];
    const NodeIndex b = sequence_[k + 1];
    affected_.clear();
    affected_.push_back(a);
    affected_.push_back(b);
    for (NodeIndex p : g_.parents(a)) affected_.push_back(p);
    for (NodeIndex p : g_.parents(b)) affected_.push_back(p);
    std::sort(affected_.begin(), affected_.end());
    affected_.erase(std::unique(affected_.begin(), affected_.end()),
                    affected_.end());
    std::int64_t before = 0;
    for (NodeIndex v : affected_) before += Contribution(v);
    std::swap(sequence_[k], sequence_[k + 1]);
    slot_[a] = k + 1;
    slot_[b] = k;
    std::int64_t after = 0;
    for (NodeIndex v : affected_) after += Contribution(v);
    byte_slots_ += after - before;
    return after - before;
  }

 private:
  std::int64_t Contribution(NodeIndex v) const {
    if (!flagged_.Contains(v)) return 0;
    int last = slot_[v];
    for (NodeIndex c : g_.children(v)) last = std::max(last, slot_[c]);
    return static_cast<std::int64_t>(last - slot_[v]) * g_.node_size(v);
  }

  const DepGraph& g_;
  const FlagSet& flagged_;
  std::vector<NodeIndex> sequence_;
  std::vector<int> slot_;
  std::vector<NodeIndex> affected_;
  std::int64_t byte_slots_ = 0;
};

}  // namespace

ExecOrder OrderSa(const DepGraph& g, const FlagSet& flagged,
                  const ExecOrder& initial, const SaOptions& options) {
  const int n = g.size();
  if (options.iterations <= 0 || n < 2) return initial;
  AnnealingState state(g, flagged, initial);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::int64_t best = state.byte_slots();
  std::vector<NodeIndex> best_sequence = state.sequence();
  double temperature =
      options.initial_temperature_ratio * static_cast<double>(best) / n;
  std::vector<int> candidates;
  candidates.reserve(n);

  for (int it = 0; it < options.iterations; ++it, temperature *= options.cooling) {
    candidates.clear();
    for (int k = 0; k + 1 < n; ++k) {
      if (state.Swappable(k)) candidates.push_back(k);
    }
    if (candidates.empty()) break;
    const int k = candidates[std::uniform_int_distribution<size_t>(
        0, candidates.size() - 1)(rng)];
    const std::int64_t delta = state.Swap(k);
    const double delta_avg = static_cast<double>(delta) / n;
    bool accept = delta <= 0;
    if (!accept && temperature > 0.0) {
      accept = unit(rng) < std::exp(-delta_avg / temperature);
    }
    if (!accept) {
      state.Swap(k);
      continue;
    }
    if (state.byte_slots() < best) {
      best = state.byte_slots();
      best_sequence = state.sequence();
    }
  }
  return ExecOrder(std::move(best_sequence));
}

namespace {

class SeparatorOrdering {
 public:
  SeparatorOrdering(const DepGraph& g, const FlagSet& flagged)
      : g_(g), flagged_(flagged), part_(g.size(), -1) {}

  std::vector<NodeIndex> Run() {
    std::vector<NodeIndex> all(g_.size());
    for (int v = 0; v < g_.size(); ++v) all[v] = v;
    std::vector<NodeIndex> out;
    out.reserve(g_.size());
    Order(all, out);
    return out;
  }

 private:
  bool ByLabel(NodeIndex a, NodeIndex b) const {
    return g_.label_rank(a) < g_.label_rank(b);
  }

  // Marks `nodes` as the current working part.
  int Claim(const std::vector<NodeIndex>& nodes) {
    const int id = next_part_++;
    for (NodeIndex v : nodes) part_[v] = id;
    return id;
  }

  std::vector<std::vector<NodeIndex>> Components(
      const std::vector<NodeIndex>& nodes) {
    const int id = Claim(nodes);
    std::vector<std::vector<NodeIndex>> components;
    std::vector<NodeIndex> stack;
    for (NodeIndex root : nodes) {
      if (part_[root] != id) continue;
      const int comp_id = next_part_++;
      std::vector<NodeIndex> comp;
      part_[root] = comp_id;
      stack.push_back(root);
      while (!stack.empty()) {
        const NodeIndex v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        auto visit = [&](NodeIndex w) {
          if (part_[w] == id) {
            part_[w] = comp_id;
            stack.push_back(w);
          }
        };
        for (NodeIndex c : g_.children(v)) visit(c);
        for (NodeIndex p : g_.parents(v)) visit(p);
      }
      components.push_back(std::move(comp));
    }
    for (auto& comp : components) {
      std::sort(comp.begin(), comp.end(),
                [&](NodeIndex a, NodeIndex b) { return ByLabel(a, b); });
    }
    std::sort(components.begin(), components.end(),
              [&](const auto& a, const auto& b) {
                return ByLabel(a.front(), b.front());
              });
    return components;
  }

  void Order(const std::vector<NodeIndex>& nodes, std::vector<NodeIndex>& out) {
    if (nodes.size() <= 1) {
      out.insert(out.end(), nodes.begin(), nodes.end());
      return;
    }
    auto components = Components(nodes);
    if (components.size() > 1) {
      for (const auto& comp : components) Order(comp, out);
      return;
    }
    auto [left, right] = Bisect(components.front());
    Order(left, out);
    Order(right, out);
  }

  // Grows a predecessor-closed set one ready node at a time, always taking
  // the node that leaves the fewest flagged bytes crossing the cut, and keeps
  // the best prefix inside the balance window.
  std::pair<std::vector<NodeIndex>, std::vector<NodeIndex>> Bisect(
      const std::vector<NodeIndex>& nodes) {
    const int id = Claim(nodes);
    const int k = static_cast<int>(nodes.size());
    const double half = k / 2.0;
    const int lo = std::max(1, static_cast<int>(std::floor(half * 0.75)));
    const int hi = std::min(k - 1, static_cast<int>(std::ceil(half * 1.25)));

    std::vector<int> pending_parents(g_.size(), 0);
    std::vector<int> outside_children(g_.size(), 0);
    std::vector<NodeIndex> ready;
    for (NodeIndex v : nodes) {
      for (NodeIndex p : g_.parents(v)) pending_parents[v] += part_[p] == id;
      for (NodeIndex c : g_.children(v)) outside_children[v] += part_[c] == id;
      if (pending_parents[v] == 0) ready.push_back(v);
    }
    auto crossing_delta = [&](NodeIndex v) {
      Bytes delta = 0;
      if (flagged_.Contains(v) && outside_children[v] > 0) delta += g_.node_size(v);
      for (NodeIndex p : g_.parents(v)) {
        if (part_[p] == id && flagged_.Contains(p) && outside_children[p] == 1) {
          delta -= g_.node_size(p);
        }
      }
      return delta;
    };

    std::vector<NodeIndex> grown;
    Bytes crossing = 0;
    Bytes best_crossing = std::numeric_limits<Bytes>::max();
    int best_size = lo;
    while (static_cast<int>(grown.size()) < hi) {
      auto pick = std::min_element(ready.begin(), ready.end(),
                                   [&](NodeIndex a, NodeIndex b) {
                                     const Bytes da = crossing_delta(a);
                                     const Bytes db = crossing_delta(b);
                                     if (da != db) return da < db;
                                     return ByLabel(a, b);
                                   });
      const NodeIndex v = *pick;
      ready.erase(pick);
      crossing += crossing_delta(v);
      grown.push_back(v);
      for (NodeIndex p : g_.parents(v)) {
        if (part_[p] == id) --outside_children[p];
      }
      for (NodeIndex c : g_.children(v)) {
        if (part_[c] == id && --pending_parents[c] == 0) ready.push_back(c);
      }
      const int size = static_cast<int>(grown.size());
      if (size >= lo) {
        const double balance = std::abs(size - half);
        const double best_balance = std::abs(best_size - half);
        if (crossing < best_crossing ||
            (crossing == best_crossing && balance < best_balance)) {
          best_crossing = crossing;
          best_size = size;
        }
      }
    }
    std::vector<NodeIndex> left(grown.begin(), grown.begin() + best_size);
    std::vector<char> in_left(g_.size(), 0);
    for (NodeIndex v : left) in_left[v] = 1;
    std::vector<NodeIndex> right;
    for (NodeIndex v : nodes) {
      if (!in_left[v]) right.push_back(v);
    }
    return {std::move(left), std::move(right)};
  }

  const DepGraph& g_;
  const FlagSet& flagged_;
  std::vector<int> part_;
  int next_part_ = 0;
};

}  // namespace

SeparatorResult OrderSeparator(const DepGraph& g, Bytes budget,
                               const FlagSet& flagged) {
  SeparatorResult result;
  result.order = ExecOrder(SeparatorOrdering(g, flagged).Run());
  result.peak_memory = PeakMemory(g, result.order, flagged);
  result.feasible = result.peak_memory <= budget;
  return result;
}

std::string_view OrdererName(Orderer o) {
  switch (o) {
    case Orderer::kMadfs:
      return "madfs";
    case Orderer::kSa:
      return "sa";
    case Orderer::kSeparator:
      return "separator";
  }
  return "unknown";
}

Orderer ParseOrderer(std::string_view name) {
  for (Orderer o : {Orderer::kMadfs, Orderer::kSa, Orderer::kSeparator}) {
    if (OrdererName(o) == name) return o;
  }
  throw std::invalid_argument("unknown orderer \"" + std::string(name) + "\"");
}

}  // namespace screfresh
