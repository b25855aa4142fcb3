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

#include "screfresh/selection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace screfresh {

namespace {

bool IsEligible(const DepGraph& g, NodeIndex v, Bytes budget) {
  return g.node_size(v) <= budget && g.score(v) > 0.0;
}

void SplitEligible(const DepGraph& g, Bytes budget, ConstraintFamily& family) {
  for (int v = 0; v < g.size(); ++v) {
    (IsEligible(g, v, budget) ? family.eligible : family.excluded).push_back(v);
  }
}

// Per-slot occupancy used by the admission-rule selectors.
class SlotOccupancy {
 public:
  SlotOccupancy(const DepGraph& g, const ExecOrder& order, Bytes budget)
      : g_(g), spans_(HoldSlots(g, order)), used_(g.size(), 0),
        budget_(budget) {}

  bool TryAdd(NodeIndex v) {
    const auto [start, end] = spans_[v];
    const Bytes size = g_.node_size(v);
    for (int k = start; k <= end; ++k) {
      if (used_[k] + size > budget_) return false;
    }
    for (int k = start; k <= end; ++k) used_[k] += size;
    return true;
  }

 private:
  const DepGraph& g_;
  std::vector<std::pair<int, int>> spans_;
  std::vector<Bytes> used_;
  Bytes budget_;
};

FlagSet AdmitInOrder(const DepGraph& g, Bytes budget, const ExecOrder& order,
                     const std::vector<NodeIndex>& visit) {
  FlagSet flagged(g.size());
  if (budget < 0) return flagged;
  SlotOccupancy occupancy(g, order, budget);
  for (NodeIndex v : visit) {
    if (g.score(v) > 0.0 && occupancy.TryAdd(v)) flagged.Insert(v);
  }
  return flagged;
}

// Depth-first branch and bound for the 0-1 MKP.
//
// Each node branches on its heaviest free variable and is bounded by the Lagrangian relaxation of the row constraints:
//   L(lambda) = sum_r lambda_r * residual_r + sum_j max(0, p_j - sum_r lambda_r w_rj)
// which is valid for any lambda >= 0. Multipliers are tuned by subgradient
// steps, inherited from the parent, so deep nodes start near the optimum.
// The relaxed solution doubles as an incumbent whenever it happens to fit,
// and reduced costs fix variables that cannot change the outcome.
class MkpBranchAndBound {
 public:
  MkpBranchAndBound(const MkpInstance& inst, const MkpOptions& options)
      : inst_(inst), options_(options) {
    const int l = inst.variable_count();
    const int k = static_cast<int>(inst.rows.size());
    var_rows_.assign(l, {});
    for (int r = 0; r < k; ++r) {
      const MkpRow& row = inst.rows[r];
      for (size_t e = 0; e < row.vars.size(); ++e) {
        var_rows_[row.vars[e]].push_back({r, row.weights[e]});
      }
    }
    residual_.resize(k);
    for (int r = 0; r < k; ++r) residual_[r] = inst.rows[r].capacity;

    // Unconstrained variables are taken outright; ones that never fit are
    // dropped.
    std::vector<int> search;
    for (int j = 0; j < l; ++j) {
      if (inst.profits[j] <= 0) continue;
      bool fits = true;
      for (const auto& [r, w] : var_rows_[j]) fits &= w <= residual_[r];
      if (!fits) continue;
      if (var_rows_[j].empty()) {
        base_profit_ += inst.profits[j];
        base_take_.push_back(j);
        continue;
      }
      search.push_back(j);
    }
    auto ratio = [&](int j) {
      std::int64_t w = 0;
      for (const auto& entry : var_rows_[j]) w += entry.weight;
      return w == 0 ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(inst.profits[j]) / w;
    };
    std::stable_sort(search.begin(), search.end(),
                     [&](int a, int b) { return ratio(a) > ratio(b); });
    order_ = std::move(search);
    state_.assign(l, kFree);
    relaxed_.assign(l, 0);
    // Row weights are rescaled so multipliers live on a profit-like scale.
    scale_.assign(k, 1.0);
    for (int r = 0; r < k; ++r) {
      const double cap = static_cast<double>(inst.rows[r].capacity);
      if (cap > 0) scale_[r] = 1.0 / cap;
    }
    heavy_.assign(l, 0.0);
    for (int j = 0; j < l; ++j) {
      for (const auto& [r, w] : var_rows_[j]) {
        heavy_[j] = std::max(heavy_[j], scale_[r] * static_cast<double>(w));
      }
    }
  }

  MkpSolution Run() {
    const int l = inst_.variable_count();
    // Warm start: greedy in branching order.
    best_take_.assign(l, 0);
    {
      std::vector<std::int64_t> residual = residual_;
      for (int j : order_) {
        bool fits = true;
        for (const auto& [r, w] : var_rows_[j]) fits &= w <= residual[r];
        if (!fits) continue;
        for (const auto& [r, w] : var_rows_[j]) residual[r] -= w;
        best_take_[j] = 1;
        best_profit_ += inst_.profits[j];
      }
    }

    std::vector<double> lambda(inst_.rows.size(), 0.0);
    Search(0, 0, lambda, kRootIterations);

    MkpSolution solution;
    solution.take = best_take_;
    for (int j : base_take_) solution.take[j] = 1;
    solution.objective = best_profit_ + base_profit_;
    solution.timed_out = timed_out_;
    solution.nodes_expanded = nodes_;
    return solution;
  }

 private:
  static constexpr char kFree = 0;
  static constexpr char kTaken = 1;
  static constexpr char kSkipped = 2;
  static constexpr int kRootIterations = 300;
  static constexpr int kNodeIterations = 12;

  struct RowEntry {
    int row;
    std::int64_t weight;
  };

  bool Fits(int j) const {
    for (const auto& [r, w] : var_rows_[j]) {
      if (w > residual_[r]) return false;
    }
    return true;
  }

  double ReducedCost(int j, const std::vector<double>& lambda) const {
    double rc = static_cast<double>(inst_.profits[j]);
    for (const auto& [r, w] : var_rows_[j]) {
      rc -= lambda[r] * scale_[r] * static_cast<double>(w);
    }
    return rc;
  }

  // Evaluates L(lambda) over the free variables from `depth` on and fills
  // relaxed_ with the maximiser.
  double Evaluate(size_t depth, const std::vector<double>& lambda) {
    double value = 0.0;
    for (size_t r = 0; r < residual_.size(); ++r) {
      value += lambda[r] * scale_[r] * static_cast<double>(residual_[r]);
    }
    for (size_t d = depth; d < order_.size(); ++d) {
      const int j = order_[d];
      relaxed_[j] = 0;
      if (state_[j] != kFree || !Fits(j)) continue;
      const double rc = ReducedCost(j, lambda);
      if (rc > 0) {
        value += rc;
        relaxed_[j] = 1;
      }
    }
    return value;
  }

  // Tightens lambda in place; returns the best bound seen for the subtree
  // (relative to `profit`). Records the relaxed solution when it is feasible.
  double Bound(size_t depth, std::int64_t profit, std::vector<double>& lambda,
               int iterations) {
    const int k = static_cast<int>(residual_.size());
    std::vector<double> best_lambda = lambda;
    double best = Evaluate(depth, lambda);
    std::vector<double> grad(k);
    double theta = 1.0;
    int stale = 0;
    for (int it = 0; it <= iterations; ++it) {
      // Subgradient of L at lambda: scaled residual slack of the relaxed x.
      const double value = it == 0 ? best : Evaluate(depth, lambda);
      if (value < best) {
        best = value;
        best_lambda = lambda;
        stale = 0;
      } else if (it > 0 && ++stale >= 4) {
        theta *= 0.5;
        stale = 0;
      }
      for (int r = 0; r < k; ++r) grad[r] = static_cast<double>(residual_[r]);
      std::int64_t relaxed_profit = 0;
      for (size_t d = depth; d < order_.size(); ++d) {
        const int j = order_[d];
        if (!relaxed_[j]) continue;
        relaxed_profit += inst_.profits[j];
        for (const auto& [r, w] : var_rows_[j]) grad[r] -= static_cast<double>(w);
      }
      bool feasible = true;
      double norm = 0.0;
      for (int r = 0; r < k; ++r) {
        feasible &= grad[r] >= 0;
        grad[r] *= scale_[r];
        // Multipliers pinned at zero with slack do not move.
        if (lambda[r] > 0 || grad[r] < 0) norm += grad[r] * grad[r];
      }
      if (feasible && profit + relaxed_profit > best_profit_) {
        best_profit_ = profit + relaxed_profit;
        best_take_ = TakenWith(depth);
      }
      const double target = static_cast<double>(best_profit_ - profit);
      if (std::floor(best + 1e-6) <= target) break;
      if (it == iterations || norm == 0.0) break;
      const double step = theta * (value - target) / norm;
      for (int r = 0; r < k; ++r) {
        lambda[r] = std::max(0.0, lambda[r] - step * grad[r]);
      }
    }
    lambda = best_lambda;
    return best;
  }

  std::vector<char> TakenWith(size_t depth) const {
    std::vector<char> take(inst_.variable_count(), 0);
    for (int j = 0; j < inst_.variable_count(); ++j) take[j] = state_[j] == kTaken;
    for (size_t d = depth; d < order_.size(); ++d) {
      if (relaxed_[order_[d]]) take[order_[d]] = 1;
    }
    return take;
  }

  void Search(size_t depth, std::int64_t profit, std::vector<double> lambda,
              int iterations) {
    if (timed_out_) return;
    if (++nodes_ > options_.node_limit) {
      timed_out_ = true;
      return;
    }
    while (depth < order_.size() &&
           (state_[order_[depth]] != kFree || !Fits(order_[depth]))) {
      ++depth;
    }
    if (depth == order_.size()) {
      if (profit > best_profit_) {
        best_profit_ = profit;
        best_take_ = TakenWith(depth);
      }
      return;
    }
    const double bound = Bound(depth, profit, lambda, iterations);
    const double target = static_cast<double>(best_profit_ - profit);
    // Profits are integral, so an improvement needs at least best + 1.
    if (std::floor(bound + 1e-6) <= target) return;

    // Reduced-cost fixing: a free variable whose forced flip alone drops the
    // bound to the incumbent keeps its relaxed value in this subtree.
    Evaluate(depth, lambda);
    std::vector<int> fixed;
    for (size_t d = depth; d < order_.size(); ++d) {
      const int j = order_[d];
      if (state_[j] != kFree || !Fits(j)) continue;
      const double rc = ReducedCost(j, lambda);
      if (rc <= 0 && std::floor(bound + rc + 1e-6) <= target) {
        state_[j] = kSkipped;
        fixed.push_back(j);
      }
    }

    // Branch on the heaviest free variable: the relaxation's gap comes from
    // items that fill a large share of a row, while light ones round well.
    int j = -1;
    double heaviest = -1.0;
    double j_rc = 0.0;
    for (size_t d = depth; d < order_.size(); ++d) {
      const int v = order_[d];
      if (state_[v] != kFree || !Fits(v)) continue;
      const double rc = std::abs(ReducedCost(v, lambda));
      if (heavy_[v] > heaviest || (heavy_[v] == heaviest && rc < j_rc)) {
        heaviest = heavy_[v];
        j_rc = rc;
        j = v;
      }
    }
    if (j < 0) {
      // Everything left was fixed out.
      if (profit > best_profit_) {
        best_profit_ = profit;
        std::fill(relaxed_.begin(), relaxed_.end(), 0);
        best_take_ = TakenWith(order_.size());
      }
      for (int f : fixed) state_[f] = kFree;
      return;
    }
    const bool take_first = ReducedCost(j, lambda) > 0;
    for (int pass = 0; pass < 2; ++pass) {
      const bool take = (pass == 0) == take_first;
      if (take) {
        if (!Fits(j)) continue;
        for (const auto& [r, w] : var_rows_[j]) residual_[r] -= w;
        state_[j] = kTaken;
        Search(depth, profit + inst_.profits[j], lambda, kNodeIterations);
        for (const auto& [r, w] : var_rows_[j]) residual_[r] += w;
      } else {
        state_[j] = kSkipped;
        Search(depth, profit, lambda, kNodeIterations);
      }
      state_[j] = kFree;
    }
    for (int f : fixed) state_[f] = kFree;
  }

  const MkpInstance& inst_;
  MkpOptions options_;
  std::vector<std::vector<RowEntry>> var_rows_;
  std::vector<std::int64_t> residual_;
  std::vector<double> scale_;
  std::vector<double> heavy_;  // largest capacity share over the rows
  std::vector<int> order_;
  std::vector<char> state_;
  std::vector<char> relaxed_;
  std::vector<int> base_take_;
  std::int64_t base_profit_ = 0;
  std::vector<char> best_take_;
  std::int64_t best_profit_ = 0;
  std::int64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

ConstraintFamily DeriveConstraints(const DepGraph& g, const ExecOrder& order,
                                   Bytes budget) {
  ConstraintFamily family;
  SplitEligible(g, budget, family);
  const int n = g.size();
  const auto spans = HoldSlots(g, order);

  std::vector<std::vector<NodeIndex>> starting(n), ending(n);
  for (NodeIndex v : family.eligible) {
    starting[spans[v].first].push_back(v);
    ending[spans[v].second].push_back(v);
  }

  // A resident set is maximal iff some member leaves right after it and some
  // member joined since the previous departure; every other slot's set is
  // contained in one of those.
  std::vector<char> alive(n, 0);
  bool joined_since_departure = false;
  for (int k = 0; k < n; ++k) {
    for (NodeIndex v : starting[k]) alive[v] = 1;
    joined_since_departure |= !starting[k].empty();
    if (ending[k].empty()) continue;
    if (joined_since_departure) {
      ConstraintSet set{k + 1, {}};
      Bytes total = 0;
      for (int v = 0; v < n; ++v) {
        if (alive[v]) {
          set.members.push_back(v);
          total += g.node_size(v);
        }
      }
      if (total > budget) family.sets.push_back(std::move(set));
    }
    for (NodeIndex v : ending[k]) alive[v] = 0;
    joined_since_departure = false;
  }
  return family;
}

ConstraintFamily DeriveRawConstraints(const DepGraph& g,
                                      const ExecOrder& order, Bytes budget) {
  ConstraintFamily family;
  SplitEligible(g, budget, family);
  const auto spans = HoldSlots(g, order);
  for (int k = 0; k < g.size(); ++k) {
    ConstraintSet set{k + 1, {}};
    for (NodeIndex v : family.eligible) {
      if (spans[v].first <= k && k <= spans[v].second) set.members.push_back(v);
    }
    if (!set.members.empty()) family.sets.push_back(std::move(set));
  }
  return family;
}

std::int64_t ScoreToProfit(double seconds) {
  return std::max<std::int64_t>(1, std::llround(seconds * 1000.0));
}

MkpInstance BuildMkpInstance(const DepGraph& g, const ConstraintFamily& family,
                             Bytes budget) {
  MkpInstance inst;
  std::vector<int> var_of(g.size(), -1);
  for (const auto& set : family.sets) {
    for (NodeIndex v : set.members) var_of[v] = 0;
  }
  for (int v = 0; v < g.size(); ++v) {
    if (var_of[v] < 0) continue;
    var_of[v] = inst.variable_count();
    inst.profits.push_back(ScoreToProfit(g.score(v)));
    inst.nodes.push_back(v);
  }
  for (const auto& set : family.sets) {
    MkpRow row;
    row.capacity = budget;
    for (NodeIndex v : set.members) {
      row.vars.push_back(var_of[v]);
      row.weights.push_back(g.node_size(v));
    }
    inst.rows.push_back(std::move(row));
  }
  return inst;
}

MkpSolution SolveMkp(const MkpInstance& instance, const MkpOptions& options) {
  for (const auto& row : instance.rows) {
    if (row.vars.size() != row.weights.size()) {
      throw std::invalid_argument("MKP row has mismatched weights");
    }
    for (int j : row.vars) {
      if (j < 0 || j >= instance.variable_count()) {
        throw std::invalid_argument("MKP row references unknown variable");
      }
    }
  }
  return MkpBranchAndBound(instance, options).Run();
}

Selection SelectNodesMkp(const DepGraph& g, Bytes budget,
                         const ExecOrder& order, const MkpOptions& options) {
  Selection result{FlagSet(g.size()), false};
  if (budget < 0) return result;
  const ConstraintFamily family = DeriveConstraints(g, order, budget);
  const MkpInstance inst = BuildMkpInstance(g, family, budget);
  const MkpSolution solution = SolveMkp(inst, options);
  for (int j = 0; j < inst.variable_count(); ++j) {
    if (solution.take[j]) result.flagged.Insert(inst.nodes[j]);
  }
  std::vector<char> constrained(g.size(), 0);
  for (NodeIndex v : inst.nodes) constrained[v] = 1;
  for (NodeIndex v : family.eligible) {
    if (!constrained[v]) result.flagged.Insert(v);
  }
  result.timed_out = solution.timed_out;
  return result;
}

FlagSet SelectNodesGreedy(const DepGraph& g, Bytes budget,
                          const ExecOrder& order) {
  return AdmitInOrder(g, budget, order, order.sequence());
}

FlagSet SelectNodesRandom(const DepGraph& g, Bytes budget,
                          const ExecOrder& order, std::uint64_t seed) {
  std::vector<NodeIndex> visit(g.size());
  std::iota(visit.begin(), visit.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(visit.begin(), visit.end(), rng);
  return AdmitInOrder(g, budget, order, visit);
}

FlagSet SelectNodesRatio(const DepGraph& g, Bytes budget,
                         const ExecOrder& order) {
  std::vector<NodeIndex> visit(g.size());
  std::iota(visit.begin(), visit.end(), 0);
  auto ratio = [&](NodeIndex v) {
    return g.node_size(v) == 0
               ? std::numeric_limits<double>::infinity()
               : g.score(v) / static_cast<double>(g.node_size(v));
  };
  std::sort(visit.begin(), visit.end(), [&](NodeIndex a, NodeIndex b) {
    const double ra = ratio(a);
    const double rb = ratio(b);
    if (ra != rb) return ra > rb;
    return g.label_rank(a) < g.label_rank(b);
  });
  return AdmitInOrder(g, budget, order, visit);
}

std::string_view SelectorName(Selector s) {
  switch (s) {
    case Selector::kMkp:
      return "mkp";
    case Selector::kGreedy:
      return "greedy";
    case Selector::kRandom:
      return "random";
    case Selector::kRatio:
      return "ratio";
  }
  return "unknown";
}

Selector ParseSelector(std::string_view name) {
  for (Selector s : {Selector::kMkp, Selector::kGreedy, Selector::kRandom,
                     Selector::kRatio}) {
    if (SelectorName(s) == name) return s;
  }
  throw std::invalid_argument("unknown selector \"" + std::string(name) + "\"");
}

}  // namespace screfresh
