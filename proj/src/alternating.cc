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

#include "screfresh/alternating.h"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace screfresh {

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kNoImprovement:
      return "converged";
    case Termination::kOrderViolation:
      return "order_violation";
    case Termination::kIterationCap:
      return "iteration_cap";
  }
  return "unknown";
}

namespace {

Selection Select(const DepGraph& g, Bytes budget, const ExecOrder& order,
                 const OptimizeConfig& config, int iteration) {
  switch (config.selector) {
    case Selector::kMkp:
      return SelectNodesMkp(g, budget, order, config.mkp);
    case Selector::kGreedy:
      return {SelectNodesGreedy(g, budget, order), false};
    case Selector::kRandom:
      return {SelectNodesRandom(g, budget, order, config.seed + iteration),
              false};
    case Selector::kRatio:
      return {SelectNodesRatio(g, budget, order), false};
  }
  return {FlagSet(g.size()), false};
}

ExecOrder Reorder(const DepGraph& g, Bytes budget, const FlagSet& flagged,
                  const ExecOrder& current, const OptimizeConfig& config,
                  int iteration) {
  switch (config.orderer) {
    case Orderer::kMadfs:
      return OrderMadfs(g, flagged);
    case Orderer::kSa: {
      SaOptions options;
      options.iterations = config.sa_iterations;
      options.seed = config.seed + iteration;
      return OrderSa(g, flagged, current, options);
    }
    case Orderer::kSeparator:
      return OrderSeparator(g, budget, flagged).order;
  }
  return current;
}

}  // namespace

OptimizeResult Optimize(const DepGraph& g, Bytes budget,
                        const OptimizeConfig& config) {
  if (budget < 0) throw std::invalid_argument("memory budget must be >= 0");
  OptimizeResult result;
  ExecOrder order = config.initial_order.value_or(
      TopoOrder(g, config.initial_strategy));
  if (!IsTopological(g, order)) {
    throw std::invalid_argument("initial order is not topological");
  }
  FlagSet flagged(g.size());
  double score = 0.0;
  Bytes flagged_size = 0;
  result.termination = Termination::kIterationCap;

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationRecord record;
    record.iteration = it;
    const Selection selection = Select(g, budget, order, config, it);
    record.candidate = selection.flagged;
    record.candidate_score = TotalScore(g, selection.flagged);
    record.candidate_size = TotalFlaggedSize(g, selection.flagged);
    record.size_increased = record.candidate_size > flagged_size;
    record.score_increased = record.candidate_score > score;
    record.mkp_timed_out = selection.timed_out;
    result.mkp_timed_out |= selection.timed_out;
    result.iterations = it;

    bool stop = false;
    if (!record.score_increased) {
      result.termination = Termination::kNoImprovement;
      stop = true;
    } else {
      flagged = selection.flagged;
      score = record.candidate_score;
      flagged_size = record.candidate_size;
      ExecOrder next = Reorder(g, budget, flagged, order, config, it);
      const Bytes next_peak = PeakMemory(g, next, flagged);
      record.reordered_peak = next_peak;
      if (next_peak > budget) {
        result.termination = Termination::kOrderViolation;
        stop = true;
      } else {
        record.order_accepted = true;
        order = std::move(next);
      }
    }
    record.order = order;
    record.flagged = flagged;
    record.total_score = score;
    record.peak_memory = PeakMemory(g, order, flagged);
    record.avg_memory = AvgMemoryUsage(g, order, flagged);
    result.trace.push_back(std::move(record));
    if (stop) break;
  }

  result.plan.order = std::move(order);
  result.plan.flagged = std::move(flagged);
  result.plan.total_score = score;
  result.plan.peak_memory =
      PeakMemory(g, result.plan.order, result.plan.flagged);
  return result;
}

JointOptimum BruteForceJoint(const DepGraph& g, Bytes budget) {
  const int n = g.size();
  if (n > kBruteForceMaxNodes) {
    throw TooLargeError("brute force is limited to " +
                        std::to_string(kBruteForceMaxNodes) + " nodes, got " +
                        std::to_string(n));
  }
  using Mask = std::uint32_t;
  const Mask full = (Mask{1} << n) - 1;
  std::vector<Mask> parent_mask(n, 0), child_mask(n, 0);
  for (const auto& [p, c] : g.edges()) {
    parent_mask[c] |= Mask{1} << p;
    child_mask[p] |= Mask{1} << c;
  }

  // Only positive-score nodes that fit on their own can improve the score.
  std::vector<int> useful;
  for (int v = 0; v < n; ++v) {
    if (g.score(v) > 0.0 && g.node_size(v) <= budget) useful.push_back(v);
  }
  const int u = static_cast<int>(useful.size());
  std::vector<Mask> candidates(std::size_t{1} << u);
  std::vector<double> cand_score(candidates.size(), 0.0);
  for (Mask sub = 0; sub < candidates.size(); ++sub) {
    Mask flags = 0;
    for (int i = 0; i < u; ++i) {
      if (sub & (Mask{1} << i)) {
        flags |= Mask{1} << useful[i];
        cand_score[sub] += g.score(useful[i]);
      }
    }
    candidates[sub] = flags;
  }
  std::vector<Mask> by_score(candidates.size());
  std::iota(by_score.begin(), by_score.end(), 0);
  std::stable_sort(by_score.begin(), by_score.end(), [&](Mask a, Mask b) {
    return cand_score[a] > cand_score[b];
  });

  std::vector<Bytes> held(std::size_t{1} << n);
  std::vector<int> via(std::size_t{1} << n);
  for (Mask sub : by_score) {
    const Mask flags = candidates[sub];
    // Bytes of flagged, already executed nodes still waiting on a child.
    for (Mask done = 0; done <= full; ++done) {
      Bytes total = 0;
      for (int v = 0; v < n; ++v) {
        const Mask bit = Mask{1} << v;
        if ((flags & bit) && (done & bit) && (child_mask[v] & ~done)) {
          total += g.node_size(v);
        }
      }
      held[done] = total;
      via[done] = -1;
    }
    via[0] = n;  // reachable sentinel
    for (Mask done = 0; done < full; ++done) {
      if (via[done] < 0) continue;
      for (int x = 0; x < n; ++x) {
        const Mask bit = Mask{1} << x;
        if ((done & bit) || (parent_mask[x] & ~done)) continue;
        const Bytes own = (flags & bit) ? g.node_size(x) : 0;
        if (held[done] + own > budget) continue;
        if (via[done | bit] < 0) via[done | bit] = x;
      }
    }
    if (via[full] < 0) continue;

    std::vector<NodeIndex> sequence;
    for (Mask done = full; done != 0;) {
      const int x = via[done];
      sequence.push_back(x);
      done &= ~(Mask{1} << x);
    }
    std::reverse(sequence.begin(), sequence.end());
    JointOptimum best;
    best.total_score = cand_score[sub];
    best.flagged = FlagSet(n);
    for (int v = 0; v < n; ++v) {
      if (flags & (Mask{1} << v)) best.flagged.Insert(v);
    }
    best.order = ExecOrder(std::move(sequence));
    return best;
  }
  // Unreachable: the empty flag set is always feasible.
  return {0.0, FlagSet(n), TopoOrder(g, TopoStrategy::kArbitrary)};
}

}  // namespace screfresh
