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

#include "screfresh/io.h"

#include <gtest/gtest.h>

#include <random>

#include "screfresh/alternating.h"
#include "testing.h"

namespace screfresh {
namespace {

using testing::FlagsOf;
using testing::kGB;
using testing::ReplicaToy;

TEST(ParseWorkloadTest, MinimalDocument) {
  const GraphSpec spec = ParseWorkload(R"({"nodes": [{"id": "a", "size_bytes": 5}]})");
  ASSERT_EQ(spec.nodes.size(), 1u);
  EXPECT_EQ(spec.nodes[0].size, 5);
  EXPECT_FALSE(spec.nodes[0].speedup_score.has_value());
  EXPECT_TRUE(spec.edges.empty());
}

TEST(ParseWorkloadTest, MalformedJsonReportsLine) {
  try {
    ParseWorkload("{\n  \"nodes\": [\n    {\"id\": \"a\",,}\n  ]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseWorkloadTest, BadNodeReportsItsLine) {
  const char* text =
      "{\n"
      "  \"nodes\": [\n"
      "    {\"id\": \"a\", \"size_bytes\": 1},\n"
      "    {\"id\": \"b\", \"size_bytes\": -4}\n"
      "  ]\n"
      "}\n";
  try {
    ParseWorkload(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(ParseWorkloadTest, RejectsUnknownFieldsAndBadEdges) {
  EXPECT_THROW(ParseWorkload(R"({"nodes": [], "extra": 1})"), ParseError);
  EXPECT_THROW(ParseWorkload(R"({"nodes": [{"id": "a", "size_bytes": 1, "colour": 2}]})"),
               ParseError);
  EXPECT_THROW(ParseWorkload(R"({"nodes": [{"id": "a", "size_bytes": 1}], "edges": [["a"]]})"),
               ParseError);
  EXPECT_THROW(ParseWorkload(R"({"nodes": [{"id": "a", "size_bytes": 1.5}]})"), ParseError);
  EXPECT_THROW(ParseWorkload("[]"), ParseError);
}

TEST(ParseWorkloadTest, GraphErrorsSurfaceAsParseErrors) {
  EXPECT_THROW(
      ParseWorkload(R"({"nodes": [{"id": "a", "size_bytes": 1}], "edges": [["a", "zz"]]})"),
      std::exception);
}

TEST(WorkloadRoundTripTest, ReplicaToy) {
  const GraphSpec spec = ReplicaToy().ToSpec();
  const std::string text = SerializeWorkload(spec);
  EXPECT_EQ(SerializeWorkload(ParseWorkload(text)), text);
}

TEST(CostModelIoTest, RoundTripWithInfinity) {
  CostModel cm;
  cm.disk_read_bw = 2e9;
  cm.per_access_latency = 0.25;
  const CostModel back = ParseCostModel(SerializeCostModel(cm));
  EXPECT_EQ(back.disk_read_bw, 2e9);
  EXPECT_EQ(back.mem_read_bw, kInfiniteBandwidth);
  EXPECT_EQ(back.per_access_latency, 0.25);
  EXPECT_THROW(ParseCostModel(R"({"disk_read_bw": 0})"), ParseError);
}

TEST(PlanIoTest, RoundTrip) {
  const DepGraph g = ReplicaToy();
  const OptimizeResult r = Optimize(g, testing::kReplicaBudget);
  const PlanFile back = ParsePlan(SerializePlan(g, r.plan, r.iterations), g);
  EXPECT_EQ(back.plan.order, r.plan.order);
  EXPECT_EQ(back.plan.flagged.Members(), r.plan.flagged.Members());
  EXPECT_DOUBLE_EQ(back.plan.total_score, 210.0);
  EXPECT_EQ(back.iterations, r.iterations);
}

TEST(PlanIoTest, Mismatches) {
  const DepGraph g = ReplicaToy();
  EXPECT_THROW(ParsePlan(R"({"order": ["v1","v2","v4","v3","v5","v9"], "flagged": []})", g),
               PlanMismatchError);
  EXPECT_THROW(ParsePlan(R"({"order": ["v1","v2"], "flagged": []})", g), PlanMismatchError);
  EXPECT_THROW(ParsePlan(R"({"order": ["v2","v1","v4","v3","v5","v6"], "flagged": []})", g),
               PlanMismatchError);
  EXPECT_THROW(ParsePlan(R"({"order": ["v1","v2","v4","v3","v5","v6"], "flagged": ["x"]})", g),
               PlanMismatchError);
}

TEST(GenParamsIoTest, OverridesDefaults) {
  const GenParams p = ParseGenParams(R"({"node_count": 7, "seed": 9})");
  EXPECT_EQ(p.node_count, 7);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(p.max_outdegree, GenParams{}.max_outdegree);
  EXPECT_THROW(ParseGenParams(R"({"nodes": 7})"), ParseError);
}

TEST(ParseBytesTest, Suffixes) {
  EXPECT_EQ(ParseBytes("100GB"), 100 * kGB);
  EXPECT_EQ(ParseBytes("1.5 gb"), 1'500'000'000);
  EXPECT_EQ(ParseBytes("2KiB"), 2048);
  EXPECT_EQ(ParseBytes("42"), 42);
  EXPECT_EQ(ParseBytes("0"), 0);
  EXPECT_THROW(ParseBytes("GB"), std::invalid_argument);
  EXPECT_THROW(ParseBytes("12XB"), std::invalid_argument);
  EXPECT_THROW(ParseBytes("-5GB"), std::invalid_argument);
  EXPECT_THROW(ParseBytes("1.2.3"), std::invalid_argument);
}

TEST(FormatBytesTest, Examples) {
  EXPECT_EQ(FormatBytes(0), "0 B");
  EXPECT_EQ(FormatBytes(100 * kGB), "100 GB");
  EXPECT_EQ(FormatBytes(1'500'000), "1.5 MB");
}

int CountOf(const std::string& text, const std::string& needle) {
  int count = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

TEST(ExportDotTest, TwoNodeChain) {
  const DepGraph g = testing::MakeGraph({{"a", 1, 1}, {"b", 1, 1}}, {{"a", "b"}});
  const std::string dot = ExportDot(g);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_EQ(CountOf(dot, "->"), 1);
  EXPECT_EQ(CountOf(dot, "#"), 0);
}

TEST(ExportDotTest, ReplicaToyWithPlan) {
  const DepGraph g = ReplicaToy();
  const Plan plan = Optimize(g, testing::kReplicaBudget).plan;
  const std::string dot = ExportDot(g, &plan);
  EXPECT_EQ(CountOf(dot, "->"), 6);
  EXPECT_EQ(CountOf(dot, "[label="), 6);
  EXPECT_EQ(CountOf(dot, "style=filled"), 3);
  for (int pos = 1; pos <= 6; ++pos) {
    EXPECT_NE(dot.find("\\n#" + std::to_string(pos) + "\\n"), std::string::npos);
  }
}

TEST(SerializeReportTest, ContainsTotals) {
  SimReport r;
  r.end_to_end = 15;
  r.baseline_end_to_end = 18;
  r.realized_savings = 3;
  const std::string text = SerializeReport(r);
  EXPECT_NE(text.find("\"realized_savings_seconds\": 3"), std::string::npos);
  EXPECT_EQ(text, SerializeReport(r));
}

}  // namespace
}  // namespace screfresh
