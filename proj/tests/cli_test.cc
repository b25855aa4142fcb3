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

// Runs the screfresh binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "screfresh/graph.h"
#include "screfresh/io.h"

namespace screfresh {
namespace {

namespace fs = std::filesystem;

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult Exec(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(SCREFRESH_BIN) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CmdResult run;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return run;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), n);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string Data(const std::string& name) {
  return std::string(SCREFRESH_TEST_DATA) + "/" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("screfresh_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, OptimizeReplicaToy) {
  const CmdResult r = Exec("optimize -g " + Data("replica_toy.json") + " --memory 100GB -o " +
                     Tmp("plan.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("total_score: 210"), std::string::npos) << r.out;
  const DepGraph g = DepGraph::FromSpec(ParseWorkload(ReadFile(Data("replica_toy.json"))));
  const PlanFile plan = ParsePlan(ReadFile(Tmp("plan.json")), g);
  std::vector<std::string> flagged;
  for (NodeIndex v : plan.plan.flagged.Members()) flagged.push_back(g.label(v));
  std::sort(flagged.begin(), flagged.end());
  EXPECT_EQ(flagged, (std::vector<std::string>{"v1", "v3", "v6"}));
}

TEST_F(CliTest, OptimizeZeroMemory) {
  const CmdResult r = Exec("optimize -g " + Data("replica_toy.json") + " --memory 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"flagged\": []"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"total_score\": 0"), std::string::npos) << r.out;
}

TEST_F(CliTest, ExitCodes) {
  WriteFile(Tmp("bad.json"), "{\n  \"nodes\": [\n");
  CmdResult r = Exec("optimize -g " + Tmp("bad.json") + " --memory 1GB", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line "), std::string::npos) << r.out;
  EXPECT_EQ(Exec("validate -g " + Tmp("bad.json")).code, 2);
  EXPECT_EQ(Exec("optimize -g " + Data("replica_toy.json") + " --memory=-1GB").code, 3);
  EXPECT_EQ(Exec("generate --nodes 20 --max-outdegree 0").code, 3);
  EXPECT_EQ(Exec("validate -g " + Data("replica_toy.json")).code, 0);
}

TEST_F(CliTest, SimulateChain) {
  const std::string cm = " --cost-model " + Data("desk_cost_model.json");
  ASSERT_EQ(Exec("optimize -g " + Data("chain.json") + " --memory 1GB -o " +
                 Tmp("plan.json") + cm)
                .code,
            0);
  const CmdResult r = Exec("simulate -g " + Data("chain.json") + " --plan " + Tmp("plan.json") + cm);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("realized_savings_seconds: 3\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("end_to_end_seconds: 15\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateEmptyPlanSavesNothing) {
  WriteFile(Tmp("plan.json"), R"({"order": ["v1", "v2"], "flagged": []})");
  const CmdResult r = Exec("simulate -g " + Data("chain.json") + " --plan " + Tmp("plan.json") +
                     " --cost-model " + Data("desk_cost_model.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("realized_savings_seconds: 0\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateUnknownNodeFails) {
  WriteFile(Tmp("plan.json"), R"({"order": ["v1", "zz"], "flagged": []})");
  EXPECT_EQ(Exec("simulate -g " + Data("chain.json") + " --plan " + Tmp("plan.json")).code, 2);
}

TEST_F(CliTest, PlanSurvivesSimulateRoundTrip) {
  ASSERT_EQ(Exec("optimize -g " + Data("replica_toy.json") + " --memory 100GB -o " +
                 Tmp("plan.json"))
                .code,
            0);
  const CmdResult r = Exec("simulate -g " + Data("replica_toy.json") + " --plan " +
                     Tmp("plan.json") + " --format json --emit-trace " + Tmp("trace.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"model_peak_bytes\": 100000000000"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(Tmp("trace.json")));
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const std::string args = "generate --nodes 40 --ratio 2 --max-outdegree 3 --seed 7 -o ";
  ASSERT_EQ(Exec(args + Tmp("a.json")).code, 0);
  ASSERT_EQ(Exec(args + Tmp("b.json")).code, 0);
  EXPECT_EQ(ReadFile(Tmp("a.json")), ReadFile(Tmp("b.json")));
  EXPECT_EQ(Exec("validate -g " + Tmp("a.json")).code, 0);
}

TEST_F(CliTest, CompareReplicaToy) {
  const CmdResult r = Exec("compare -g " + Data("replica_toy.json") +
                     " --memory 100GB --format csv --sa-iterations 500");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("schema_version,", 0), 0u);
  EXPECT_NE(r.out.find("1,mkp,madfs,"), std::string::npos);
  EXPECT_NE(r.out.find(",210,"), std::string::npos);
  EXPECT_EQ(r.out, Exec("compare -g " + Data("replica_toy.json") +
                        " --memory 100GB --format csv --sa-iterations 500")
                       .out);
}

TEST_F(CliTest, ExportDot) {
  ASSERT_EQ(Exec("optimize -g " + Data("replica_toy.json") + " --memory 100GB -o " +
                 Tmp("plan.json"))
                .code,
            0);
  const CmdResult r = Exec("export-dot -g " + Data("replica_toy.json") + " --plan " +
                     Tmp("plan.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
  EXPECT_NE(r.out.find("#1"), std::string::npos);
}

TEST_F(CliTest, ScoreFillsMissingScores) {
  const CmdResult r = Exec("score -g " + Data("chain.json") + " --cost-model " +
                     Data("desk_cost_model.json"));
  ASSERT_EQ(r.code, 0);
  const GraphSpec spec = ParseWorkload(r.out);
  ASSERT_EQ(spec.nodes.size(), 2u);
  EXPECT_EQ(spec.nodes[0].speedup_score, 3.0);
}

}  // namespace
}  // namespace screfresh
