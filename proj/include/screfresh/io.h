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

// File formats.
//
// Workload:   {"nodes":[{"id":str,"size_bytes":int,"speedup_score":num|null,
//              "compute_seconds":num|null}],"edges":[[parent,child],...]}
// Cost model: {"disk_read_bw":num,"disk_write_bw":num,
//              "mem_read_bw":"inf"|num,"mem_write_bw":"inf"|num,
//              "per_access_latency":num}
// Plan:       {"order":[ids],"flagged":[ids],"total_score":num,
//              "peak_memory_bytes":int,"iterations":int}
// Unknown fields are rejected everywhere.

#ifndef SCREFRESH_IO_H_
#define SCREFRESH_IO_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "screfresh/cost_model.h"
#include "screfresh/graph.h"
#include "screfresh/simulator.h"
#include "screfresh/workgen.h"

namespace screfresh {

// Malformed or schema-violating input. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// A plan that does not fit the graph it is applied to.
class PlanMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GraphSpec ParseWorkload(std::string_view text);
std::string SerializeWorkload(const GraphSpec& spec);

CostModel ParseCostModel(std::string_view text);
std::string SerializeCostModel(const CostModel& cm);

struct PlanFile {
  Plan plan;
  int iterations = 0;
};

std::string SerializePlan(const DepGraph& g, const Plan& plan, int iterations);
// Throws ParseError, or PlanMismatchError when ids do not match `g`.
PlanFile ParsePlan(std::string_view text, const DepGraph& g);

std::string SerializeReport(const SimReport& report);
// The report's events as a JSON array.
std::string SerializeTrace(const DepGraph& g, const SimReport& report);

// JSON mirror of GenParams; absent fields keep their defaults.
GenParams ParseGenParams(std::string_view text);

// Graphviz DOT. Flagged nodes are filled; with a plan, labels carry
// "#<position>".
std::string ExportDot(const DepGraph& g, const Plan* plan = nullptr);

// "123", "1.5GB", "100 MiB". Decimal suffixes are powers of 1000, binary
// ones powers of 1024. Throws std::invalid_argument.
Bytes ParseBytes(std::string_view text);
std::string FormatBytes(Bytes bytes);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace screfresh

#endif  // SCREFRESH_IO_H_
