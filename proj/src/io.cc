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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace screfresh {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

namespace {

int LineAt(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the `index`-th element of the array stored under `key` in the
// top-level object, or 0 if it cannot be found.
int LocateElement(std::string_view text, std::string_view key, int index) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  size_t string_start = 0;
  std::string last_key;
  bool in_target = false;
  int target_depth = 0;
  int element = -1;
  bool expect_element = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
        if (depth == 1 && !in_target) {
          last_key = std::string(text.substr(string_start, i - string_start));
        }
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (in_target && expect_element && depth == target_depth) {
      expect_element = false;
      if (c != ']' && ++element == index) return LineAt(text, i);
    }
    switch (c) {
      case '"':
        in_string = true;
        string_start = i + 1;
        break;
      case '{':
      case '[':
        if (c == '[' && depth == 1 && !in_target && last_key == key) {
          in_target = true;
          target_depth = depth + 1;
          expect_element = true;
        }
        ++depth;
        break;
      case '}':
      case ']':
        --depth;
        if (in_target && depth < target_depth) return 0;
        break;
      case ',':
        if (in_target && depth == target_depth) expect_element = true;
        break;
      default:
        break;
    }
  }
  return 0;
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(LineAt(text, offset), "malformed JSON: " + std::string(e.what()));
  }
}

void RejectUnknown(const json& obj, const std::set<std::string>& allowed,
                   const std::string& where, int line) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ParseError(line, "unknown field \"" + key + "\" in " + where);
    }
  }
}

std::optional<double> OptionalNumber(const json& obj, const char* key,
                                     const std::string& where, int line) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_number()) {
    throw ParseError(line, std::string(key) + " in " + where + " must be a number or null");
  }
  return obj[key].get<double>();
}

double Bandwidth(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj[key];
  if (value.is_string() && value.get<std::string>() == "inf") return kInfiniteBandwidth;
  if (value.is_number()) return value.get<double>();
  throw ParseError(0, std::string(key) + " must be a number or \"inf\"");
}

json BandwidthJson(double bw) {
  if (std::isinf(bw)) return "inf";
  return bw;
}

}  // namespace

GraphSpec ParseWorkload(std::string_view text) {
  const json doc = ParseJson(text);
  if (!doc.is_object()) throw ParseError(1, "workload must be a JSON object");
  RejectUnknown(doc, {"nodes", "edges"}, "workload", 1);
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError(1, "workload needs a \"nodes\" array");
  }
  GraphSpec spec;
  const json& nodes = doc["nodes"];
  for (size_t i = 0; i < nodes.size(); ++i) {
    const int line = LocateElement(text, "nodes", static_cast<int>(i));
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& node = nodes[i];
    if (!node.is_object()) throw ParseError(line, where + " must be an object");
    RejectUnknown(node, {"id", "size_bytes", "speedup_score", "compute_seconds"},
                  where, line);
    if (!node.contains("id") || !node["id"].is_string()) {
      throw ParseError(line, where + " needs a string \"id\"");
    }
    if (!node.contains("size_bytes") || !node["size_bytes"].is_number_integer()) {
      throw ParseError(line, where + " needs an integer \"size_bytes\"");
    }
    NodeMeta meta;
    meta.id = node["id"].get<std::string>();
    if (node["size_bytes"].is_number_unsigned()) {
      meta.size = static_cast<Bytes>(node["size_bytes"].get<std::uint64_t>());
    } else {
      meta.size = node["size_bytes"].get<std::int64_t>();
    }
    if (meta.size < 0) throw ParseError(line, where + " has a negative size");
    meta.speedup_score = OptionalNumber(node, "speedup_score", where, line);
    meta.compute_seconds = OptionalNumber(node, "compute_seconds", where, line);
    if (meta.speedup_score && *meta.speedup_score < 0.0) {
      throw ParseError(line, where + " has a negative speedup_score");
    }
    if (meta.compute_seconds && *meta.compute_seconds < 0.0) {
      throw ParseError(line, where + " has a negative compute_seconds");
    }
    spec.nodes.push_back(std::move(meta));
  }
  if (doc.contains("edges")) {
    const json& edges = doc["edges"];
    if (!edges.is_array()) throw ParseError(1, "\"edges\" must be an array");
    for (size_t i = 0; i < edges.size(); ++i) {
      const json& edge = edges[i];
      if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
          !edge[1].is_string()) {
        throw ParseError(LocateElement(text, "edges", static_cast<int>(i)),
                         "edges[" + std::to_string(i) +
                             "] must be a [parent, child] pair of ids");
      }
      spec.edges.push_back({edge[0].get<std::string>(), edge[1].get<std::string>()});
    }
  }

  // Anchor graph-level errors to the offending element.
  std::set<std::string> ids;
  for (size_t i = 0; i < spec.nodes.size(); ++i) {
    if (!ids.insert(spec.nodes[i].id).second) {
      throw ParseError(LocateElement(text, "nodes", static_cast<int>(i)),
                       "duplicate node id \"" + spec.nodes[i].id + "\"");
    }
  }
  for (size_t i = 0; i < spec.edges.size(); ++i) {
    const auto& edge = spec.edges[i];
    for (const std::string* end : {&edge.parent, &edge.child}) {
      if (!ids.count(*end)) {
        throw ParseError(LocateElement(text, "edges", static_cast<int>(i)),
                         "edge " + edge.parent + " -> " + edge.child +
                             " references unknown node \"" + *end + "\"");
      }
    }
  }
  try {
    ValidateGraph(spec);
  } catch (const CycleError& e) {
    const auto& cycle = e.cycle();
    const EdgeSpec closing{cycle.back(), cycle.front()};
    const auto it = std::find(spec.edges.begin(), spec.edges.end(), closing);
    throw ParseError(LocateElement(text, "edges",
                                   static_cast<int>(it - spec.edges.begin())),
                     e.what());
  } catch (const GraphError& e) {
    throw ParseError(0, e.what());
  }
  return spec;
}

std::string SerializeWorkload(const GraphSpec& spec) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const auto& node : spec.nodes) {
    ordered_json entry;
    entry["id"] = node.id;
    entry["size_bytes"] = node.size;
    entry["speedup_score"] =
        node.speedup_score ? ordered_json(*node.speedup_score) : ordered_json(nullptr);
    entry["compute_seconds"] = node.compute_seconds
                                   ? ordered_json(*node.compute_seconds)
                                   : ordered_json(nullptr);
    doc["nodes"].push_back(std::move(entry));
  }
  doc["edges"] = ordered_json::array();
  for (const auto& edge : spec.edges) {
    doc["edges"].push_back({edge.parent, edge.child});
  }
  return doc.dump(2) + "\n";
}

CostModel ParseCostModel(std::string_view text) {
  const json doc = ParseJson(text);
  if (!doc.is_object()) throw ParseError(1, "cost model must be a JSON object");
  RejectUnknown(doc,
                {"disk_read_bw", "disk_write_bw", "mem_read_bw", "mem_write_bw",
                 "per_access_latency"},
                "cost model", 1);
  CostModel cm;
  cm.disk_read_bw = Bandwidth(doc, "disk_read_bw", cm.disk_read_bw);
  cm.disk_write_bw = Bandwidth(doc, "disk_write_bw", cm.disk_write_bw);
  cm.mem_read_bw = Bandwidth(doc, "mem_read_bw", cm.mem_read_bw);
  cm.mem_write_bw = Bandwidth(doc, "mem_write_bw", cm.mem_write_bw);
  if (doc.contains("per_access_latency")) {
    if (!doc["per_access_latency"].is_number()) {
      throw ParseError(0, "per_access_latency must be a number");
    }
    cm.per_access_latency = doc["per_access_latency"].get<double>();
  }
  try {
    cm.Validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return cm;
}

std::string SerializeCostModel(const CostModel& cm) {
  ordered_json doc;
  doc["disk_read_bw"] = BandwidthJson(cm.disk_read_bw);
  doc["disk_write_bw"] = BandwidthJson(cm.disk_write_bw);
  doc["mem_read_bw"] = BandwidthJson(cm.mem_read_bw);
  doc["mem_write_bw"] = BandwidthJson(cm.mem_write_bw);
  doc["per_access_latency"] = cm.per_access_latency;
  return doc.dump(2) + "\n";
}

std::string SerializePlan(const DepGraph& g, const Plan& plan, int iterations) {
  ordered_json doc;
  doc["order"] = ordered_json::array();
  for (NodeIndex v : plan.order.sequence()) doc["order"].push_back(g.label(v));
  std::vector<NodeIndex> flagged = plan.flagged.Members();
  std::sort(flagged.begin(), flagged.end(), [&](NodeIndex a, NodeIndex b) {
    return g.label_rank(a) < g.label_rank(b);
  });
  doc["flagged"] = ordered_json::array();
  for (NodeIndex v : flagged) doc["flagged"].push_back(g.label(v));
  doc["total_score"] = plan.total_score;
  doc["peak_memory_bytes"] = plan.peak_memory;
  doc["iterations"] = iterations;
  return doc.dump(2) + "\n";
}

PlanFile ParsePlan(std::string_view text, const DepGraph& g) {
  const json doc = ParseJson(text);
  if (!doc.is_object()) throw ParseError(1, "plan must be a JSON object");
  RejectUnknown(doc, {"order", "flagged", "total_score", "peak_memory_bytes", "iterations"},
                "plan", 1);
  for (const char* key : {"order", "flagged"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw ParseError(1, std::string("plan needs an \"") + key + "\" array");
    }
  }
  auto lookup = [&](const json& id) {
    if (!id.is_string()) throw ParseError(0, "plan ids must be strings");
    auto v = g.Find(id.get<std::string>());
    if (!v) {
      throw PlanMismatchError("plan references unknown node \"" +
                              id.get<std::string>() + "\"");
    }
    return *v;
  };
  std::vector<NodeIndex> sequence;
  for (const auto& id : doc["order"]) sequence.push_back(lookup(id));
  if (static_cast<int>(sequence.size()) != g.size()) {
    throw PlanMismatchError("plan order lists " + std::to_string(sequence.size()) +
                            " nodes, graph has " + std::to_string(g.size()));
  }
  PlanFile file;
  try {
    file.plan.order = ExecOrder(std::move(sequence));
  } catch (const std::invalid_argument&) {
    throw PlanMismatchError("plan order repeats a node");
  }
  if (!IsTopological(g, file.plan.order)) {
    throw PlanMismatchError("plan order violates a dependency");
  }
  file.plan.flagged = FlagSet(g.size());
  for (const auto& id : doc["flagged"]) file.plan.flagged.Insert(lookup(id));
  file.plan.total_score = TotalScore(g, file.plan.flagged);
  file.plan.peak_memory = PeakMemory(g, file.plan.order, file.plan.flagged);
  if (doc.contains("iterations") && doc["iterations"].is_number_integer()) {
    file.iterations = doc["iterations"].get<int>();
  }
  return file;
}

std::string SerializeReport(const SimReport& report) {
  ordered_json doc;
  doc["end_to_end_seconds"] = report.end_to_end;
  doc["baseline_end_to_end_seconds"] = report.baseline_end_to_end;
  doc["realized_savings_seconds"] = report.realized_savings;
  doc["model_peak_bytes"] = report.model_peak;
  doc["realized_peak_bytes"] = report.realized_peak;
  doc["memory_budget_bytes"] = report.budget;
  doc["memory_violation"] = report.memory_violation;
  return doc.dump(2) + "\n";
}

std::string SerializeTrace(const DepGraph& g, const SimReport& report) {
  ordered_json doc = ordered_json::array();
  for (const auto& event : report.events) {
    ordered_json entry;
    entry["time"] = event.time;
    entry["kind"] = std::string(EventKindName(event.kind));
    entry["node"] = g.label(event.node);
    if (event.source) {
      entry["from"] = g.label(*event.source);
      entry["medium"] = event.from_memory ? "memory" : "disk";
    }
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

GenParams ParseGenParams(std::string_view text) {
  const json doc = ParseJson(text);
  if (!doc.is_object()) throw ParseError(1, "generator params must be a JSON object");
  RejectUnknown(doc,
                {"node_count", "height_width_ratio", "max_outdegree", "stage_stdev",
                 "source_size_pool", "seed"},
                "generator params", 1);
  GenParams p;
  try {
    if (doc.contains("node_count")) p.node_count = doc["node_count"].get<int>();
    if (doc.contains("height_width_ratio")) {
      p.height_width_ratio = doc["height_width_ratio"].get<double>();
    }
    if (doc.contains("max_outdegree")) p.max_outdegree = doc["max_outdegree"].get<int>();
    if (doc.contains("stage_stdev")) p.stage_stdev = doc["stage_stdev"].get<double>();
    if (doc.contains("source_size_pool")) {
      p.source_size_pool = doc["source_size_pool"].get<std::vector<Bytes>>();
    }
    if (doc.contains("seed")) p.seed = doc["seed"].get<std::uint64_t>();
  } catch (const json::type_error& e) {
    throw ParseError(0, std::string("generator params: ") + e.what());
  }
  return p;
}

std::string ExportDot(const DepGraph& g, const Plan* plan) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph workload {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  std::vector<NodeIndex> nodes;
  if (plan) {
    nodes = plan->order.sequence();
  } else {
    for (int v = 0; v < g.size(); ++v) nodes.push_back(v);
  }
  for (NodeIndex v : nodes) {
    std::string label = g.label(v);
    if (plan) label += "\\n#" + std::to_string(plan->order.PositionOf(v));
    label += "\\n" + FormatBytes(g.node_size(v));
    out << "  " << quote(g.label(v)) << " [label=\"" << label << "\"";
    if (plan && plan->flagged.Contains(v)) {
      out << ", style=filled, fillcolor=\"#9ecae1\", penwidth=2";
    }
    out << "];\n";
  }
  for (const auto& [p, c] : g.edges()) {
    out << "  " << quote(g.label(p)) << " -> " << quote(g.label(c)) << ";\n";
  }
  out << "}\n";
  return out.str();
}

Bytes ParseBytes(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  size_t split = 0;
  while (split < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[split])) || s[split] == '.')) {
    ++split;
  }
  if (split == 0) throw std::invalid_argument("not a byte quantity: \"" + s + "\"");
  std::string number = s.substr(0, split);
  std::string unit = s.substr(split);
  std::transform(unit.begin(), unit.end(), unit.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  static const std::vector<std::pair<std::string, double>> units = {
      {"", 1.0},          {"B", 1.0},
      {"KB", 1e3},        {"MB", 1e6},
      {"GB", 1e9},        {"TB", 1e12},
      {"KIB", 1024.0},    {"MIB", 1048576.0},
      {"GIB", 1073741824.0}, {"TIB", 1099511627776.0},
  };
  auto it = std::find_if(units.begin(), units.end(),
                         [&](const auto& u) { return u.first == unit; });
  if (it == units.end()) {
    throw std::invalid_argument("unknown byte unit \"" + unit + "\"");
  }
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(number, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != number.size()) {
    throw std::invalid_argument("not a byte quantity: \"" + s + "\"");
  }
  const double bytes = value * it->second;
  if (bytes > 9.2e18) throw std::invalid_argument("byte quantity too large");
  return static_cast<Bytes>(std::llround(bytes));
}

std::string FormatBytes(Bytes bytes) {
  static const char* kUnits[] = {"B", "KB", "MB", "GB", "TB"};
  double value = static_cast<double>(bytes);
  int unit = 0;
  while (std::abs(value) >= 1000.0 && unit < 4) {
    value /= 1000.0;
    ++unit;
  }
  std::ostringstream out;
  if (unit == 0 || value == std::floor(value)) {
    out << static_cast<long long>(std::llround(value)) << " " << kUnits[unit];
  } else {
    out.precision(3);
    out << value << " " << kUnits[unit];
  }
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << contents;
}

}  // namespace screfresh
