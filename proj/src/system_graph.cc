/*
 * Copyright 2026 The sysgraph Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sysgraph/system_graph.h"

#include <fstream>
#include <sstream>

#include "sysgraph/errors.h"

namespace sysgraph {

namespace {

// DOT string literal; backslash and quote are the only specials.
std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string_view edge_style(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kSpawn: return "style=solid, color=black";
    case EdgeKind::kIpc: return "style=dashed, color=blue";
    case EdgeKind::kNet: return "style=dotted, color=red";
  }
  return "";
}

}  // namespace

std::string to_string(const ProcessKey& key) {
  return key.host + "/" + std::to_string(key.pid);
}

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kSpawn: return "SPAWN";
    case EdgeKind::kIpc: return "IPC";
    case EdgeKind::kNet: return "NET";
  }
  return "?";
}

void SystemGraph::add_node(const ProcessKey& key, const std::string& exe) {
  auto [it, inserted] = nodes_.emplace(key, exe);
  if (!inserted && it->second != exe) {
    throw GraphConsistencyError("process " + to_string(key) + " seen as '" +
                                it->second + "' and '" + exe + "'");
  }
  if (inserted) degree_.emplace(key, 0);
}

bool SystemGraph::add_edge(const Edge& edge) {
  if (!nodes_.contains(edge.src) || !nodes_.contains(edge.dst)) {
    throw PreconditionError("edge endpoint not in graph");
  }
  if (!edges_.insert(edge).second) return false;
  ++degree_[edge.src];
  ++degree_[edge.dst];
  return true;
}

void SystemGraph::apply(const Event& e) {
  switch (e.kind) {
    case EventKind::kSpawn: {
      ProcessKey parent{e.host, e.ppid};
      ProcessKey child{e.host, e.pid};
      add_node(parent, e.parent_exe);
      add_node(child, e.exe);
      add_edge({parent, child, EdgeKind::kSpawn});
      break;
    }
    case EventKind::kIpc:
    case EventKind::kNet: {
      ProcessKey src{e.host, e.pid};
      ProcessKey dst{e.effective_peer_host(), e.peer_pid};
      add_node(src, e.exe);
      add_node(dst, e.peer_exe);
      add_edge({src, dst,
                e.kind == EventKind::kIpc ? EdgeKind::kIpc : EdgeKind::kNet});
      break;
    }
    case EventKind::kListen:
    case EventKind::kRequest:
      break;
  }
}

SystemGraph build_graph(const RunTrace& trace) {
  SystemGraph graph(trace.run_id);
  for (const Event& e : trace.events) graph.apply(e);
  return graph;
}

std::size_t node_degree(const SystemGraph& graph, const ProcessKey& key) {
  auto it = graph.degree_.find(key);
  if (it == graph.degree_.end()) {
    throw PreconditionError("unknown process " + to_string(key));
  }
  return it->second;
}

std::string to_dot(const SystemGraph& graph) {
  std::ostringstream out;
  out << "digraph " << dot_quote(graph.run_id()) << " {\n";
  for (const auto& [key, exe] : graph.nodes()) {
    out << "  " << dot_quote(to_string(key)) << " [label=" << dot_quote(exe)
        << "];\n";
  }
  for (const Edge& edge : graph.edges()) {
    out << "  " << dot_quote(to_string(edge.src)) << " -> "
        << dot_quote(to_string(edge.dst)) << " [" << edge_style(edge.kind)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

void export_dot(const SystemGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << to_dot(graph);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace sysgraph
