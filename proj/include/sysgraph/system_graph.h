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

#ifndef SYSGRAPH_SYSTEM_GRAPH_H_
#define SYSGRAPH_SYSTEM_GRAPH_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "sysgraph/trace.h"

namespace sysgraph {

struct ProcessKey {
  std::string host;
  Pid pid = 0;

  auto operator<=>(const ProcessKey&) const = default;
};

std::string to_string(const ProcessKey& key);

enum class EdgeKind { kSpawn, kIpc, kNet };

std::string_view to_string(EdgeKind kind);

struct Edge {
  ProcessKey src;
  ProcessKey dst;
  EdgeKind kind = EdgeKind::kSpawn;

  auto operator<=>(const Edge&) const = default;
};

// Process-interaction graph of one run. Nodes are processes keyed by
// (host, pid) and typed by executable name; edges are directed and
// deduplicated per (src, dst, kind).
class SystemGraph {
 public:
  SystemGraph() = default;
  explicit SystemGraph(std::string run_id) : run_id_(std::move(run_id)) {}

  // Adds the node if absent. Throws GraphConsistencyError if the key is
  // already bound to a different exe.
  void add_node(const ProcessKey& key, const std::string& exe);

  // Both endpoints must already exist. Returns false for a duplicate.
  bool add_edge(const Edge& edge);

  // Folds one event into the graph. LISTEN and REQUEST are ignored.
  void apply(const Event& event);

  const std::string& run_id() const { return run_id_; }
  const std::map<ProcessKey, std::string>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }

  bool operator==(const SystemGraph& other) const {
    return run_id_ == other.run_id_ && nodes_ == other.nodes_ &&
           edges_ == other.edges_;
  }

 private:
  friend std::size_t node_degree(const SystemGraph&, const ProcessKey&);

  std::string run_id_;
  std::map<ProcessKey, std::string> nodes_;
  std::set<Edge> edges_;
  std::map<ProcessKey, std::size_t> degree_;
};

SystemGraph build_graph(const RunTrace& trace);

// In-degree plus out-degree over all edge kinds. A self-loop counts twice.
// Throws PreconditionError for an unknown key.
std::size_t node_degree(const SystemGraph& graph, const ProcessKey& key);

std::string to_dot(const SystemGraph& graph);
void export_dot(const SystemGraph& graph, const std::filesystem::path& path);

}  // namespace sysgraph

#endif  // SYSGRAPH_SYSTEM_GRAPH_H_
