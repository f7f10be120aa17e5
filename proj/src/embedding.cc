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

#include "sysgraph/embedding.h"

#include <algorithm>

#include "sysgraph/errors.h"

namespace sysgraph {

std::string_view to_string(Metric metric) {
  return metric == Metric::kCount ? "COUNT" : "DEGREE";
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "COUNT") return Metric::kCount;
  if (text == "DEGREE") return Metric::kDegree;
  return std::nullopt;
}

std::string to_string(const FeatureId& feature) {
  return feature.exe + ":" + std::string(to_string(feature.metric));
}

FeatureRegistry::FeatureRegistry(const std::set<std::string>& exes)
    : exes_(exes.begin(), exes.end()) {
  features_.reserve(2 * exes_.size());
  for (const std::string& exe : exes_) {
    if (exe.empty()) throw ValidationError("registry exe must be non-empty");
    features_.push_back({exe, Metric::kCount});
    features_.push_back({exe, Metric::kDegree});
  }
}

std::optional<std::size_t> FeatureRegistry::exe_index(
    std::string_view exe) const {
  auto it = std::lower_bound(exes_.begin(), exes_.end(), exe);
  if (it == exes_.end() || *it != exe) return std::nullopt;
  return static_cast<std::size_t>(it - exes_.begin());
}

bool FeatureRegistry::contains_exe(std::string_view exe) const {
  return exe_index(exe).has_value();
}

std::optional<std::size_t> FeatureRegistry::index_of(
    const FeatureId& feature) const {
  auto idx = exe_index(feature.exe);
  if (!idx) return std::nullopt;
  return 2 * *idx + (feature.metric == Metric::kDegree ? 1 : 0);
}

FeatureRegistry build_registry(std::span<const SystemGraph> graphs) {
  std::set<std::string> exes;
  for (const SystemGraph& g : graphs) {
    for (const auto& [key, exe] : g.nodes()) exes.insert(exe);
  }
  if (exes.empty()) {
    throw PreconditionError("cannot build a registry from an empty corpus");
  }
  return FeatureRegistry(exes);
}

std::uint64_t EmbeddingVector::value(const FeatureRegistry& registry,
                                     const FeatureId& feature) const {
  auto idx = registry.index_of(feature);
  if (!idx) throw PreconditionError("feature not in registry: " +
                                    to_string(feature));
  return values.at(*idx);
}

EmbeddingVector embed(const SystemGraph& graph,
                      const FeatureRegistry& registry) {
  EmbeddingVector out;
  out.values.assign(registry.size(), 0);
  for (const auto& [key, exe] : graph.nodes()) {
    auto idx = registry.exe_index(exe);
    if (!idx) {
      out.unknown_exes.insert(exe);
      continue;
    }
    out.values[2 * *idx] += 1;
    out.values[2 * *idx + 1] += node_degree(graph, key);
  }
  return out;
}

}  // namespace sysgraph
