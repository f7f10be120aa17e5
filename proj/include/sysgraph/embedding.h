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

// Bag-of-nodes embedding: two dimensions per executable name, the number of
// processes running it and the sum of their degrees.

#ifndef SYSGRAPH_EMBEDDING_H_
#define SYSGRAPH_EMBEDDING_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sysgraph/system_graph.h"

namespace sysgraph {

enum class Metric { kCount, kDegree };

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view text);

struct FeatureId {
  std::string exe;
  Metric metric = Metric::kCount;

  auto operator<=>(const FeatureId&) const = default;
};

std::string to_string(const FeatureId& feature);

// Ordered list of features: exes in lexicographic order, COUNT before DEGREE
// for each. Index 2*i is (exe_i, COUNT), index 2*i+1 is (exe_i, DEGREE).
class FeatureRegistry {
 public:
  FeatureRegistry() = default;

  // Deduplicates and sorts. Empty names are rejected.
  explicit FeatureRegistry(const std::set<std::string>& exes);

  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  std::span<const FeatureId> features() const { return features_; }
  const FeatureId& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<std::string>& exes() const { return exes_; }

  bool contains_exe(std::string_view exe) const;
  std::optional<std::size_t> exe_index(std::string_view exe) const;
  std::optional<std::size_t> index_of(const FeatureId& feature) const;

  bool operator==(const FeatureRegistry& other) const {
    return exes_ == other.exes_;
  }

 private:
  std::vector<std::string> exes_;
  std::vector<FeatureId> features_;
};

// Union of exe names across the corpus. Throws PreconditionError when the
// corpus contains no node at all.
FeatureRegistry build_registry(std::span<const SystemGraph> graphs);

struct EmbeddingVector {
  std::vector<std::uint64_t> values;  // parallel to the registry
  std::set<std::string> unknown_exes;  // exes absent from the registry

  std::uint64_t value(const FeatureRegistry& registry,
                      const FeatureId& feature) const;

  bool operator==(const EmbeddingVector&) const = default;
};

EmbeddingVector embed(const SystemGraph& graph,
                      const FeatureRegistry& registry);

}  // namespace sysgraph

#endif  // SYSGRAPH_EMBEDDING_H_
