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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "sysgraph/errors.h"
#include "test_util.h"

namespace sysgraph {
namespace {

using ::sysgraph::testing::random_trace;

// VM-creation fixture: libvirtd spawns two qemu-kvm per request and talks
// to each of them.
RunTrace vm_fixture(int requests) {
  RunTrace t;
  t.run_id = "vm-" + std::to_string(requests);
  t.label = RunLabel::kNormal;
  t.workload = static_cast<std::uint64_t>(requests);
  Pid next = 100;
  double ts = 0;
  for (int r = 0; r < requests; ++r) {
    t.events.push_back(Event::request(ts++, "controller", "controller:8774"));
    for (int k = 0; k < 2; ++k) {
      const Pid q = next++;
      t.events.push_back(
          Event::spawn(ts++, "compute-1", 10, "libvirtd", q, "qemu-kvm"));
      t.events.push_back(
          Event::ipc(ts++, "compute-1", q, "qemu-kvm", 10, "libvirtd"));
    }
  }
  return t;
}

TEST(FeatureRegistryTest, OrderIsLexicographicCountBeforeDegree) {
  const FeatureRegistry reg({"qemu-kvm", "libvirtd", "brctl"});
  ASSERT_EQ(reg.size(), 6u);
  EXPECT_EQ(reg[0], (FeatureId{"brctl", Metric::kCount}));
  EXPECT_EQ(reg[1], (FeatureId{"brctl", Metric::kDegree}));
  EXPECT_EQ(reg[2], (FeatureId{"libvirtd", Metric::kCount}));
  EXPECT_EQ(reg[5], (FeatureId{"qemu-kvm", Metric::kDegree}));
  EXPECT_EQ(reg.index_of({"libvirtd", Metric::kDegree}), 3u);
  EXPECT_FALSE(reg.index_of({"nope", Metric::kCount}).has_value());
  EXPECT_TRUE(reg.contains_exe("brctl"));
  EXPECT_FALSE(reg.contains_exe("nope"));
}

TEST(FeatureRegistryTest, EmptyNameIsRejected) {
  EXPECT_THROW(FeatureRegistry({"a", ""}), ValidationError);
}

TEST(BuildRegistryTest, UnionAcrossCorpus) {
  RunTrace a;
  a.events = {Event::ipc(0, "h", 1, "x", 2, "y")};
  RunTrace b;
  b.events = {Event::ipc(0, "h", 1, "x", 3, "z")};
  const std::vector<SystemGraph> graphs = {build_graph(a), build_graph(b)};
  const FeatureRegistry reg = build_registry(graphs);
  EXPECT_EQ(reg.exes(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(BuildRegistryTest, NoNodesIsAnError) {
  const std::vector<SystemGraph> graphs = {SystemGraph{}, SystemGraph{}};
  EXPECT_THROW(build_registry(graphs), PreconditionError);
  EXPECT_THROW(build_registry({}), PreconditionError);
}

TEST(EmbedTest, OneRequestGivesTwoQemu) {
  const SystemGraph g = build_graph(vm_fixture(1));
  const FeatureRegistry reg({"libvirtd", "qemu-kvm"});
  const EmbeddingVector v = embed(g, reg);
  EXPECT_EQ(v.value(reg, {"qemu-kvm", Metric::kCount}), 2u);
  EXPECT_EQ(v.value(reg, {"libvirtd", Metric::kCount}), 1u);
  // Each qemu-kvm has one SPAWN in and one IPC out.
  EXPECT_EQ(v.value(reg, {"qemu-kvm", Metric::kDegree}), 4u);
  EXPECT_EQ(v.value(reg, {"libvirtd", Metric::kDegree}), 4u);
}

TEST(EmbedTest, ThreeRequestsGiveSixQemu) {
  const SystemGraph g = build_graph(vm_fixture(3));
  const FeatureRegistry reg({"libvirtd", "qemu-kvm"});
  EXPECT_EQ(embed(g, reg).value(reg, {"qemu-kvm", Metric::kCount}), 6u);
}

TEST(EmbedTest, EmptyGraphGivesZeroVector) {
  const FeatureRegistry reg({"a", "b"});
  const EmbeddingVector v = embed(SystemGraph{}, reg);
  EXPECT_EQ(v.values, std::vector<std::uint64_t>(4, 0));
  EXPECT_TRUE(v.unknown_exes.empty());
}

TEST(EmbedTest, UnknownExesAreSurfaced) {
  RunTrace t;
  t.events = {Event::spawn(0, "h", 1, "known", 2, "stranger")};
  const FeatureRegistry reg({"known"});
  const EmbeddingVector v = embed(build_graph(t), reg);
  EXPECT_EQ(v.unknown_exes, (std::set<std::string>{"stranger"}));
  EXPECT_EQ(v.value(reg, {"known", Metric::kCount}), 1u);
  EXPECT_EQ(v.value(reg, {"known", Metric::kDegree}), 1u);
}

FeatureRegistry registry_of(const SystemGraph& g) {
  std::set<std::string> exes;
  for (const auto& [key, exe] : g.nodes()) exes.insert(exe);
  if (exes.empty()) exes.insert("placeholder");
  return FeatureRegistry(exes);
}

TEST(EmbedPropertyTest, DegreeSumIsTwiceEdgeCount) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const SystemGraph g = build_graph(random_trace(rng));
    const FeatureRegistry reg = registry_of(g);
    const EmbeddingVector v = embed(g, reg);
    std::uint64_t degree_sum = 0;
    std::uint64_t count_sum = 0;
    for (std::size_t k = 0; k < reg.size(); ++k) {
      (reg[k].metric == Metric::kDegree ? degree_sum : count_sum) += v.values[k];
    }
    EXPECT_EQ(degree_sum, 2 * g.edges().size());
    EXPECT_EQ(count_sum, g.nodes().size());
  }
}

TEST(EmbedPropertyTest, InvariantUnderPidRelabeling) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const RunTrace t = random_trace(rng);
    // Random bijection on pids 1..8 to 1001..1008, per host.
    std::map<std::pair<std::string, Pid>, Pid> relabel;
    std::vector<Pid> fresh(8);
    std::iota(fresh.begin(), fresh.end(), Pid{1001});
    for (const std::string host : {"host-0", "host-1"}) {
      std::shuffle(fresh.begin(), fresh.end(), rng);
      for (Pid p = 1; p <= 8; ++p) relabel[{host, p}] = fresh[p - 1];
    }
    RunTrace r = t;
    for (Event& e : r.events) {
      if (e.pid) e.pid = relabel.at({e.host, e.pid});
      if (e.ppid) e.ppid = relabel.at({e.host, e.ppid});
      if (e.peer_pid) e.peer_pid = relabel.at({e.effective_peer_host(), e.peer_pid});
    }
    const SystemGraph g = build_graph(t);
    const FeatureRegistry reg = registry_of(g);
    EXPECT_EQ(embed(build_graph(r), reg), embed(g, reg));
  }
}

TEST(EmbedPropertyTest, DisjointUnionIsAdditive) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const RunTrace a = random_trace(rng);
    RunTrace b = random_trace(rng);
    // Move b onto different hosts so the union is disjoint.
    for (Event& e : b.events) {
      e.host = "b-" + e.host;
      if (!e.peer_host.empty()) e.peer_host = "b-" + e.peer_host;
    }
    RunTrace both = a;
    for (Event e : b.events) {
      e.ts += 1e6;
      both.events.push_back(std::move(e));
    }
    const SystemGraph ga = build_graph(a);
    const SystemGraph gb = build_graph(b);
    const SystemGraph gu = build_graph(both);
    const FeatureRegistry reg = registry_of(gu);
    const EmbeddingVector va = embed(ga, reg);
    const EmbeddingVector vb = embed(gb, reg);
    const EmbeddingVector vu = embed(gu, reg);
    for (std::size_t k = 0; k < reg.size(); ++k) {
      EXPECT_EQ(vu.values[k], va.values[k] + vb.values[k]);
    }
  }
}

TEST(MetricTest, NamesRoundTrip) {
  EXPECT_EQ(parse_metric("COUNT"), Metric::kCount);
  EXPECT_EQ(parse_metric("DEGREE"), Metric::kDegree);
  EXPECT_FALSE(parse_metric("count").has_value());
  EXPECT_EQ(to_string(FeatureId{"qemu-kvm", Metric::kDegree}),
            "qemu-kvm:DEGREE");
}

}  // namespace
}  // namespace sysgraph
