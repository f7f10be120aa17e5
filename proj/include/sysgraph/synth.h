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

// Synthetic run traces with known ground truth.
//
// A scenario is a set of component templates (processes that exist at
// start-up, processes spawned per request, and per-request interactions) plus
// noise sources whose instance counts are drawn independently of workload.
// Every host gets an "init" process (pid 1) that parents baseline and noise
// processes.
//
// Generation of one run, for workload w:
//   1. baseline spawns, in template order, and LISTEN for templates with a
//      listen endpoint;
//   2. noise spawns from init, count ~ uniform[min, max] per source;
//   3. for each request r: one REQUEST, then the per-request spawns of every
//      template, then its interactions. An interaction (exe -> peer) links the
//      instance spawned for this request when the template spawns per
//      request, else its first baseline instance; it is IPC on one host and
//      NET across hosts, repeated `messages` times (drawn once per run);
//   4. fault effects that add processes.
//
// Randomness: mt19937_64 seeded with the run seed; uniform integers on
// [lo, hi] are lo + (next() mod (hi - lo + 1)). Dataset-level draws
// (workload, fault magnitude) use a second mt19937_64 seeded with
// splitmix64(run seed). Run i of a dataset uses run seed = seed + i, normal
// runs first.

#ifndef SYSGRAPH_SYNTH_H_
#define SYSGRAPH_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sysgraph/embedding.h"
#include "sysgraph/trace.h"

namespace sysgraph {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64";
inline constexpr std::string_view kInitExe = "init";
inline constexpr Pid kInitPid = 1;

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [lo, hi]; requires lo <= hi.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct ComponentTemplate {
  std::string exe;
  std::string host;
  std::string parent{kInitExe};  // a template exe on the same host, or init
  std::uint32_t baseline_instances = 0;
  std::uint32_t per_request_spawn_count = 0;
  std::vector<std::string> per_request_ipc_edges;  // peer template exes
  std::string listen_endpoint;                    // optional

  bool operator==(const ComponentTemplate&) const = default;
};

struct NoiseSource {
  std::string exe;
  std::string host;
  std::uint32_t min = 0;
  std::uint32_t max = 0;

  bool operator==(const NoiseSource&) const = default;
};

enum class FaultMode { kSuppressSpawn, kExtraSpawn, kDropEdge, kAlienProcess };

inline constexpr FaultMode kAllFaultModes[] = {
    FaultMode::kSuppressSpawn, FaultMode::kExtraSpawn, FaultMode::kDropEdge,
    FaultMode::kAlienProcess};

std::string_view to_string(FaultMode mode);
std::optional<FaultMode> parse_fault_mode(std::string_view text);

// Effects, for a component target T (noise targets in brackets):
//   SUPPRESS_SPAWN  the last `magnitude` per-request spawns of T never happen
//                   [magnitude fewer noise instances, floored at zero];
//   EXTRA_SPAWN     `magnitude` extra T processes after the last request;
//   DROP_EDGE       interactions involving T are omitted in the first
//                   `magnitude` requests (not valid for noise targets);
//   ALIEN_PROCESS   one T instance spawns `magnitude` processes named
//                   alien_exe(T), an exe never produced otherwise.
struct FaultSpec {
  FaultMode mode = FaultMode::kSuppressSpawn;
  std::string target;
  std::uint32_t magnitude = 1;

  bool operator==(const FaultSpec&) const = default;
};

std::string alien_exe(std::string_view target);

struct ScenarioSpec {
  std::vector<ComponentTemplate> components;
  std::vector<NoiseSource> noise;
  std::string request_host;
  std::string request_endpoint;
  std::uint64_t seed = 0;
  std::map<FaultMode, std::string> fault_targets;
  std::uint32_t fault_magnitude_min = 1;
  std::uint32_t fault_magnitude_max = 2;

  bool operator==(const ScenarioSpec&) const = default;
};

// Two-host cloud-controller-like scenario: count-linear spawns (qemu-kvm x2
// per request, lvcreate, brctl, iscsiadm), a degree-linear server
// (ovsdb-server), constant background services and three noise sources.
ScenarioSpec default_scenario();

// Throws ValidationError.
void validate(const ScenarioSpec& spec);

std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(std::string_view json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Throws PreconditionError when workload is zero, or the fault is invalid
// for the scenario (unknown target, infeasible magnitude).
RunTrace generate_run(const ScenarioSpec& spec, std::uint64_t workload,
                      const std::optional<FaultSpec>& fault,
                      std::uint64_t seed, std::string run_id);

inline RunTrace generate_run(const ScenarioSpec& spec, std::uint64_t workload,
                             const std::optional<FaultSpec>& fault = {}) {
  return generate_run(spec, workload, fault, spec.seed, "run");
}

// Largest magnitude generate_run accepts for this mode/target at workload w.
std::optional<std::uint32_t> max_fault_magnitude(const ScenarioSpec& spec,
                                                 FaultMode mode,
                                                 std::string_view target,
                                                 std::uint64_t workload);

struct DatasetOptions {
  std::uint32_t n_normal = 60;
  std::uint32_t n_fault = 120;
  std::uint64_t workload_min = 1;
  std::uint64_t workload_max = 5;
  std::uint64_t seed = 0;
};

struct ManifestEntry {
  std::string run_id;
  RunLabel label = RunLabel::kNormal;
  std::uint64_t workload = 0;
  std::optional<FaultSpec> fault;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::string rng{kRngAlgorithm};
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;

  bool operator==(const DatasetManifest&) const = default;
};

struct GeneratedRun {
  ManifestEntry entry;
  RunTrace trace;
};

// In-memory dataset. Fault modes are assigned round-robin in kAllFaultModes
// order with targets from spec.fault_targets; magnitudes are drawn on
// [fault_magnitude_min, fault_magnitude_max] and capped to what the run can
// express. Requires n_normal >= 10.
std::vector<GeneratedRun> generate_runs(const ScenarioSpec& spec,
                                        const DatasetOptions& options);

// Writes manifest.tsv, scenario.json and one <run_id>.trace per run.
DatasetManifest generate_dataset(const ScenarioSpec& spec,
                                 const DatasetOptions& options,
                                 const std::filesystem::path& dir);

// Manifest file:
//   #manifest/1 <TAB> rng=<name> <TAB> seed=<n>
//   columns <TAB> run_id <TAB> label <TAB> workload <TAB> fault_mode
//           <TAB> fault_target <TAB> fault_magnitude
//   <one record per run; fault fields empty for NORMAL runs>
inline constexpr std::string_view kManifestFile = "manifest.tsv";

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

enum class FeatureClass { kAffine, kNoise };

// Ground truth for fault-free runs of the scenario: features whose value is
// an exact affine function of workload, and features driven by noise draws.
std::map<FeatureId, FeatureClass> expected_feature_classes(
    const ScenarioSpec& spec);

}  // namespace sysgraph

#endif  // SYSGRAPH_SYNTH_H_
