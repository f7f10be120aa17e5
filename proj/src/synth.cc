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

#include "sysgraph/synth.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sysgraph/errors.h"
#include "sysgraph/text_format.h"

namespace sysgraph {

namespace {

using nlohmann::json;

constexpr std::string_view kManifestTag = "#manifest/1";
constexpr double kTickSeconds = 0.001;
constexpr std::uint64_t kTicksPerRequest = 1000;
constexpr std::uint64_t kMaxMessages = 3;
constexpr Pid kFirstPid = 100;

const ComponentTemplate* find_component(const ScenarioSpec& spec,
                                        std::string_view exe) {
  for (const auto& c : spec.components) {
    if (c.exe == exe) return &c;
  }
  return nullptr;
}

const NoiseSource* find_noise(const ScenarioSpec& spec, std::string_view exe) {
  for (const auto& n : spec.noise) {
    if (n.exe == exe) return &n;
  }
  return nullptr;
}

// True when `exe` takes part in some per-request interaction.
bool has_interactions(const ScenarioSpec& spec, std::string_view exe) {
  for (const auto& c : spec.components) {
    if (c.per_request_ipc_edges.empty()) continue;
    if (c.exe == exe) return true;
    for (const auto& peer : c.per_request_ipc_edges) {
      if (peer == exe) return true;
    }
  }
  return false;
}

std::string pid_string(Pid pid) { return std::to_string(pid); }

struct Proc {
  std::string host;
  Pid pid = 0;
  std::string exe;
};

// Event assembly for one run.
class RunBuilder {
 public:
  explicit RunBuilder(RunTrace& trace) : trace_(trace) {}

  void align_to(std::uint64_t tick) { tick_ = std::max(tick_, tick); }

  void push(Event e) {
    e.ts = static_cast<double>(tick_++) * kTickSeconds;
    trace_.events.push_back(std::move(e));
  }

  Proc init_of(const std::string& host) {
    return {host, kInitPid, std::string(kInitExe)};
  }

  Proc spawn(const Proc& parent, const std::string& exe) {
    Pid& next = next_pid_.try_emplace(parent.host, kFirstPid).first->second;
    Proc child{parent.host, next++, exe};
    push(Event::spawn(0, parent.host, parent.pid, parent.exe, child.pid, exe));
    return child;
  }

  void interact(const Proc& a, const Proc& b, std::uint64_t messages) {
    for (std::uint64_t m = 0; m < messages; ++m) {
      if (a.host == b.host) {
        push(Event::ipc(0, a.host, a.pid, a.exe, b.pid, b.exe));
      } else {
        push(Event::net(0, a.host, a.pid, a.exe, b.host, b.pid, b.exe,
                        b.host + ":" + pid_string(b.pid)));
      }
    }
  }

 private:
  RunTrace& trace_;
  std::uint64_t tick_ = 0;
  std::map<std::string, Pid> next_pid_;
};

void check_fault(const ScenarioSpec& spec, const FaultSpec& fault,
                 std::uint64_t workload) {
  if (fault.magnitude < 1) {
    throw PreconditionError("fault magnitude must be at least 1");
  }
  auto cap = max_fault_magnitude(spec, fault.mode, fault.target, workload);
  if (!cap) {
    throw PreconditionError("fault " + std::string(to_string(fault.mode)) +
                            " cannot target '" + fault.target + "'");
  }
  if (fault.magnitude > *cap) {
    throw PreconditionError("fault magnitude " +
                            std::to_string(fault.magnitude) + " exceeds " +
                            std::to_string(*cap) + " for target '" +
                            fault.target + "'");
  }
}

std::uint32_t json_u32(const json& j, const char* key, std::uint32_t fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::uint32_t>();
}

std::string json_str(const json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::string>();
}

}  // namespace

std::uint64_t SynthRng::uniform(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t draw = engine_();
  return span == 0 ? draw : lo + draw % span;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view to_string(FaultMode mode) {
  switch (mode) {
    case FaultMode::kSuppressSpawn: return "SUPPRESS_SPAWN";
    case FaultMode::kExtraSpawn: return "EXTRA_SPAWN";
    case FaultMode::kDropEdge: return "DROP_EDGE";
    case FaultMode::kAlienProcess: return "ALIEN_PROCESS";
  }
  return "?";
}

std::optional<FaultMode> parse_fault_mode(std::string_view text) {
  for (FaultMode mode : kAllFaultModes) {
    if (to_string(mode) == text) return mode;
  }
  return std::nullopt;
}

std::string alien_exe(std::string_view target) {
  return std::string(target) + "-alien";
}

ScenarioSpec default_scenario() {
  const std::string ctl = "controller";
  const std::string cmp = "compute-1";
  ScenarioSpec spec;
  spec.request_host = ctl;
  spec.request_endpoint = "controller:8774";
  spec.seed = 42;
  spec.components = {
      {"httpd", ctl, "init", 1, 0, {"nova-api"}, "controller:8774"},
      {"nova-api", ctl, "init", 1, 0, {"nova-compute"}, ""},
      {"cinder-volume", ctl, "init", 1, 0, {}, ""},
      {"lvcreate", ctl, "cinder-volume", 0, 1, {}, ""},
      {"nova-compute", cmp, "init", 1, 0, {"libvirtd"}, ""},
      {"libvirtd", cmp, "init", 1, 0, {}, ""},
      {"qemu-kvm", cmp, "libvirtd", 0, 2, {"libvirtd"}, ""},
      {"neutron-agent", cmp, "init", 1, 0, {}, ""},
      {"ovsdb-server", cmp, "init", 1, 0, {}, ""},
      {"brctl", cmp, "neutron-agent", 0, 1, {"ovsdb-server"}, ""},
      {"iscsiadm", cmp, "nova-compute", 0, 1, {"cinder-volume"}, ""},
  };
  spec.noise = {
      {"cron", ctl, 0, 4},
      {"kworker", ctl, 2, 8},
      {"sshd", cmp, 1, 5},
  };
  spec.fault_targets = {
      {FaultMode::kSuppressSpawn, "qemu-kvm"},
      {FaultMode::kExtraSpawn, "lvcreate"},
      {FaultMode::kDropEdge, "brctl"},
      {FaultMode::kAlienProcess, "nova-compute"},
  };
  spec.fault_magnitude_min = 1;
  spec.fault_magnitude_max = 2;
  return spec;
}

void validate(const ScenarioSpec& spec) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  if (spec.components.empty()) fail("scenario has no components");
  if (spec.request_host.empty() || spec.request_endpoint.empty()) {
    fail("scenario needs request_host and request_endpoint");
  }
  std::set<std::string> names{std::string(kInitExe)};
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const auto& c = spec.components[i];
    if (c.exe.empty() || c.host.empty()) fail("component needs exe and host");
    if (!names.insert(c.exe).second) fail("duplicate exe '" + c.exe + "'");
    if (c.baseline_instances == 0 && c.per_request_spawn_count == 0) {
      fail("component '" + c.exe + "' never runs");
    }
    if (c.parent != kInitExe) {
      const ComponentTemplate* parent = nullptr;
      for (std::size_t j = 0; j < i; ++j) {
        if (spec.components[j].exe == c.parent) parent = &spec.components[j];
      }
      if (!parent || parent->host != c.host || parent->baseline_instances == 0) {
        fail("parent of '" + c.exe +
             "' must be an earlier baseline component on the same host");
      }
    }
    if (!c.listen_endpoint.empty() && c.baseline_instances == 0) {
      fail("listening component '" + c.exe + "' needs a baseline instance");
    }
  }
  for (const auto& c : spec.components) {
    for (const auto& peer : c.per_request_ipc_edges) {
      if (!find_component(spec, peer)) {
        fail("interaction peer '" + peer + "' of '" + c.exe +
             "' is not a component");
      }
    }
  }
  for (const auto& n : spec.noise) {
    if (n.exe.empty() || n.host.empty()) fail("noise needs exe and host");
    if (!names.insert(n.exe).second) fail("duplicate exe '" + n.exe + "'");
    if (n.min > n.max) fail("noise '" + n.exe + "' has min > max");
  }
  for (const auto& name : names) {
    if (names.contains(alien_exe(name))) {
      fail("exe '" + alien_exe(name) + "' collides with an alien name");
    }
  }
  for (const auto& [mode, target] : spec.fault_targets) {
    if (!max_fault_magnitude(spec, mode, target, 1)) {
      fail("fault target '" + target + "' is invalid for " +
           std::string(to_string(mode)));
    }
  }
  if (spec.fault_magnitude_min < 1 ||
      spec.fault_magnitude_min > spec.fault_magnitude_max) {
    fail("fault magnitude range must satisfy 1 <= min <= max");
  }
}

std::optional<std::uint32_t> max_fault_magnitude(const ScenarioSpec& spec,
                                                 FaultMode mode,
                                                 std::string_view target,
                                                 std::uint64_t workload) {
  constexpr std::uint32_t kUnbounded = UINT32_MAX;
  const ComponentTemplate* comp = find_component(spec, target);
  const NoiseSource* noise = find_noise(spec, target);
  if (!comp && !noise) return std::nullopt;
  auto clamp32 = [](std::uint64_t v) {
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(v, kUnbounded));
  };
  switch (mode) {
    case FaultMode::kSuppressSpawn:
      if (noise) return kUnbounded;
      if (comp->per_request_spawn_count == 0) return std::nullopt;
      return clamp32(comp->per_request_spawn_count * workload);
    case FaultMode::kDropEdge:
      if (noise || !has_interactions(spec, target)) return std::nullopt;
      return clamp32(workload);
    case FaultMode::kExtraSpawn:
    case FaultMode::kAlienProcess:
      return kUnbounded;
  }
  return std::nullopt;
}

RunTrace generate_run(const ScenarioSpec& spec, std::uint64_t workload,
                      const std::optional<FaultSpec>& fault,
                      std::uint64_t seed, std::string run_id) {
  validate(spec);
  if (workload < 1) throw PreconditionError("workload must be at least 1");
  if (fault) check_fault(spec, *fault, workload);
  auto fault_is = [&](FaultMode mode) {
    return fault && fault->mode == mode;
  };
  auto targets = [&](std::string_view exe) {
    return fault && fault->target == exe;
  };

  SynthRng rng(seed);
  const std::uint64_t messages = rng.uniform(1, kMaxMessages);
  std::vector<std::uint64_t> noise_counts;
  for (const auto& n : spec.noise) noise_counts.push_back(rng.uniform(n.min, n.max));

  RunTrace trace;
  trace.run_id = std::move(run_id);
  trace.label = fault ? RunLabel::kFault : RunLabel::kNormal;
  trace.workload = workload;
  RunBuilder out(trace);

  std::map<std::string, std::vector<Proc>> baseline;
  auto parent_of = [&](const ComponentTemplate& c) {
    if (c.parent == kInitExe) return out.init_of(c.host);
    return baseline.at(c.parent).front();
  };

  for (const auto& c : spec.components) {
    auto& procs = baseline[c.exe];
    const Proc parent = parent_of(c);
    for (std::uint32_t i = 0; i < c.baseline_instances; ++i) {
      procs.push_back(out.spawn(parent, c.exe));
    }
    if (!c.listen_endpoint.empty()) {
      const Proc& p = procs.front();
      out.push(Event::listen(0, p.host, p.pid, p.exe, c.listen_endpoint));
    }
  }

  std::map<std::string, std::vector<Proc>> noise_procs;
  for (std::size_t i = 0; i < spec.noise.size(); ++i) {
    const auto& n = spec.noise[i];
    std::uint64_t k = noise_counts[i];
    if (targets(n.exe)) {
      if (fault_is(FaultMode::kSuppressSpawn)) {
        k = k > fault->magnitude ? k - fault->magnitude : 0;
      } else if (fault_is(FaultMode::kAlienProcess) && k == 0) {
        k = 1;
      }
    }
    for (std::uint64_t j = 0; j < k; ++j) {
      noise_procs[n.exe].push_back(out.spawn(out.init_of(n.host), n.exe));
    }
  }

  std::map<std::string, std::vector<Proc>> current;
  for (std::uint64_t r = 0; r < workload; ++r) {
    out.align_to((r + 1) * kTicksPerRequest);
    out.push(Event::request(0, spec.request_host, spec.request_endpoint));
    current.clear();
    for (const auto& c : spec.components) {
      const std::uint64_t total = c.per_request_spawn_count * workload;
      for (std::uint32_t j = 0; j < c.per_request_spawn_count; ++j) {
        const std::uint64_t index = r * c.per_request_spawn_count + j;
        if (targets(c.exe) && fault_is(FaultMode::kSuppressSpawn) &&
            index >= total - fault->magnitude) {
          continue;
        }
        current[c.exe].push_back(out.spawn(parent_of(c), c.exe));
      }
    }
    auto instance = [&](const ComponentTemplate& c) -> const Proc* {
      const auto& pool =
          c.per_request_spawn_count > 0 ? current[c.exe] : baseline[c.exe];
      return pool.empty() ? nullptr : &pool.front();
    };
    for (const auto& c : spec.components) {
      for (const auto& peer_exe : c.per_request_ipc_edges) {
        if (fault_is(FaultMode::kDropEdge) && r < fault->magnitude &&
            (targets(c.exe) || targets(peer_exe))) {
          continue;
        }
        const Proc* a = instance(c);
        const Proc* b = instance(*find_component(spec, peer_exe));
        if (a && b) out.interact(*a, *b, messages);
      }
    }
  }

  if (fault_is(FaultMode::kExtraSpawn)) {
    Proc parent;
    std::string exe = fault->target;
    if (const auto* c = find_component(spec, exe)) {
      parent = parent_of(*c);
    } else {
      parent = out.init_of(find_noise(spec, exe)->host);
    }
    for (std::uint32_t i = 0; i < fault->magnitude; ++i) out.spawn(parent, exe);
  } else if (fault_is(FaultMode::kAlienProcess)) {
    Proc parent;
    if (const auto* c = find_component(spec, fault->target)) {
      parent = c->baseline_instances > 0 ? baseline[c->exe].front()
                                         : current[c->exe].front();
    } else {
      parent = noise_procs[fault->target].front();
    }
    for (std::uint32_t i = 0; i < fault->magnitude; ++i) {
      out.spawn(parent, alien_exe(fault->target));
    }
  }
  return trace;
}

std::vector<GeneratedRun> generate_runs(const ScenarioSpec& spec,
                                        const DatasetOptions& options) {
  validate(spec);
  if (options.n_normal < 10) {
    throw PreconditionError(
        "need at least 10 failure-free runs for 10-fold cross-validation");
  }
  if (options.workload_min < 1 || options.workload_min > options.workload_max) {
    throw PreconditionError("workload range must satisfy 1 <= min <= max");
  }
  if (options.n_fault > 0 && spec.fault_targets.empty()) {
    throw PreconditionError("scenario declares no fault targets");
  }
  std::vector<FaultMode> modes;
  for (FaultMode m : kAllFaultModes) {
    if (spec.fault_targets.contains(m)) modes.push_back(m);
  }

  std::vector<GeneratedRun> runs;
  const std::uint64_t total = std::uint64_t{options.n_normal} + options.n_fault;
  runs.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    const std::uint64_t run_seed = options.seed + i;
    SynthRng setup(splitmix64(run_seed));
    const bool is_fault = i >= options.n_normal;
    const std::uint64_t index = is_fault ? i - options.n_normal : i;
    char id[32];
    std::snprintf(id, sizeof(id), "%s-%04llu", is_fault ? "fault" : "normal",
                  static_cast<unsigned long long>(index));

    ManifestEntry entry;
    entry.run_id = id;
    entry.label = is_fault ? RunLabel::kFault : RunLabel::kNormal;
    entry.workload = setup.uniform(options.workload_min, options.workload_max);
    if (is_fault) {
      FaultSpec fault;
      fault.mode = modes[index % modes.size()];
      fault.target = spec.fault_targets.at(fault.mode);
      const auto drawn = static_cast<std::uint32_t>(
          setup.uniform(spec.fault_magnitude_min, spec.fault_magnitude_max));
      const auto cap =
          max_fault_magnitude(spec, fault.mode, fault.target, entry.workload);
      fault.magnitude = std::min(drawn, cap.value_or(drawn));
      entry.fault = fault;
    }
    RunTrace trace =
        generate_run(spec, entry.workload, entry.fault, run_seed, entry.run_id);
    runs.push_back({std::move(entry), std::move(trace)});
  }
  return runs;
}

DatasetManifest generate_dataset(const ScenarioSpec& spec,
                                 const DatasetOptions& options,
                                 const std::filesystem::path& dir) {
  auto runs = generate_runs(spec, options);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  DatasetManifest manifest;
  manifest.seed = options.seed;
  for (const auto& run : runs) {
    write_trace(run.trace, dir / (run.entry.run_id + ".trace"));
    manifest.entries.push_back(run.entry);
  }
  write_manifest(manifest, dir / kManifestFile);
  std::ofstream scenario(dir / "scenario.json", std::ios::binary | std::ios::trunc);
  scenario << scenario_to_json(spec) << '\n';
  if (!scenario) throw IoError("cannot write scenario.json");
  return manifest;
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << kManifestTag << "\trng=" << manifest.rng << "\tseed=" << manifest.seed
      << '\n';
  out << "columns\trun_id\tlabel\tworkload\tfault_mode\tfault_target\t"
         "fault_magnitude\n";
  for (const auto& e : manifest.entries) {
    std::vector<std::string> fields = {e.run_id, std::string(to_string(e.label)),
                                       std::to_string(e.workload)};
    if (e.fault) {
      fields.emplace_back(to_string(e.fault->mode));
      fields.push_back(e.fault->target);
      fields.push_back(std::to_string(e.fault->magnitude));
    } else {
      fields.insert(fields.end(), 3, std::string());
    }
    out << text::join_fields(fields) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  text::LineReader reader(in, path.string());
  std::string line;
  if (!reader.next(line)) reader.fail("empty manifest");
  auto head = text::split_fields(line);
  if (head.size() != 3 || head[0] != kManifestTag ||
      !head[1].starts_with("rng=") || !head[2].starts_with("seed=")) {
    if (!head.empty() && head[0].starts_with("#manifest/") &&
        head[0] != kManifestTag) {
      throw FormatVersionError(path.string() + ": unsupported manifest version");
    }
    reader.fail("malformed manifest header");
  }
  DatasetManifest manifest;
  manifest.rng = std::string(head[1].substr(4));
  auto seed = text::parse_uint(head[2].substr(5));
  if (!seed) reader.fail("malformed seed");
  manifest.seed = *seed;
  if (!reader.next(line) || !line.starts_with("columns\t")) {
    reader.fail("expected columns line");
  }
  std::set<std::string> ids;
  while (reader.next(line)) {
    auto fields = text::split_fields(line);
    if (fields.size() != 6) reader.fail("manifest record needs 6 fields");
    ManifestEntry e;
    auto id = text::unescape_field(fields[0]);
    if (!id || id->empty()) reader.fail("invalid run_id");
    e.run_id = std::move(*id);
    if (!ids.insert(e.run_id).second) {
      reader.fail("duplicate run_id '" + e.run_id + "'");
    }
    auto label = parse_run_label(fields[1]);
    auto workload = text::parse_uint(fields[2]);
    if (!label || !workload) reader.fail("invalid label or workload");
    e.label = *label;
    e.workload = *workload;
    if (!fields[3].empty()) {
      auto mode = parse_fault_mode(fields[3]);
      auto target = text::unescape_field(fields[4]);
      auto magnitude = text::parse_uint(fields[5]);
      if (!mode || !target || !magnitude || *magnitude < 1 ||
          *magnitude > UINT32_MAX) {
        reader.fail("invalid fault description");
      }
      e.fault = FaultSpec{*mode, std::move(*target),
                          static_cast<std::uint32_t>(*magnitude)};
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json components = json::array();
  for (const auto& c : spec.components) {
    components.push_back({{"exe", c.exe},
                          {"host", c.host},
                          {"parent", c.parent},
                          {"baseline_instances", c.baseline_instances},
                          {"per_request_spawn_count", c.per_request_spawn_count},
                          {"per_request_ipc_edges", c.per_request_ipc_edges},
                          {"listen_endpoint", c.listen_endpoint}});
  }
  json noise = json::array();
  for (const auto& n : spec.noise) {
    noise.push_back(
        {{"exe", n.exe}, {"host", n.host}, {"min", n.min}, {"max", n.max}});
  }
  json targets = json::object();
  for (const auto& [mode, target] : spec.fault_targets) {
    targets[std::string(to_string(mode))] = target;
  }
  json j = {{"request_host", spec.request_host},
            {"request_endpoint", spec.request_endpoint},
            {"seed", spec.seed},
            {"components", components},
            {"noise", noise},
            {"fault_targets", targets},
            {"fault_magnitude",
             {{"min", spec.fault_magnitude_min},
              {"max", spec.fault_magnitude_max}}}};
  return j.dump(2);
}

ScenarioSpec scenario_from_json(std::string_view json_text) {
  ScenarioSpec spec;
  try {
    const json j = json::parse(json_text);
    spec.request_host = j.at("request_host").get<std::string>();
    spec.request_endpoint = j.at("request_endpoint").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("components")) {
      ComponentTemplate t;
      t.exe = c.at("exe").get<std::string>();
      t.host = c.at("host").get<std::string>();
      t.parent = json_str(c, "parent", std::string(kInitExe));
      t.baseline_instances = json_u32(c, "baseline_instances", 0);
      t.per_request_spawn_count = json_u32(c, "per_request_spawn_count", 0);
      if (c.contains("per_request_ipc_edges")) {
        t.per_request_ipc_edges =
            c.at("per_request_ipc_edges").get<std::vector<std::string>>();
      }
      t.listen_endpoint = json_str(c, "listen_endpoint", "");
      spec.components.push_back(std::move(t));
    }
    if (j.contains("noise")) {
      for (const auto& n : j.at("noise")) {
        spec.noise.push_back({n.at("exe").get<std::string>(),
                              n.at("host").get<std::string>(),
                              n.at("min").get<std::uint32_t>(),
                              n.at("max").get<std::uint32_t>()});
      }
    }
    if (j.contains("fault_targets")) {
      for (const auto& [key, value] : j.at("fault_targets").items()) {
        auto mode = parse_fault_mode(key);
        if (!mode) throw ValidationError("unknown fault mode '" + key + "'");
        spec.fault_targets[*mode] = value.get<std::string>();
      }
    }
    if (j.contains("fault_magnitude")) {
      const auto& m = j.at("fault_magnitude");
      spec.fault_magnitude_min = json_u32(m, "min", 1);
      spec.fault_magnitude_max = json_u32(m, "max", spec.fault_magnitude_min);
    }
  } catch (const json::exception& err) {
    throw ValidationError(std::string("scenario: ") + err.what());
  }
  validate(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::map<FeatureId, FeatureClass> expected_feature_classes(
    const ScenarioSpec& spec) {
  std::map<FeatureId, FeatureClass> out;
  auto put = [&](const std::string& exe, FeatureClass count,
                 FeatureClass degree) {
    out[{exe, Metric::kCount}] = count;
    out[{exe, Metric::kDegree}] = degree;
  };
  bool any_noise = false;
  for (const auto& n : spec.noise) {
    const auto cls = n.min == n.max ? FeatureClass::kAffine : FeatureClass::kNoise;
    any_noise |= cls == FeatureClass::kNoise;
    put(n.exe, cls, cls);
  }
  for (const auto& c : spec.components) {
    put(c.exe, FeatureClass::kAffine, FeatureClass::kAffine);
  }
  // init parents the noise processes, so its degree inherits their spread.
  put(std::string(kInitExe), FeatureClass::kAffine,
      any_noise ? FeatureClass::kNoise : FeatureClass::kAffine);
  return out;
}

}  // namespace sysgraph
