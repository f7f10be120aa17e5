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

#ifndef SYSGRAPH_ONLINE_MONITOR_H_
#define SYSGRAPH_ONLINE_MONITOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sysgraph/monitoring_plan.h"
#include "sysgraph/system_graph.h"
#include "sysgraph/training.h"

namespace sysgraph {

enum class Decision { kNormal, kAnomalous };

std::string_view to_string(Decision decision);

struct Evidence {
  FeatureId feature;
  double observed = 0.0;
  double predicted = 0.0;
  double band = 0.0;

  bool operator==(const Evidence&) const = default;
};

struct Verdict {
  double ts = 0.0;
  Decision decision = Decision::kNormal;
  std::vector<Evidence> evidence;  // violated features only
  std::set<std::string> unknown_exes;

  bool operator==(const Verdict&) const = default;
};

// One JSON object per line:
//   {"ts":..,"decision":"NORMAL|ANOMALOUS","evidence":[{"exe":..,
//    "metric":..,"observed":..,"predicted":..,"band":..}],"unknown_exes":[..]}
std::string verdict_to_json(const Verdict& verdict);

struct MonitorOptions {
  // An exe never seen in training makes the verdict ANOMALOUS.
  bool flag_unknown_exes = true;
  // Only REQUEST events on this endpoint count as workload.
  std::optional<std::string> request_endpoint;
};

// Incremental bag-of-nodes counters over a filtered event stream. Holds
// references to the model and plan, which must outlive it. Single writer;
// copy the monitor to evaluate a snapshot elsewhere.
class OnlineMonitor {
 public:
  // Throws PreconditionError if the plan serves a different feature set
  // than the model selected.
  OnlineMonitor(const BehaviorModel& model, const MonitoringPlan& plan,
                MonitorOptions options = {});

  // Events outside the plan are dropped. Malformed events (missing fields,
  // exe conflicting with an earlier observation of the same process) are
  // counted and skipped; this never throws on event content.
  void ingest(const Event& event);

  Verdict evaluate(double ts) const;

  std::uint64_t request_count() const { return request_count_; }
  std::uint64_t value(const FeatureId& feature) const;
  // Values of the model's selected features, in selection order.
  std::vector<std::uint64_t> selected_values() const;
  const std::set<std::string>& unknown_exes() const { return unknown_exes_; }
  std::size_t skipped_events() const { return skipped_; }
  std::size_t filtered_events() const { return filtered_; }

 private:
  struct KeyHash {
    std::size_t operator()(const ProcessKey& k) const;
  };
  struct EdgeHash {
    std::size_t operator()(const Edge& e) const;
  };
  struct ExeCounters {
    std::uint64_t count = 0;
    std::uint64_t degree = 0;
  };

  void note_node(const ProcessKey& key, const std::string& exe);

  const BehaviorModel* model_;
  const MonitoringPlan* plan_;
  MonitorOptions options_;

  std::unordered_map<ProcessKey, std::string, KeyHash> nodes_;
  std::unordered_set<Edge, EdgeHash> edges_;
  std::map<std::string, ExeCounters, std::less<>> counters_;
  std::set<std::string> unknown_exes_;
  std::uint64_t request_count_ = 0;
  std::size_t skipped_ = 0;
  std::size_t filtered_ = 0;
};

enum class MonitorMode { kEndOfRun, kPeriodic };

std::string_view to_string(MonitorMode mode);
std::optional<MonitorMode> parse_monitor_mode(std::string_view text);

struct MonitorRun {
  std::vector<Verdict> verdicts;
  std::optional<std::string> error;  // set when the source failed mid-stream
  std::size_t events_read = 0;

  bool anomalous() const;
};

// Returns nullopt at end of stream; may throw sysgraph::Error.
using EventSource = std::function<std::optional<Event>()>;
using VerdictSink = std::function<void(const Verdict&)>;

// END_OF_RUN emits one verdict after the stream ends. PERIODIC additionally
// emits one verdict at every multiple of period (seconds) crossed by the
// stream, evaluated over the events strictly before that boundary. On a
// source error the verdicts emitted so far are returned with `error` set and
// no final verdict.
MonitorRun run_monitor(const EventSource& source, const BehaviorModel& model,
                       const MonitoringPlan& plan, MonitorMode mode,
                       double period, const MonitorOptions& options = {},
                       const VerdictSink& sink = {});

MonitorRun run_monitor(const RunTrace& trace, const BehaviorModel& model,
                       const MonitoringPlan& plan, MonitorMode mode,
                       double period, const MonitorOptions& options = {});

// Reads a trace-format stream (header line first).
MonitorRun run_monitor(std::istream& in, const std::string& source_name,
                       const BehaviorModel& model, const MonitoringPlan& plan,
                       MonitorMode mode, double period,
                       const MonitorOptions& options = {},
                       const VerdictSink& sink = {});

}  // namespace sysgraph

#endif  // SYSGRAPH_ONLINE_MONITOR_H_
