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

#include "sysgraph/online_monitor.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"
#include "sysgraph/errors.h"

namespace sysgraph {

namespace {

// Boundaries further apart than this many periods are collapsed into one
// verdict so a single far-future timestamp cannot stall the monitor.
constexpr double kMaxPeriodsPerGap = 1e6;

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string_view to_string(Decision decision) {
  return decision == Decision::kNormal ? "NORMAL" : "ANOMALOUS";
}

std::string verdict_to_json(const Verdict& v) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const Evidence& e : v.evidence) {
    evidence.push_back({{"exe", e.feature.exe},
                        {"metric", std::string(to_string(e.feature.metric))},
                        {"observed", e.observed},
                        {"predicted", e.predicted},
                        {"band", e.band}});
  }
  nlohmann::json j = {{"ts", v.ts},
                      {"decision", std::string(to_string(v.decision))},
                      {"evidence", std::move(evidence)},
                      {"unknown_exes", v.unknown_exes}};
  return j.dump();
}

std::size_t OnlineMonitor::KeyHash::operator()(const ProcessKey& k) const {
  return hash_combine(std::hash<std::string>{}(k.host), k.pid);
}

std::size_t OnlineMonitor::EdgeHash::operator()(const Edge& e) const {
  KeyHash h;
  return hash_combine(hash_combine(h(e.src), h(e.dst)),
                      static_cast<std::size_t>(e.kind));
}

OnlineMonitor::OnlineMonitor(const BehaviorModel& model,
                             const MonitoringPlan& plan, MonitorOptions options)
    : model_(&model), plan_(&plan), options_(std::move(options)) {
  if (plan.selected != model.selected) {
    throw PreconditionError(
        "monitoring plan does not serve the model's selected features");
  }
}

void OnlineMonitor::note_node(const ProcessKey& key, const std::string& exe) {
  if (!nodes_.emplace(key, exe).second) return;
  ++counters_[exe].count;
  if (!model_->registry.contains_exe(exe)) unknown_exes_.insert(exe);
}

void OnlineMonitor::ingest(const Event& e) {
  if (!plan_->matches(e)) {
    ++filtered_;
    return;
  }
  try {
    validate_event(e);
  } catch (const ValidationError&) {
    ++skipped_;
    return;
  }

  ProcessKey src;
  ProcessKey dst;
  const std::string* src_exe = nullptr;
  const std::string* dst_exe = nullptr;
  EdgeKind kind = EdgeKind::kSpawn;
  switch (e.kind) {
    case EventKind::kRequest:
      if (!options_.request_endpoint ||
          e.endpoint == *options_.request_endpoint) {
        ++request_count_;
      }
      return;
    case EventKind::kListen:
      return;
    case EventKind::kSpawn:
      src = {e.host, e.ppid};
      src_exe = &e.parent_exe;
      dst = {e.host, e.pid};
      dst_exe = &e.exe;
      kind = EdgeKind::kSpawn;
      break;
    case EventKind::kIpc:
    case EventKind::kNet:
      src = {e.host, e.pid};
      src_exe = &e.exe;
      dst = {e.effective_peer_host(), e.peer_pid};
      dst_exe = &e.peer_exe;
      kind = e.kind == EventKind::kIpc ? EdgeKind::kIpc : EdgeKind::kNet;
      break;
  }

  // Reject before mutating so a conflicting event leaves no trace.
  auto conflicts = [&](const ProcessKey& key, const std::string& exe) {
    auto it = nodes_.find(key);
    return it != nodes_.end() && it->second != exe;
  };
  if (conflicts(src, *src_exe) || conflicts(dst, *dst_exe) ||
      (src == dst && *src_exe != *dst_exe)) {
    ++skipped_;
    return;
  }
  note_node(src, *src_exe);
  note_node(dst, *dst_exe);
  if (edges_.insert({src, dst, kind}).second) {
    ++counters_[*src_exe].degree;
    ++counters_[*dst_exe].degree;
  }
}

std::uint64_t OnlineMonitor::value(const FeatureId& feature) const {
  auto it = counters_.find(feature.exe);
  if (it == counters_.end()) return 0;
  return feature.metric == Metric::kCount ? it->second.count
                                          : it->second.degree;
}

std::vector<std::uint64_t> OnlineMonitor::selected_values() const {
  std::vector<std::uint64_t> out;
  out.reserve(model_->selected.size());
  for (const FeatureId& f : model_->selected) out.push_back(value(f));
  return out;
}

Verdict OnlineMonitor::evaluate(double ts) const {
  Verdict v;
  v.ts = ts;
  const double workload = static_cast<double>(request_count_);
  for (const FeatureId& f : model_->selected) {
    const LinearFit& fit = model_->fit(f);
    const double observed = static_cast<double>(value(f));
    const double predicted = fit.predict(workload);
    const double band = band_for(fit, model_->thresholds);
    if (std::abs(observed - predicted) > band) {
      v.evidence.push_back({f, observed, predicted, band});
    }
  }
  v.unknown_exes = unknown_exes_;
  const bool unknown_hit = options_.flag_unknown_exes && !unknown_exes_.empty();
  v.decision = (!v.evidence.empty() || unknown_hit) ? Decision::kAnomalous
                                                    : Decision::kNormal;
  return v;
}

std::string_view to_string(MonitorMode mode) {
  return mode == MonitorMode::kEndOfRun ? "end-of-run" : "periodic";
}

std::optional<MonitorMode> parse_monitor_mode(std::string_view text) {
  if (text == "end-of-run" || text == "END_OF_RUN") return MonitorMode::kEndOfRun;
  if (text == "periodic" || text == "PERIODIC") return MonitorMode::kPeriodic;
  return std::nullopt;
}

bool MonitorRun::anomalous() const {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
    return v.decision == Decision::kAnomalous;
  });
}

MonitorRun run_monitor(const EventSource& source, const BehaviorModel& model,
                       const MonitoringPlan& plan, MonitorMode mode,
                       double period, const MonitorOptions& options,
                       const VerdictSink& sink) {
  if (mode == MonitorMode::kPeriodic && !(period > 0.0 && std::isfinite(period))) {
    throw PreconditionError("periodic monitoring needs a positive period");
  }
  OnlineMonitor monitor(model, plan, options);
  MonitorRun run;
  auto emit = [&](Verdict v) {
    if (sink) sink(v);
    run.verdicts.push_back(std::move(v));
  };

  std::uint64_t boundary_index = 1;
  double last_ts = 0.0;
  while (true) {
    std::optional<Event> event;
    try {
      event = source();
    } catch (const Error& err) {
      run.error = err.what();
      return run;
    }
    if (!event) break;
    ++run.events_read;
    if (mode == MonitorMode::kPeriodic && std::isfinite(event->ts)) {
      double boundary = static_cast<double>(boundary_index) * period;
      if ((event->ts - boundary) / period > kMaxPeriodsPerGap) {
        emit(monitor.evaluate(boundary));
        boundary_index =
            static_cast<std::uint64_t>(std::floor(event->ts / period));
        boundary = static_cast<double>(boundary_index) * period;
      }
      while (event->ts >= boundary) {
        emit(monitor.evaluate(boundary));
        boundary = static_cast<double>(++boundary_index) * period;
      }
    }
    if (std::isfinite(event->ts)) last_ts = std::max(last_ts, event->ts);
    monitor.ingest(*event);
  }
  emit(monitor.evaluate(last_ts));
  return run;
}

MonitorRun run_monitor(const RunTrace& trace, const BehaviorModel& model,
                       const MonitoringPlan& plan, MonitorMode mode,
                       double period, const MonitorOptions& options) {
  std::size_t next = 0;
  EventSource source = [&]() -> std::optional<Event> {
    if (next == trace.events.size()) return std::nullopt;
    return trace.events[next++];
  };
  return run_monitor(source, model, plan, mode, period, options);
}

MonitorRun run_monitor(std::istream& in, const std::string& source_name,
                       const BehaviorModel& model, const MonitoringPlan& plan,
                       MonitorMode mode, double period,
                       const MonitorOptions& options, const VerdictSink& sink) {
  std::optional<TraceReader> reader;
  try {
    reader.emplace(in, source_name);
  } catch (const Error& err) {
    MonitorRun run;
    run.error = err.what();
    return run;
  }
  EventSource source = [&]() { return reader->next(); };
  return run_monitor(source, model, plan, mode, period, options, sink);
}

}  // namespace sysgraph
