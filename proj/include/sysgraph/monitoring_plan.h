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

// Maps selected features back to the event filters needed to compute them
// online.
//
// Backtracking rules for bag-of-nodes features. A process with exe X becomes
// a node the first time it shows up in any role of a SPAWN, IPC or NET event,
// and every edge incident to it comes from one of those events. Hence both
// (X, COUNT) and (X, DEGREE) need every SPAWN, IPC and NET event in which X
// takes part, on either side. REQUEST is always captured to count workload.
//
// Plan text section (text_format.h quoting):
//
//   [plan]
//   selected <TAB> exe <TAB> metric          (one per served feature)
//   filter <TAB> kind [<TAB> exe]...         (no exe = capture all)
//   end-plan
//
// A standalone plan file is the same section preceded by "#monitoring-plan/1".

#ifndef SYSGRAPH_MONITORING_PLAN_H_
#define SYSGRAPH_MONITORING_PLAN_H_

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "sysgraph/embedding.h"
#include "sysgraph/trace.h"
#include "sysgraph/training.h"

namespace sysgraph {

struct ProbeFilter {
  EventKind kind = EventKind::kRequest;
  std::set<std::string> exes;  // empty captures every event of this kind

  // Kind matches and, for a non-empty set, one of the event's processes
  // (exe, parent_exe for SPAWN, peer_exe for IPC/NET) is in the set.
  bool matches(const Event& event) const;

  bool operator==(const ProbeFilter&) const = default;
};

struct MonitoringPlan {
  std::vector<ProbeFilter> filters;  // at most one per kind, kind order
  std::vector<FeatureId> selected;

  bool matches(const Event& event) const;

  bool operator==(const MonitoringPlan&) const = default;
};

// Throws PreconditionError when the model selected nothing.
MonitoringPlan derive_plan(const BehaviorModel& model);

// Events matched by some filter, order preserved. Metadata is copied.
RunTrace apply_filter(const MonitoringPlan& plan, const RunTrace& trace);

void write_plan_section(const MonitoringPlan& plan, std::ostream& out);

// Reads a section starting at "[plan]". Returns false if the stream holds no
// further non-blank line.
bool read_plan_section(std::istream& in, const std::string& source_name,
                       MonitoringPlan& plan);

void save_plan(const MonitoringPlan& plan, const std::filesystem::path& path);

// Accepts a standalone plan file or a model file with an embedded plan
// section.
MonitoringPlan load_plan(const std::filesystem::path& path);

// Human-readable filter list, one filter per line.
std::string describe_plan(const MonitoringPlan& plan);

}  // namespace sysgraph

#endif  // SYSGRAPH_MONITORING_PLAN_H_
