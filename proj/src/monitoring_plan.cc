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

#include "sysgraph/monitoring_plan.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sysgraph/errors.h"
#include "sysgraph/text_format.h"

namespace sysgraph {

namespace {

constexpr std::string_view kPlanTag = "#monitoring-plan/1";
constexpr std::string_view kSectionStart = "[plan]";
constexpr std::string_view kSectionEnd = "end-plan";

constexpr EventKind kGraphKinds[] = {EventKind::kSpawn, EventKind::kIpc,
                                     EventKind::kNet};

// Body of a section whose "[plan]" line has been consumed.
MonitoringPlan parse_section_body(text::LineReader& reader) {
  MonitoringPlan plan;
  std::string line;
  while (reader.next(line)) {
    if (line == kSectionEnd) {
      for (std::size_t i = 1; i < plan.filters.size(); ++i) {
        if (plan.filters[i - 1].kind >= plan.filters[i].kind) {
          reader.fail("filters must be unique and in kind order");
        }
      }
      return plan;
    }
    auto fields = text::split_fields(line);
    if (fields[0] == "selected") {
      if (fields.size() != 3) reader.fail("malformed selected line");
      auto exe = text::unescape_field(fields[1]);
      auto metric = parse_metric(fields[2]);
      if (!exe || exe->empty() || !metric) reader.fail("malformed feature");
      plan.selected.push_back({std::move(*exe), *metric});
    } else if (fields[0] == "filter") {
      if (fields.size() < 2) reader.fail("malformed filter line");
      auto kind = parse_event_kind(fields[1]);
      if (!kind) reader.fail("unknown event kind");
      ProbeFilter filter{*kind, {}};
      for (std::size_t i = 2; i < fields.size(); ++i) {
        auto exe = text::unescape_field(fields[i]);
        if (!exe || exe->empty()) reader.fail("malformed exe in filter");
        filter.exes.insert(std::move(*exe));
      }
      plan.filters.push_back(std::move(filter));
    } else {
      reader.fail("unexpected line in plan section");
    }
  }
  reader.fail("missing 'end-plan' line");
}

}  // namespace

bool ProbeFilter::matches(const Event& e) const {
  if (e.kind != kind) return false;
  if (exes.empty()) return true;
  switch (e.kind) {
    case EventKind::kSpawn:
      return exes.contains(e.exe) || exes.contains(e.parent_exe);
    case EventKind::kIpc:
    case EventKind::kNet:
      return exes.contains(e.exe) || exes.contains(e.peer_exe);
    case EventKind::kListen:
    case EventKind::kRequest:
      return !e.exe.empty() && exes.contains(e.exe);
  }
  return false;
}

bool MonitoringPlan::matches(const Event& e) const {
  return std::any_of(filters.begin(), filters.end(),
                     [&](const ProbeFilter& f) { return f.matches(e); });
}

MonitoringPlan derive_plan(const BehaviorModel& model) {
  if (model.selected.empty()) {
    throw PreconditionError(
        "model has no selected features; nothing to monitor");
  }
  std::set<std::string> exes;
  for (const FeatureId& f : model.selected) exes.insert(f.exe);

  MonitoringPlan plan;
  plan.selected = model.selected;
  for (EventKind kind : kGraphKinds) plan.filters.push_back({kind, exes});
  plan.filters.push_back({EventKind::kRequest, {}});
  return plan;
}

RunTrace apply_filter(const MonitoringPlan& plan, const RunTrace& trace) {
  RunTrace out;
  out.run_id = trace.run_id;
  out.label = trace.label;
  out.workload = trace.workload;
  std::copy_if(trace.events.begin(), trace.events.end(),
               std::back_inserter(out.events),
               [&](const Event& e) { return plan.matches(e); });
  return out;
}

void write_plan_section(const MonitoringPlan& plan, std::ostream& out) {
  out << kSectionStart << '\n';
  for (const FeatureId& f : plan.selected) {
    out << "selected\t" << text::escape_field(f.exe) << '\t'
        << to_string(f.metric) << '\n';
  }
  for (const ProbeFilter& filter : plan.filters) {
    out << "filter\t" << to_string(filter.kind);
    for (const std::string& exe : filter.exes) {
      out << '\t' << text::escape_field(exe);
    }
    out << '\n';
  }
  out << kSectionEnd << '\n';
}

bool read_plan_section(std::istream& in, const std::string& source_name,
                       MonitoringPlan& plan) {
  text::LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) return false;
  if (line != kSectionStart) reader.fail("expected '[plan]'");
  plan = parse_section_body(reader);
  return true;
}

void save_plan(const MonitoringPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << kPlanTag << '\n';
  write_plan_section(plan, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

MonitoringPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open plan '" + path.string() + "'");
  text::LineReader reader(in, path.string());
  std::string line;
  if (!reader.next(line)) reader.fail("empty plan file");
  if (line == kPlanTag) {
    if (!reader.next(line) || line != kSectionStart) {
      reader.fail("expected '[plan]'");
    }
    return parse_section_body(reader);
  }
  if (line.starts_with("#monitoring-plan/")) {
    throw FormatVersionError(path.string() + ": unsupported plan version '" +
                             line + "'");
  }
  if (line.starts_with("#behavior-model/")) {
    while (reader.next(line)) {
      if (line == kSectionStart) return parse_section_body(reader);
    }
    throw PreconditionError(path.string() +
                            ": model file carries no plan section");
  }
  reader.fail("not a plan or model file");
}

std::string describe_plan(const MonitoringPlan& plan) {
  std::ostringstream out;
  for (const ProbeFilter& f : plan.filters) {
    out << to_string(f.kind) << ": ";
    if (f.exes.empty()) {
      out << "*";
    } else {
      bool first = true;
      for (const std::string& exe : f.exes) {
        out << (first ? "" : ", ") << exe;
        first = false;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sysgraph
