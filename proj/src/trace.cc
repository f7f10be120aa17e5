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

#include "sysgraph/trace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "sysgraph/errors.h"
#include "sysgraph/text_format.h"

namespace sysgraph {

namespace {

constexpr std::string_view kTraceTag = "#trace/1";
constexpr std::size_t kEventFieldCount = 11;

std::string pid_field(Pid pid) {
  return pid == 0 ? std::string() : std::to_string(pid);
}

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kSpawn: return "SPAWN";
    case EventKind::kIpc: return "IPC";
    case EventKind::kNet: return "NET";
    case EventKind::kListen: return "LISTEN";
    case EventKind::kRequest: return "REQUEST";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind kind : kAllEventKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(RunLabel label) {
  switch (label) {
    case RunLabel::kNormal: return "NORMAL";
    case RunLabel::kFault: return "FAULT";
    case RunLabel::kUnknown: return "UNKNOWN";
  }
  return "?";
}

std::optional<RunLabel> parse_run_label(std::string_view text) {
  for (RunLabel label :
       {RunLabel::kNormal, RunLabel::kFault, RunLabel::kUnknown}) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

Event Event::spawn(double ts, std::string host, Pid ppid,
                   std::string parent_exe, Pid pid, std::string exe) {
  Event e;
  e.ts = ts;
  e.kind = EventKind::kSpawn;
  e.host = std::move(host);
  e.pid = pid;
  e.exe = std::move(exe);
  e.ppid = ppid;
  e.parent_exe = std::move(parent_exe);
  return e;
}

Event Event::ipc(double ts, std::string host, Pid pid, std::string exe,
                 Pid peer_pid, std::string peer_exe) {
  Event e;
  e.ts = ts;
  e.kind = EventKind::kIpc;
  e.host = std::move(host);
  e.pid = pid;
  e.exe = std::move(exe);
  e.peer_pid = peer_pid;
  e.peer_exe = std::move(peer_exe);
  return e;
}

Event Event::net(double ts, std::string host, Pid pid, std::string exe,
                 std::string peer_host, Pid peer_pid, std::string peer_exe,
                 std::string endpoint) {
  Event e;
  e.ts = ts;
  e.kind = EventKind::kNet;
  e.host = std::move(host);
  e.pid = pid;
  e.exe = std::move(exe);
  e.peer_pid = peer_pid;
  e.peer_exe = std::move(peer_exe);
  e.peer_host = std::move(peer_host);
  e.endpoint = std::move(endpoint);
  return e;
}

Event Event::listen(double ts, std::string host, Pid pid, std::string exe,
                    std::string endpoint) {
  Event e;
  e.ts = ts;
  e.kind = EventKind::kListen;
  e.host = std::move(host);
  e.pid = pid;
  e.exe = std::move(exe);
  e.endpoint = std::move(endpoint);
  return e;
}

Event Event::request(double ts, std::string host, std::string endpoint) {
  Event e;
  e.ts = ts;
  e.kind = EventKind::kRequest;
  e.host = std::move(host);
  e.endpoint = std::move(endpoint);
  return e;
}

void validate_event(const Event& e) {
  require(std::isfinite(e.ts) && e.ts >= 0.0, "ts must be non-negative");
  require(!e.host.empty(), "host is required");
  switch (e.kind) {
    case EventKind::kSpawn:
      require(e.pid > 0 && !e.exe.empty(), "SPAWN requires pid and exe");
      require(e.ppid > 0 && !e.parent_exe.empty(),
              "SPAWN requires ppid and parent_exe");
      require(e.ppid != e.pid, "SPAWN requires ppid != pid");
      break;
    case EventKind::kIpc:
      require(e.pid > 0 && !e.exe.empty(), "IPC requires pid and exe");
      require(e.peer_pid > 0 && !e.peer_exe.empty(),
              "IPC requires peer_pid and peer_exe");
      require(e.peer_host.empty() || e.peer_host == e.host,
              "IPC requires host == peer_host");
      break;
    case EventKind::kNet:
      require(e.pid > 0 && !e.exe.empty(), "NET requires pid and exe");
      require(e.peer_pid > 0 && !e.peer_exe.empty() && !e.peer_host.empty(),
              "NET requires peer_pid, peer_exe and peer_host");
      break;
    case EventKind::kListen:
      require(e.pid > 0 && !e.exe.empty(), "LISTEN requires pid and exe");
      require(!e.endpoint.empty(), "LISTEN requires endpoint");
      break;
    case EventKind::kRequest:
      require(!e.endpoint.empty(), "REQUEST requires endpoint");
      break;
  }
}

void validate_trace(const RunTrace& trace) {
  std::optional<double> last;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& e = trace.events[i];
    try {
      validate_event(e);
    } catch (const ValidationError& err) {
      throw ValidationError("event " + std::to_string(i) + ": " + err.what());
    }
    if (last && e.ts < *last) {
      throw ValidationError("event " + std::to_string(i) +
                            ": non-decreasing ts violated");
    }
    last = e.ts;
  }
}

std::string format_event(const Event& e) {
  return text::join_fields({text::format_shortest(e.ts),
                            std::string(to_string(e.kind)), e.host,
                            pid_field(e.pid), e.exe, pid_field(e.ppid),
                            e.parent_exe, pid_field(e.peer_pid), e.peer_exe,
                            e.peer_host, e.endpoint});
}

Event parse_event_line(std::string_view line, const std::string& source,
                       std::size_t line_number) {
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError(source, line_number, what);
  };
  auto fields = text::split_fields(line);
  if (fields.size() != kEventFieldCount) {
    throw fail("expected " + std::to_string(kEventFieldCount) +
               " fields, got " + std::to_string(fields.size()));
  }
  std::vector<std::string> raw;
  raw.reserve(fields.size());
  for (auto f : fields) {
    auto value = text::unescape_field(f);
    if (!value) throw fail("bad escape sequence");
    raw.push_back(std::move(*value));
  }
  auto pid_at = [&](std::size_t idx, const char* name) -> Pid {
    if (raw[idx].empty()) return 0;
    auto v = text::parse_uint(raw[idx]);
    if (!v || *v == 0 || *v > UINT32_MAX) {
      throw fail(std::string("invalid ") + name + " '" + raw[idx] + "'");
    }
    return static_cast<Pid>(*v);
  };

  Event e;
  auto ts = text::parse_double(raw[0]);
  if (!ts) throw fail("invalid ts '" + raw[0] + "'");
  e.ts = *ts;
  auto kind = parse_event_kind(raw[1]);
  if (!kind) throw fail("unknown event kind '" + raw[1] + "'");
  e.kind = *kind;
  e.host = std::move(raw[2]);
  e.pid = pid_at(3, "pid");
  e.exe = std::move(raw[4]);
  e.ppid = pid_at(5, "ppid");
  e.parent_exe = std::move(raw[6]);
  e.peer_pid = pid_at(7, "peer_pid");
  e.peer_exe = std::move(raw[8]);
  e.peer_host = std::move(raw[9]);
  e.endpoint = std::move(raw[10]);
  return e;
}

TraceReader::TraceReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {
  std::string line;
  if (!read_line(line)) {
    throw ParseError(source_, 1, "missing trace header");
  }
  auto fields = text::split_fields(line);
  if (fields.empty() || fields[0] != kTraceTag) {
    if (!fields.empty() && fields[0].starts_with("#trace/")) {
      throw FormatVersionError(source_ + ": unsupported trace version '" +
                               std::string(fields[0]) + "'");
    }
    throw ParseError(source_, line_, "missing '#trace/1' header");
  }
  if (fields.size() != 4) {
    throw ParseError(source_, line_,
                     "header needs run_id, label and workload fields");
  }
  auto run_id = text::unescape_field(fields[1]);
  if (!run_id || run_id->empty()) {
    throw ParseError(source_, line_, "invalid run_id");
  }
  header_.run_id = std::move(*run_id);
  auto label = parse_run_label(fields[2]);
  if (!label) {
    throw ParseError(source_, line_,
                     "unknown label '" + std::string(fields[2]) + "'");
  }
  header_.label = *label;
  if (!fields[3].empty()) {
    auto workload = text::parse_uint(fields[3]);
    if (!workload) {
      throw ParseError(source_, line_,
                       "invalid workload '" + std::string(fields[3]) + "'");
    }
    header_.workload = *workload;
  } else if (header_.label != RunLabel::kUnknown) {
    throw ParseError(source_, line_, "NORMAL/FAULT runs require a workload");
  }
}

bool TraceReader::read_line(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  if (in_.bad()) throw IoError(source_ + ": read failure");
  return false;
}

std::optional<Event> TraceReader::next() {
  std::string line;
  if (!read_line(line)) return std::nullopt;
  Event e = parse_event_line(line, source_, line_);
  try {
    validate_event(e);
  } catch (const ValidationError& err) {
    throw ParseError(source_, line_, err.what());
  }
  if (last_ts_ && e.ts < *last_ts_) {
    throw ParseError(source_, line_, "non-decreasing ts violated");
  }
  last_ts_ = e.ts;
  return e;
}

RunTrace parse_trace(std::istream& in, const std::string& source_name) {
  TraceReader reader(in, source_name);
  RunTrace trace;
  trace.run_id = reader.header().run_id;
  trace.label = reader.header().label;
  while (auto e = reader.next()) trace.events.push_back(std::move(*e));
  trace.workload = reader.header().workload.value_or(count_requests(trace));
  return trace;
}

RunTrace parse_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + path.string() + "'");
  return parse_trace(in, path.string());
}

void write_trace(const RunTrace& trace, std::ostream& out) {
  out << kTraceTag << '\t' << text::escape_field(trace.run_id) << '\t'
      << to_string(trace.label) << '\t' << trace.workload << '\n';
  for (const Event& e : trace.events) out << format_event(e) << '\n';
}

void write_trace(const RunTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  write_trace(trace, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::uint64_t count_requests(const RunTrace& trace,
                             std::optional<std::string_view> endpoint_filter) {
  return static_cast<std::uint64_t>(
      std::count_if(trace.events.begin(), trace.events.end(),
                    [&](const Event& e) {
                      return e.kind == EventKind::kRequest &&
                             (!endpoint_filter || e.endpoint == *endpoint_filter);
                    }));
}

}  // namespace sysgraph
