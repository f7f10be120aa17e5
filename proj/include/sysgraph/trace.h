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

// Event vocabulary and the on-disk run trace format.
//
// A trace file is UTF-8 text using the quoting rules of text_format.h:
//
//   #trace/1 <TAB> run_id <TAB> label <TAB> workload
//   ts <TAB> kind <TAB> host <TAB> pid <TAB> exe <TAB> ppid <TAB> parent_exe
//      <TAB> peer_pid <TAB> peer_exe <TAB> peer_host <TAB> endpoint
//   ...
//
// label is NORMAL, FAULT or UNKNOWN. workload may be empty only for UNKNOWN
// runs, in which case it is derived from the REQUEST events. Every event line
// has exactly eleven fields; absent fields are empty. Blank lines are
// ignored.

#ifndef SYSGRAPH_TRACE_H_
#define SYSGRAPH_TRACE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sysgraph {

// Process id. Zero is reserved to mean "absent" in Event fields.
using Pid = std::uint32_t;

enum class EventKind { kSpawn, kIpc, kNet, kListen, kRequest };

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::kSpawn, EventKind::kIpc, EventKind::kNet, EventKind::kListen,
    EventKind::kRequest};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

enum class RunLabel { kNormal, kFault, kUnknown };

std::string_view to_string(RunLabel label);
std::optional<RunLabel> parse_run_label(std::string_view text);

// One OS-level occurrence. Which fields are populated depends on kind:
//   SPAWN   host pid exe ppid parent_exe          (child is pid/exe)
//   IPC     host pid exe peer_pid peer_exe        (peer_host empty or == host)
//   NET     host pid exe peer_pid peer_exe peer_host [endpoint]
//   LISTEN  host pid exe endpoint
//   REQUEST host endpoint [pid exe]
struct Event {
  double ts = 0.0;
  EventKind kind = EventKind::kSpawn;
  std::string host;
  Pid pid = 0;
  std::string exe;
  Pid ppid = 0;
  std::string parent_exe;
  Pid peer_pid = 0;
  std::string peer_exe;
  std::string peer_host;
  std::string endpoint;

  bool operator==(const Event&) const = default;

  static Event spawn(double ts, std::string host, Pid ppid,
                     std::string parent_exe, Pid pid, std::string exe);
  static Event ipc(double ts, std::string host, Pid pid, std::string exe,
                   Pid peer_pid, std::string peer_exe);
  static Event net(double ts, std::string host, Pid pid, std::string exe,
                   std::string peer_host, Pid peer_pid, std::string peer_exe,
                   std::string endpoint = {});
  static Event listen(double ts, std::string host, Pid pid, std::string exe,
                      std::string endpoint);
  static Event request(double ts, std::string host, std::string endpoint);

  // Host of the peer process; IPC peers share the initiator's host.
  const std::string& effective_peer_host() const {
    return peer_host.empty() ? host : peer_host;
  }
};

struct RunTrace {
  std::string run_id;
  RunLabel label = RunLabel::kUnknown;
  std::uint64_t workload = 0;
  std::vector<Event> events;

  bool operator==(const RunTrace&) const = default;
};

// Throws ValidationError naming the violated invariant.
void validate_event(const Event& event);

// Per-event checks plus the non-decreasing timestamp invariant.
void validate_trace(const RunTrace& trace);

// Metadata line of a trace file.
struct TraceHeader {
  std::string run_id;
  RunLabel label = RunLabel::kUnknown;
  std::optional<std::uint64_t> workload;
};

// Streaming reader: parses the header eagerly and one event per next().
// Validates each event and the ordering against the previous one.
class TraceReader {
 public:
  TraceReader(std::istream& in, std::string source_name);

  const TraceHeader& header() const { return header_; }

  // nullopt at end of stream. Throws ParseError or ValidationError (the
  // latter is rethrown as ParseError carrying the line number).
  std::optional<Event> next();

  std::size_t line_number() const { return line_; }

 private:
  bool read_line(std::string& line);

  std::istream& in_;
  std::string source_;
  TraceHeader header_;
  std::size_t line_ = 0;
  std::optional<double> last_ts_;
};

std::string format_event(const Event& event);
Event parse_event_line(std::string_view line, const std::string& source,
                       std::size_t line_number);

RunTrace parse_trace(std::istream& in, const std::string& source_name);
RunTrace parse_trace(const std::filesystem::path& path);

void write_trace(const RunTrace& trace, std::ostream& out);
void write_trace(const RunTrace& trace, const std::filesystem::path& path);

// Number of REQUEST events, optionally restricted to one endpoint.
std::uint64_t count_requests(
    const RunTrace& trace,
    std::optional<std::string_view> endpoint_filter = std::nullopt);

}  // namespace sysgraph

#endif  // SYSGRAPH_TRACE_H_
