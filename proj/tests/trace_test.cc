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

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "sysgraph/errors.h"
#include "test_util.h"

namespace sysgraph {
namespace {

using ::sysgraph::testing::random_trace;
using ::sysgraph::testing::ScopedTempDir;
using ::sysgraph::testing::trace_text;

RunTrace parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in, "test.trace");
}

TEST(TraceParseTest, SingleSpawnRecord) {
  const RunTrace t = parse_text(
      "#trace/1\tr1\tNORMAL\t1\n"
      "0.5\tSPAWN\tcompute-1\t42\tqemu-kvm\t7\tlibvirtd\t\t\t\t\n");
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.run_id, "r1");
  EXPECT_EQ(t.label, RunLabel::kNormal);
  EXPECT_EQ(t.workload, 1u);
  EXPECT_EQ(t.events[0],
            Event::spawn(0.5, "compute-1", 7, "libvirtd", 42, "qemu-kvm"));
}

TEST(TraceParseTest, EmptyTraceHasNoEvents) {
  const RunTrace t = parse_text("#trace/1\tempty\tNORMAL\t0\n");
  EXPECT_TRUE(t.events.empty());
  EXPECT_EQ(count_requests(t), 0u);
}

TEST(TraceParseTest, BlankLinesAndCrlfAreTolerated) {
  const RunTrace t = parse_text(
      "#trace/1\tr\tNORMAL\t1\r\n\r\n"
      "1\tREQUEST\tctl\t\t\t\t\t\t\t\tapi:8774\r\n\n");
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0].endpoint, "api:8774");
}

TEST(TraceParseTest, DecreasingTimestampReportsLine) {
  try {
    parse_text(
        "#trace/1\tr\tNORMAL\t0\n"
        "2\tIPC\th\t1\ta\t\t\t2\tb\t\t\n"
        "1\tIPC\th\t1\ta\t\t\t2\tb\t\t\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("non-decreasing ts"),
              std::string::npos);
  }
}

TEST(TraceParseTest, EqualTimestampsAreAccepted) {
  const RunTrace t = parse_text(
      "#trace/1\tr\tNORMAL\t0\n"
      "1\tIPC\th\t1\ta\t\t\t2\tb\t\t\n"
      "1\tIPC\th\t2\tb\t\t\t1\ta\t\t\n");
  EXPECT_EQ(t.events.size(), 2u);
}

TEST(TraceParseTest, WrongFieldCountIsRejected) {
  EXPECT_THROW(parse_text("#trace/1\tr\tNORMAL\t0\n1\tIPC\th\t1\ta\n"),
               ParseError);
}

TEST(TraceParseTest, UnknownVersionIsRejected) {
  EXPECT_THROW(parse_text("#trace/2\tr\tNORMAL\t0\n"), FormatVersionError);
}

TEST(TraceParseTest, MissingHeaderIsRejected) {
  EXPECT_THROW(parse_text("1\tREQUEST\tctl\t\t\t\t\t\t\t\tapi\n"), ParseError);
  EXPECT_THROW(parse_text(""), ParseError);
}

TEST(TraceParseTest, UnknownLabelDerivesWorkloadFromRequests) {
  const RunTrace t = parse_text(
      "#trace/1\tlive\tUNKNOWN\t\n"
      "1\tREQUEST\tctl\t\t\t\t\t\t\t\tapi:8774\n"
      "2\tREQUEST\tctl\t\t\t\t\t\t\t\tapi:8774\n");
  EXPECT_EQ(t.label, RunLabel::kUnknown);
  EXPECT_EQ(t.workload, 2u);
}

TEST(TraceParseTest, LabelledRunRequiresWorkload) {
  EXPECT_THROW(parse_text("#trace/1\tr\tNORMAL\t\n"), ParseError);
}

TEST(TraceParseTest, EscapedFieldsRoundTrip) {
  RunTrace t;
  t.run_id = "run\twith\\odd\nid";
  t.label = RunLabel::kFault;
  t.workload = 3;
  t.events.push_back(
      Event::ipc(0.0, "host a", 10, "exe\twith\ttabs", 11, "back\\slash\r"));
  const RunTrace back = parse_text(trace_text(t));
  EXPECT_EQ(back, t);
}

TEST(TraceParseTest, NetKeepsPeerHost) {
  RunTrace t;
  t.run_id = "net";
  t.label = RunLabel::kNormal;
  t.events.push_back(Event::net(1.0, "controller", 5, "nova-api", "compute-1",
                                9, "nova-compute", "compute-1:9"));
  const RunTrace back = parse_text(trace_text(t));
  ASSERT_EQ(back.events.size(), 1u);
  EXPECT_EQ(back.events[0].peer_host, "compute-1");
  EXPECT_EQ(back.events[0].host, "controller");
  EXPECT_EQ(back.events[0].effective_peer_host(), "compute-1");
}

TEST(TraceParseTest, RoundTripsRandomTraces) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    RunTrace t = random_trace(rng);
    t.label = static_cast<RunLabel>(i % 3);
    // Timestamps that do not print exactly in decimal.
    for (std::size_t k = 0; k < t.events.size(); ++k) {
      t.events[k].ts = t.events[k].ts * (1.0 / 3.0) + 1e-7 * static_cast<double>(k);
    }
    ASSERT_EQ(parse_text(trace_text(t)), t) << "iteration " << i;
  }
}

TEST(TraceWriteTest, TenThousandEventsWriteTenThousandRecords) {
  RunTrace t;
  t.run_id = "big";
  t.label = RunLabel::kNormal;
  for (int i = 0; i < 10000; ++i) {
    t.events.push_back(Event::request(i * 0.001, "ctl", "api:8774"));
  }
  t.workload = 10000;
  const std::string text = trace_text(t);
  std::size_t lines = 0;
  for (char c : text) lines += (c == '\n');
  EXPECT_EQ(lines, 10001u);  // header plus one per event
  EXPECT_EQ(parse_text(text).events.size(), 10000u);
}

TEST(TraceWriteTest, FileRoundTrip) {
  ScopedTempDir dir;
  std::mt19937_64 rng(3);
  const RunTrace t = random_trace(rng);
  write_trace(t, dir.path() / "t.trace");
  EXPECT_EQ(parse_trace(dir.path() / "t.trace"), t);
}

TEST(TraceWriteTest, MissingFileIsIoError) {
  EXPECT_THROW(parse_trace(std::filesystem::path("/nonexistent/x.trace")),
               IoError);
}

// Each listed invariant rejects exactly its violations.
TEST(EventValidationTest, AcceptsWellFormedEvents) {
  EXPECT_NO_THROW(validate_event(Event::spawn(0, "h", 1, "init", 2, "a")));
  EXPECT_NO_THROW(validate_event(Event::ipc(0, "h", 1, "a", 2, "b")));
  EXPECT_NO_THROW(validate_event(Event::ipc(0, "h", 1, "a", 1, "a")));
  EXPECT_NO_THROW(validate_event(Event::net(0, "h", 1, "a", "g", 1, "b")));
  EXPECT_NO_THROW(validate_event(Event::listen(0, "h", 1, "a", "h:80")));
  EXPECT_NO_THROW(validate_event(Event::request(0, "h", "h:80")));
  Event req_with_pid = Event::request(0, "h", "h:80");
  req_with_pid.pid = 5;
  req_with_pid.exe = "client";
  EXPECT_NO_THROW(validate_event(req_with_pid));
}

TEST(EventValidationTest, RejectsEachViolation) {
  std::vector<std::pair<Event, std::string>> bad;
  Event e = Event::spawn(-1, "h", 1, "p", 2, "c");
  bad.push_back({e, "negative ts"});
  e = Event::spawn(0, "", 1, "p", 2, "c");
  bad.push_back({e, "empty host"});
  e = Event::spawn(0, "h", 2, "p", 2, "c");
  bad.push_back({e, "ppid == pid"});
  e = Event::spawn(0, "h", 0, "p", 2, "c");
  bad.push_back({e, "spawn without ppid"});
  e = Event::spawn(0, "h", 1, "", 2, "c");
  bad.push_back({e, "spawn without parent_exe"});
  e = Event::spawn(0, "h", 1, "p", 0, "c");
  bad.push_back({e, "spawn without pid"});
  e = Event::spawn(0, "h", 1, "p", 2, "");
  bad.push_back({e, "spawn without exe"});
  e = Event::ipc(0, "h", 1, "a", 0, "b");
  bad.push_back({e, "ipc without peer_pid"});
  e = Event::ipc(0, "h", 1, "a", 2, "");
  bad.push_back({e, "ipc without peer_exe"});
  e = Event::ipc(0, "h", 1, "a", 2, "b");
  e.peer_host = "other";
  bad.push_back({e, "ipc across hosts"});
  e = Event::net(0, "h", 1, "a", "", 2, "b");
  bad.push_back({e, "net without peer_host"});
  e = Event::net(0, "h", 1, "", "g", 2, "b");
  bad.push_back({e, "net without exe"});
  e = Event::listen(0, "h", 1, "a", "");
  bad.push_back({e, "listen without endpoint"});
  e = Event::listen(0, "h", 0, "a", "h:1");
  bad.push_back({e, "listen without pid"});
  e = Event::request(0, "h", "");
  bad.push_back({e, "request without endpoint"});
  for (const auto& [event, why] : bad) {
    EXPECT_THROW(validate_event(event), ValidationError) << why;
  }
}

TEST(EventValidationTest, IpcWithMatchingPeerHostIsAccepted) {
  Event e = Event::ipc(0, "h", 1, "a", 2, "b");
  e.peer_host = "h";
  EXPECT_NO_THROW(validate_event(e));
}

TEST(EventValidationTest, InvalidRecordInFileCarriesLineNumber) {
  try {
    parse_text(
        "#trace/1\tr\tNORMAL\t0\n"
        "0\tREQUEST\tctl\t\t\t\t\t\t\t\tapi\n"
        "1\tSPAWN\th\t3\tc\t3\tp\t\t\t\t\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(CountRequestsTest, Examples) {
  RunTrace t;
  for (int i = 0; i < 3; ++i) {
    t.events.push_back(Event::request(i, "ctl", "api:8774"));
  }
  EXPECT_EQ(count_requests(t, "api:8774"), 3u);
  EXPECT_EQ(count_requests(t, "other:80"), 0u);
  t.events.push_back(Event::request(4, "ctl", "other:80"));
  t.events.push_back(Event::ipc(5, "h", 1, "a", 2, "b"));
  EXPECT_EQ(count_requests(t), 4u);
  EXPECT_EQ(count_requests(t, "other:80"), 1u);
}

TEST(CountRequestsTest, MonotoneUnderPrefixExtension) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const RunTrace full = random_trace(rng);
    RunTrace prefix = full;
    prefix.events.clear();
    std::uint64_t last = 0;
    std::uint64_t last_api = 0;
    for (const Event& e : full.events) {
      prefix.events.push_back(e);
      const std::uint64_t now = count_requests(prefix);
      const std::uint64_t now_api = count_requests(prefix, "api:8774");
      EXPECT_GE(now, last);
      EXPECT_GE(now_api, last_api);
      last = now;
      last_api = now_api;
    }
  }
}

TEST(EventKindTest, NamesRoundTrip) {
  for (EventKind k : kAllEventKinds) {
    EXPECT_EQ(parse_event_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_event_kind("spawn").has_value());
  EXPECT_EQ(parse_run_label("FAULT"), RunLabel::kFault);
  EXPECT_FALSE(parse_run_label("BROKEN").has_value());
}

}  // namespace
}  // namespace sysgraph
