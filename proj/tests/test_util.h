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

#ifndef SYSGRAPH_TESTS_TEST_UTIL_H_
#define SYSGRAPH_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sysgraph/trace.h"

namespace sysgraph::testing {

class ScopedTempDir {
 public:
  ScopedTempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sysgraph-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScopedTempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScopedTempDir(const ScopedTempDir&) = delete;
  ScopedTempDir& operator=(const ScopedTempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string trace_text(const RunTrace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

// Random valid trace over a small process universe. Each (host, pid) maps to
// a fixed exe so graph construction never sees a conflict. Exe names include
// characters that need escaping.
struct RandomTraceOptions {
  int events = 60;
  int hosts = 2;
  int pids_per_host = 8;
  int exe_kinds = 5;
};

inline std::string random_exe_name(int kind) {
  static const char* kNames[] = {"qemu-kvm", "libvirtd", "ovsdb server",
                                 "tab\tname", "back\\slash", "nova-compute",
                                 "brctl", "iscsiadm"};
  return kNames[kind % 8];
}

inline RunTrace random_trace(std::mt19937_64& rng,
                             const RandomTraceOptions& opt = {}) {
  auto pick = [&](int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  };
  auto host_name = [](int h) { return "host-" + std::to_string(h); };
  // pid -> exe is a fixed function so every observation agrees.
  auto exe_of = [&](int host, Pid pid) {
    return random_exe_name((host * 7 + static_cast<int>(pid) * 3) %
                           opt.exe_kinds);
  };

  RunTrace trace;
  trace.run_id = "random-" + std::to_string(rng() % 100000);
  trace.label = RunLabel::kNormal;
  double ts = 0.0;
  for (int i = 0; i < opt.events; ++i) {
    ts += static_cast<double>(pick(4)) * 0.25;
    const int h = pick(opt.hosts);
    const Pid pid = static_cast<Pid>(1 + pick(opt.pids_per_host));
    Pid other = static_cast<Pid>(1 + pick(opt.pids_per_host));
    switch (pick(10)) {
      case 0:
      case 1:
      case 2:
        if (other == pid) other = pid % opt.pids_per_host + 1;
        if (other == pid) break;
        trace.events.push_back(Event::spawn(ts, host_name(h), other,
                                            exe_of(h, other), pid,
                                            exe_of(h, pid)));
        break;
      case 3:
      case 4:
      case 5:
        trace.events.push_back(Event::ipc(ts, host_name(h), pid, exe_of(h, pid),
                                          other, exe_of(h, other)));
        break;
      case 6:
      case 7: {
        const int ph = pick(opt.hosts);
        trace.events.push_back(Event::net(ts, host_name(h), pid, exe_of(h, pid),
                                          host_name(ph), other,
                                          exe_of(ph, other),
                                          host_name(ph) + ":80"));
        break;
      }
      case 8:
        trace.events.push_back(Event::request(ts, host_name(0),
                                              pick(3) == 0 ? "other:80"
                                                           : "api:8774"));
        break;
      default:
        trace.events.push_back(Event::listen(ts, host_name(h), pid,
                                             exe_of(h, pid), "api:8774"));
    }
  }
  trace.workload = count_requests(trace);
  return trace;
}

}  // namespace sysgraph::testing

#endif  // SYSGRAPH_TESTS_TEST_UTIL_H_
