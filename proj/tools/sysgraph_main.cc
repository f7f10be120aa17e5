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

// sysgraph command-line entry point.
//
// Exit codes: 0 success (an ANOMALOUS verdict is a success), 1 usage error,
// 2 data or validation error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sysgraph/errors.h"
#include "sysgraph/evaluation.h"
#include "sysgraph/monitoring_plan.h"
#include "sysgraph/online_monitor.h"
#include "sysgraph/synth.h"
#include "sysgraph/system_graph.h"
#include "sysgraph/trace.h"
#include "sysgraph/training.h"

namespace fs = std::filesystem;
using namespace sysgraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

constexpr const char* kFormatsHelp = R"(File formats (tab-separated, backslash escapes \\ \t \n \r, empty = absent):
  trace     '#trace/1  run_id  label  workload' then one line per event:
            ts kind host pid exe ppid parent_exe peer_pid peer_exe peer_host endpoint
  manifest  manifest.tsv in a dataset directory, one record per run
  model     '#behavior-model/1' text file with thresholds, every fit and the
            selected set, followed by an embedded '[plan]' section
  verdicts  one JSON object per line: ts, decision, evidence, unknown_exes
)";

struct ThresholdFlags {
  Thresholds thresholds;

  void add(CLI::App* cmd) {
    cmd->add_option("--r2-threshold", thresholds.r2_threshold,
                    "minimum R^2 for a feature to be selected")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tolerance-factor", thresholds.tolerance_factor,
                    "band = factor * max training residual + slack")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--absolute-slack", thresholds.absolute_slack,
                    "constant part of the tolerance band")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  }
};

struct MonitorFlags {
  std::string mode = "end-of-run";
  double period = 60.0;
  bool no_flag_unknown = false;
  std::string endpoint;

  void add(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "verdict schedule")
        ->capture_default_str()
        ->check(CLI::IsMember({"end-of-run", "periodic"}));
    cmd->add_option("--period", period,
                    "seconds between verdicts in periodic mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-flag-unknown", no_flag_unknown,
                  "do not treat executables unseen in training as anomalous");
    cmd->add_option("--endpoint", endpoint,
                    "count only REQUEST events on this endpoint (default: all)");
  }

  MonitorMode monitor_mode() const { return *parse_monitor_mode(mode); }

  MonitorOptions options() const {
    MonitorOptions o;
    o.flag_unknown_exes = !no_flag_unknown;
    if (!endpoint.empty()) o.request_endpoint = endpoint;
    return o;
  }
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn normal process-graph behavior from OS event traces and "
               "detect failures online."};
  app.footer(kFormatsHelp);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  std::string gen_spec;
  std::string gen_out;
  DatasetOptions gen_opts;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--spec", gen_spec,
                  "scenario JSON file (default: built-in scenario)")
      ->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "output dataset directory")->required();
  gen->add_option("--normal", gen_opts.n_normal, "failure-free runs")
      ->capture_default_str();
  gen->add_option("--fault", gen_opts.n_fault, "fault-injected runs")
      ->capture_default_str();
  gen->add_option("--workload-min", gen_opts.workload_min,
                  "smallest requests per run")
      ->capture_default_str();
  gen->add_option("--workload-max", gen_opts.workload_max,
                  "largest requests per run")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "base seed (default: scenario seed)");

  // train
  auto* trn = app.add_subcommand("train", "fit the normal-behavior model");
  std::string trn_dataset;
  std::string trn_model;
  ThresholdFlags trn_flags;
  trn->add_option("--dataset", trn_dataset, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  trn->add_option("--model", trn_model, "model file to write")->required();
  trn_flags.add(trn);

  // plan
  auto* pln = app.add_subcommand("plan", "print the monitoring plan of a model");
  std::string pln_model;
  std::string pln_out;
  pln->add_option("--model", pln_model, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  pln->add_option("--out", pln_out, "also write a standalone plan file");

  // monitor
  auto* mon = app.add_subcommand("monitor", "check a trace stream against a model");
  std::string mon_model;
  std::string mon_plan;
  std::string mon_trace = "-";
  std::string mon_out;
  MonitorFlags mon_flags;
  mon->add_option("--model", mon_model, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  mon->add_option("--plan", mon_plan,
                  "plan file (default: the plan embedded in the model)")
      ->check(CLI::ExistingFile);
  mon->add_option("--trace", mon_trace, "trace file, or - for standard input")
      ->capture_default_str();
  mon->add_option("--out", mon_out, "verdict file (default: standard output)");
  mon_flags.add(mon);

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "10-fold cross-validation report");
  std::string evl_dataset;
  std::string evl_json;
  std::string evl_csv;
  std::uint64_t evl_seed = 0;
  ThresholdFlags evl_thresholds;
  MonitorFlags evl_flags;
  evl->add_option("--dataset", evl_dataset, "dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  evl->add_option("--report-json", evl_json, "machine-readable report file");
  evl->add_option("--report-csv", evl_csv, "per-fold confusion counts (CSV)");
  evl->add_option("--seed", evl_seed,
                  "seed echoed into the report (default: manifest seed)");
  evl_thresholds.add(evl);
  evl_flags.add(evl);

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "render a trace's system graph");
  std::string dot_trace;
  std::string dot_out;
  dot->add_option("--trace", dot_trace, "trace file")
      ->required()
      ->check(CLI::ExistingFile);
  dot->add_option("--out", dot_out, "DOT file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      ScenarioSpec spec = gen_spec.empty() ? default_scenario()
                                           : load_scenario(gen_spec);
      gen_opts.seed = gen_seed.value_or(spec.seed);
      DatasetManifest m = generate_dataset(spec, gen_opts, gen_out);
      std::cout << "wrote " << m.entries.size() << " runs to " << gen_out
                << " (" << m.rng << ", seed " << m.seed << ")\n";
    } else if (*trn) {
      Dataset ds = load_dataset(trn_dataset);
      std::vector<RunTrace> normal;
      std::size_t excluded = 0;
      for (RunTrace& r : ds.runs) {
        if (r.label == RunLabel::kNormal) {
          normal.push_back(std::move(r));
        } else {
          ++excluded;
        }
      }
      std::cerr << "training on " << normal.size() << " NORMAL runs; excluded "
                << excluded << " FAULT/UNKNOWN runs\n";
      TrainedPipeline p = train_pipeline(normal, trn_flags.thresholds);
      std::ofstream out(trn_model, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create '" + trn_model + "'");
      save_model(p.model, out);
      write_plan_section(p.plan, out);
      out.flush();
      if (!out) throw IoError("write failed for '" + trn_model + "'");
      std::cout << "selected " << p.model.selected.size() << " of "
                << p.model.registry.size() << " features:\n";
      for (const FeatureId& f : p.model.selected) {
        std::cout << "  " << to_string(f) << '\n';
      }
    } else if (*pln) {
      MonitoringPlan plan = load_plan(pln_model);
      std::cout << describe_plan(plan);
      if (!pln_out.empty()) save_plan(plan, pln_out);
    } else if (*mon) {
      BehaviorModel model = load_model(fs::path(mon_model));
      MonitoringPlan plan = load_plan(mon_plan.empty() ? mon_model : mon_plan);
      std::ofstream file_out;
      if (!mon_out.empty()) {
        file_out.open(mon_out, std::ios::binary | std::ios::trunc);
        if (!file_out) throw IoError("cannot create '" + mon_out + "'");
      }
      std::ostream& sink_stream = mon_out.empty() ? std::cout : file_out;
      auto sink = [&](const Verdict& v) {
        sink_stream << verdict_to_json(v) << '\n' << std::flush;
      };
      MonitorRun run;
      if (mon_trace == "-") {
        run = run_monitor(std::cin, "<stdin>", model, plan,
                          mon_flags.monitor_mode(), mon_flags.period,
                          mon_flags.options(), sink);
      } else {
        std::ifstream in(mon_trace, std::ios::binary);
        if (!in) throw IoError("cannot open trace '" + mon_trace + "'");
        run = run_monitor(in, mon_trace, model, plan, mon_flags.monitor_mode(),
                          mon_flags.period, mon_flags.options(), sink);
      }
      if (run.error) {
        std::cerr << "error: " << *run.error << '\n';
        return kExitData;
      }
      std::cerr << "run classified "
                << (run.anomalous() ? "ANOMALOUS" : "NORMAL") << " ("
                << run.verdicts.size() << " verdicts, " << run.events_read
                << " events)\n";
    } else if (*evl) {
      Dataset ds = load_dataset(evl_dataset);
      EvalConfig cfg;
      cfg.thresholds = evl_thresholds.thresholds;
      cfg.mode = evl_flags.monitor_mode();
      cfg.period = evl_flags.period;
      cfg.monitor = evl_flags.options();
      cfg.seed = evl->count("--seed") ? evl_seed : ds.manifest.seed;
      EvalReport report = cross_validate(ds.runs, cfg);
      std::cout << format_report_table(report);
      if (!evl_json.empty()) write_text_file(evl_json, report_to_json(report));
      if (!evl_csv.empty()) write_text_file(evl_csv, report_to_csv(report));
    } else if (*dot) {
      export_dot(build_graph(parse_trace(fs::path(dot_trace))), dot_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
