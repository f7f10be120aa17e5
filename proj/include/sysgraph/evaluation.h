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

// Ten-fold cross-validation over failure-free runs. Each NORMAL run is tested
// in exactly one fold (FNV-1a 64 of its run_id, modulo 10) and trains the
// other nine; every FAULT run is tested in every fold and never trains.
// UNKNOWN runs are ignored.

#ifndef SYSGRAPH_EVALUATION_H_
#define SYSGRAPH_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sysgraph/monitoring_plan.h"
#include "sysgraph/online_monitor.h"
#include "sysgraph/synth.h"
#include "sysgraph/training.h"

namespace sysgraph {

inline constexpr int kFolds = 10;

std::uint64_t fnv1a64(std::string_view bytes);
int fold_of(std::string_view run_id);

struct Dataset {
  DatasetManifest manifest;
  std::vector<RunTrace> runs;  // parallel to manifest.entries
};

// Reads manifest.tsv and every <run_id>.trace; trace metadata must agree
// with the manifest.
Dataset load_dataset(const std::filesystem::path& dir);

struct EvalConfig {
  Thresholds thresholds;
  MonitorMode mode = MonitorMode::kEndOfRun;
  double period = 60.0;  // seconds, PERIODIC only
  MonitorOptions monitor;
  std::uint64_t seed = 0;  // echoed only
};

struct TrainedPipeline {
  BehaviorModel model;
  MonitoringPlan plan;
};

// build graphs -> registry -> embed -> fit/select -> backtrack to a plan.
TrainedPipeline train_pipeline(std::span<const RunTrace> normal_runs,
                               const Thresholds& thresholds);

// ANOMALOUS iff any verdict of the monitor run is. Throws Error if the
// monitor reports a stream failure.
Decision classify_run(const RunTrace& trace, const BehaviorModel& model,
                      const MonitoringPlan& plan, MonitorMode mode,
                      double period, const MonitorOptions& options = {});

struct Confusion {
  std::uint64_t tp = 0;  // FAULT classified ANOMALOUS
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;  // NORMAL classified NORMAL
  std::uint64_t fp = 0;

  bool operator==(const Confusion&) const = default;
};

struct FoldResult {
  int fold = 0;
  std::vector<std::string> train_runs;
  std::vector<std::string> test_runs;
  Confusion confusion;
  std::optional<double> recall;       // undefined without FAULT test runs
  std::optional<double> selectivity;  // undefined without NORMAL test runs
  std::size_t registry_size = 0;
  std::size_t selected_features = 0;
  std::size_t plan_filters = 0;

  bool operator==(const FoldResult&) const = default;
};

struct EvalReport {
  EvalConfig config;
  std::vector<FoldResult> folds;
  std::optional<double> mean_recall;       // over folds where defined
  std::optional<double> mean_selectivity;  // over folds where defined
  Confusion total;
};

// Throws PreconditionError with fewer than 10 NORMAL runs.
EvalReport cross_validate(std::span<const RunTrace> runs,
                          const EvalConfig& config);
EvalReport cross_validate(const std::filesystem::path& dataset_dir,
                          const EvalConfig& config);

std::string format_report_table(const EvalReport& report);
std::string report_to_json(const EvalReport& report);
// fold,train,test,tp,fn,tn,fp,recall,selectivity
std::string report_to_csv(const EvalReport& report);

}  // namespace sysgraph

#endif  // SYSGRAPH_EVALUATION_H_
