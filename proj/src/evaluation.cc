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

#include "sysgraph/evaluation.h"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sysgraph/errors.h"
#include "sysgraph/text_format.h"

namespace sysgraph {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_of(const std::vector<FoldResult>& folds,
                              std::optional<double> FoldResult::*field) {
  double sum = 0.0;
  int n = 0;
  for (const FoldResult& f : folds) {
    if (f.*field) {
      sum += *(f.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::string pct(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", *v * 100.0);
  return buf;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int fold_of(std::string_view run_id) {
  return static_cast<int>(fnv1a64(run_id) % kFolds);
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  ds.manifest = read_manifest(dir / kManifestFile);
  ds.runs.reserve(ds.manifest.entries.size());
  for (const ManifestEntry& e : ds.manifest.entries) {
    RunTrace trace = parse_trace(dir / (e.run_id + ".trace"));
    if (trace.run_id != e.run_id || trace.label != e.label ||
        trace.workload != e.workload) {
      throw ValidationError("trace '" + e.run_id +
                            "' disagrees with its manifest record");
    }
    ds.runs.push_back(std::move(trace));
  }
  return ds;
}

TrainedPipeline train_pipeline(std::span<const RunTrace> normal_runs,
                               const Thresholds& thresholds) {
  TrainingCorpus corpus = build_training_corpus(normal_runs);
  TrainedPipeline out;
  out.model = train(corpus, thresholds);
  out.plan = derive_plan(out.model);
  return out;
}

Decision classify_run(const RunTrace& trace, const BehaviorModel& model,
                      const MonitoringPlan& plan, MonitorMode mode,
                      double period, const MonitorOptions& options) {
  MonitorRun run = run_monitor(trace, model, plan, mode, period, options);
  if (run.error) throw Error("monitor failed on '" + trace.run_id + "': " +
                             *run.error);
  return run.anomalous() ? Decision::kAnomalous : Decision::kNormal;
}

EvalReport cross_validate(std::span<const RunTrace> runs,
                          const EvalConfig& config) {
  std::vector<const RunTrace*> normals;
  std::vector<const RunTrace*> faults;
  for (const RunTrace& r : runs) {
    if (r.label == RunLabel::kNormal) normals.push_back(&r);
    if (r.label == RunLabel::kFault) faults.push_back(&r);
  }
  if (normals.size() < static_cast<std::size_t>(kFolds)) {
    throw PreconditionError("cross-validation needs at least 10 NORMAL runs");
  }

  EvalReport report;
  report.config = config;
  for (int fold = 0; fold < kFolds; ++fold) {
    FoldResult result;
    result.fold = fold;
    std::vector<RunTrace> train_set;
    std::vector<const RunTrace*> test_set;
    for (const RunTrace* r : normals) {
      if (fold_of(r->run_id) == fold) {
        test_set.push_back(r);
      } else {
        train_set.push_back(*r);
        result.train_runs.push_back(r->run_id);
      }
    }
    test_set.insert(test_set.end(), faults.begin(), faults.end());

    TrainedPipeline pipeline = train_pipeline(train_set, config.thresholds);
    result.registry_size = pipeline.model.registry.size();
    result.selected_features = pipeline.model.selected.size();
    result.plan_filters = pipeline.plan.filters.size();

    for (const RunTrace* r : test_set) {
      result.test_runs.push_back(r->run_id);
      const bool flagged =
          classify_run(*r, pipeline.model, pipeline.plan, config.mode,
                       config.period, config.monitor) == Decision::kAnomalous;
      Confusion& c = result.confusion;
      if (r->label == RunLabel::kFault) {
        ++(flagged ? c.tp : c.fn);
      } else {
        ++(flagged ? c.fp : c.tn);
      }
    }
    const Confusion& c = result.confusion;
    result.recall = ratio(c.tp, c.tp + c.fn);
    result.selectivity = ratio(c.tn, c.tn + c.fp);
    report.total.tp += c.tp;
    report.total.fn += c.fn;
    report.total.tn += c.tn;
    report.total.fp += c.fp;
    report.folds.push_back(std::move(result));
  }
  report.mean_recall = mean_of(report.folds, &FoldResult::recall);
  report.mean_selectivity = mean_of(report.folds, &FoldResult::selectivity);
  return report;
}

EvalReport cross_validate(const std::filesystem::path& dataset_dir,
                          const EvalConfig& config) {
  Dataset ds = load_dataset(dataset_dir);
  return cross_validate(ds.runs, config);
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  const EvalConfig& cfg = report.config;
  out << "config: r2_threshold=" << text::format_shortest(cfg.thresholds.r2_threshold)
      << " tolerance_factor=" << text::format_shortest(cfg.thresholds.tolerance_factor)
      << " absolute_slack=" << text::format_shortest(cfg.thresholds.absolute_slack)
      << " mode=" << to_string(cfg.mode)
      << " period=" << text::format_shortest(cfg.period)
      << " flag_unknown=" << (cfg.monitor.flag_unknown_exes ? "on" : "off")
      << " endpoint=" << cfg.monitor.request_endpoint.value_or("*")
      << " seed=" << cfg.seed << '\n';
  char line[160];
  std::snprintf(line, sizeof(line), "%4s %6s %5s %5s %5s %5s %5s %9s %11s %8s\n",
                "fold", "train", "test", "TP", "FN", "TN", "FP", "recall",
                "selectivity", "features");
  out << line;
  for (const FoldResult& f : report.folds) {
    const Confusion& c = f.confusion;
    std::snprintf(line, sizeof(line),
                  "%4d %6zu %5zu %5llu %5llu %5llu %5llu %9s %11s %4zu/%-3zu\n",
                  f.fold, f.train_runs.size(), f.test_runs.size(),
                  static_cast<unsigned long long>(c.tp),
                  static_cast<unsigned long long>(c.fn),
                  static_cast<unsigned long long>(c.tn),
                  static_cast<unsigned long long>(c.fp), pct(f.recall).c_str(),
                  pct(f.selectivity).c_str(), f.selected_features,
                  f.registry_size);
    out << line;
  }
  out << "mean recall: " << pct(report.mean_recall)
      << "  mean selectivity: " << pct(report.mean_selectivity) << '\n';
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  const EvalConfig& cfg = report.config;
  json config = {
      {"r2_threshold", cfg.thresholds.r2_threshold},
      {"tolerance_factor", cfg.thresholds.tolerance_factor},
      {"absolute_slack", cfg.thresholds.absolute_slack},
      {"mode", std::string(to_string(cfg.mode))},
      {"period", cfg.period},
      {"flag_unknown_exes", cfg.monitor.flag_unknown_exes},
      {"request_endpoint", cfg.monitor.request_endpoint
                               ? json(*cfg.monitor.request_endpoint)
                               : json(nullptr)},
      {"seed", cfg.seed}};
  json folds = json::array();
  for (const FoldResult& f : report.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_runs", f.train_runs},
                     {"test_runs", f.test_runs},
                     {"tp", f.confusion.tp},
                     {"fn", f.confusion.fn},
                     {"tn", f.confusion.tn},
                     {"fp", f.confusion.fp},
                     {"recall", opt_json(f.recall)},
                     {"selectivity", opt_json(f.selectivity)},
                     {"registry_size", f.registry_size},
                     {"selected_features", f.selected_features},
                     {"plan_filters", f.plan_filters}});
  }
  json j = {{"format", "sysgraph-eval-report/1"},
            {"config", config},
            {"folds", folds},
            {"mean_recall", opt_json(report.mean_recall)},
            {"mean_selectivity", opt_json(report.mean_selectivity)},
            {"total",
             {{"tp", report.total.tp},
              {"fn", report.total.fn},
              {"tn", report.total.tn},
              {"fp", report.total.fp}}}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "fold,train,test,tp,fn,tn,fp,recall,selectivity\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? text::format_precise(*v) : std::string();
  };
  for (const FoldResult& f : report.folds) {
    out << f.fold << ',' << f.train_runs.size() << ',' << f.test_runs.size()
        << ',' << f.confusion.tp << ',' << f.confusion.fn << ','
        << f.confusion.tn << ',' << f.confusion.fp << ',' << opt(f.recall)
        << ',' << opt(f.selectivity) << '\n';
  }
  return out.str();
}

}  // namespace sysgraph
