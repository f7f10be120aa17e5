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

// Normal-behavior model: one least-squares line per embedding dimension
// against workload, with features kept only when the line explains them
// (coefficient of determination above a threshold, or exactly constant).
//
// Model file (text_format.h quoting):
//
//   #behavior-model/1
//   r2_threshold <TAB> <real>
//   tolerance_factor <TAB> <real>
//   absolute_slack <TAB> <real>
//   columns <TAB> exe <TAB> metric <TAB> slope <TAB> intercept <TAB> r2
//           <TAB> max_abs_residual <TAB> selected
//   feature <TAB> ... one line per registry entry, in registry order ...
//   end
//
// Reals use 17 significant digits, so a save/load round trip is exact. r2 is
// the literal PERFECT_CONSTANT for zero-variance features. A monitoring plan
// section (see monitoring_plan.h) may follow the "end" line.

#ifndef SYSGRAPH_TRAINING_H_
#define SYSGRAPH_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sysgraph/embedding.h"
#include "sysgraph/trace.h"

namespace sysgraph {

struct LinearFit {
  double slope = 0.0;      // feature units per request
  double intercept = 0.0;  // feature units
  double r2 = 0.0;         // meaningless when perfect_constant
  bool perfect_constant = false;
  double max_abs_residual = 0.0;

  double predict(double workload) const { return slope * workload + intercept; }

  bool operator==(const LinearFit&) const = default;
};

// Ordinary least squares of ys on xs. Requires |xs| == |ys| >= 2 and at
// least two distinct xs (DegenerateWorkloadError otherwise). When every y is
// equal the fit is flagged perfect_constant with slope 0.
LinearFit fit_feature(std::span<const double> xs, std::span<const double> ys);

struct Thresholds {
  double r2_threshold = 0.95;
  double tolerance_factor = 1.0;
  double absolute_slack = 0.5;

  bool operator==(const Thresholds&) const = default;
};

void validate(const Thresholds& thresholds);

struct TrainingSample {
  std::string run_id;
  std::uint64_t workload = 0;
  EmbeddingVector embedding;
};

struct TrainingCorpus {
  FeatureRegistry registry;
  std::vector<TrainingSample> samples;
};

// Graph, registry and embedding for every run. All runs must be NORMAL.
TrainingCorpus build_training_corpus(std::span<const RunTrace> normal_runs);

struct BehaviorModel {
  FeatureRegistry registry;
  std::vector<LinearFit> fits;     // parallel to registry
  std::vector<FeatureId> selected;  // registry order
  Thresholds thresholds;

  const LinearFit& fit(const FeatureId& feature) const;

  // Allowed |observed - predicted| for one feature.
  double band(const FeatureId& feature) const;

  bool operator==(const BehaviorModel&) const = default;
};

double band_for(const LinearFit& fit, const Thresholds& thresholds);

// Keeps features whose fit has r2 >= threshold or is perfect_constant.
bool is_selected(const LinearFit& fit, double r2_threshold);

BehaviorModel train(const TrainingCorpus& corpus, const Thresholds& thresholds);

void save_model(const BehaviorModel& model, std::ostream& out);
void save_model(const BehaviorModel& model, const std::filesystem::path& path);

// Reads up to the "end" line; trailing sections are left in the stream.
BehaviorModel load_model(std::istream& in, const std::string& source_name);
BehaviorModel load_model(const std::filesystem::path& path);

}  // namespace sysgraph

#endif  // SYSGRAPH_TRAINING_H_
