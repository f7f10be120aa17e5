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

#include "sysgraph/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "sysgraph/errors.h"
#include "sysgraph/system_graph.h"
#include "sysgraph/text_format.h"

namespace sysgraph {

namespace {

constexpr std::string_view kModelTag = "#behavior-model/1";
constexpr std::string_view kPerfectConstant = "PERFECT_CONSTANT";

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

LinearFit fit_feature(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw PreconditionError("fit_feature: xs and ys differ in length");
  }
  if (xs.size() < 2) {
    throw PreconditionError("fit_feature: need at least two points");
  }
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) {
    throw DegenerateWorkloadError(
        "all workloads are equal; a linear fit is undefined");
  }

  LinearFit fit;
  // Zero variance in ys: the line y = ys[0] is exact and r2 is undefined.
  if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; })) {
    fit.intercept = ys[0];
    fit.perfect_constant = true;
    return fit;
  }

  const double x_mean = mean(xs);
  const double y_mean = mean(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - x_mean;
    const double dy = ys[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    ss_tot += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.predict(xs[i]);
    ss_res += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.r2 = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return fit;
}

void validate(const Thresholds& t) {
  if (!(t.r2_threshold >= 0.0 && t.r2_threshold <= 1.0)) {
    throw PreconditionError("r2_threshold must lie in [0, 1]");
  }
  if (!(t.tolerance_factor >= 0.0) || !std::isfinite(t.tolerance_factor)) {
    throw PreconditionError("tolerance_factor must be non-negative");
  }
  if (!(t.absolute_slack >= 0.0) || !std::isfinite(t.absolute_slack)) {
    throw PreconditionError("absolute_slack must be non-negative");
  }
}

TrainingCorpus build_training_corpus(std::span<const RunTrace> normal_runs) {
  std::vector<SystemGraph> graphs;
  graphs.reserve(normal_runs.size());
  for (const RunTrace& run : normal_runs) {
    if (run.label != RunLabel::kNormal) {
      throw PreconditionError("run '" + run.run_id +
                              "' is not failure-free; training uses NORMAL "
                              "runs only");
    }
    graphs.push_back(build_graph(run));
  }
  TrainingCorpus corpus;
  corpus.registry = build_registry(graphs);
  corpus.samples.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    corpus.samples.push_back({normal_runs[i].run_id, normal_runs[i].workload,
                              embed(graphs[i], corpus.registry)});
  }
  return corpus;
}

const LinearFit& BehaviorModel::fit(const FeatureId& feature) const {
  auto idx = registry.index_of(feature);
  if (!idx) {
    throw PreconditionError("feature not in model: " + to_string(feature));
  }
  return fits.at(*idx);
}

double band_for(const LinearFit& fit, const Thresholds& t) {
  if (fit.perfect_constant) return t.absolute_slack;
  return t.tolerance_factor * fit.max_abs_residual + t.absolute_slack;
}

double BehaviorModel::band(const FeatureId& feature) const {
  return band_for(fit(feature), thresholds);
}

bool is_selected(const LinearFit& fit, double r2_threshold) {
  return fit.perfect_constant || fit.r2 >= r2_threshold;
}

BehaviorModel train(const TrainingCorpus& corpus, const Thresholds& thresholds) {
  validate(thresholds);
  if (corpus.samples.size() < 2) {
    throw PreconditionError("training corpus needs at least two runs");
  }
  std::vector<double> xs;
  xs.reserve(corpus.samples.size());
  std::set<std::uint64_t> levels;
  for (const TrainingSample& s : corpus.samples) {
    if (s.embedding.values.size() != corpus.registry.size()) {
      throw PreconditionError("embedding length does not match registry");
    }
    xs.push_back(static_cast<double>(s.workload));
    levels.insert(s.workload);
  }
  if (levels.size() < 2) {
    throw DegenerateWorkloadError(
        "training corpus needs at least two distinct workload values");
  }

  BehaviorModel model;
  model.registry = corpus.registry;
  model.thresholds = thresholds;
  model.fits.reserve(corpus.registry.size());
  std::vector<double> ys(corpus.samples.size());
  for (std::size_t f = 0; f < corpus.registry.size(); ++f) {
    for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
      ys[i] = static_cast<double>(corpus.samples[i].embedding.values[f]);
    }
    model.fits.push_back(fit_feature(xs, ys));
    if (is_selected(model.fits.back(), thresholds.r2_threshold)) {
      model.selected.push_back(corpus.registry[f]);
    }
  }
  return model;
}

void save_model(const BehaviorModel& model, std::ostream& out) {
  using text::format_precise;
  out << kModelTag << '\n';
  out << "r2_threshold\t" << format_precise(model.thresholds.r2_threshold)
      << '\n';
  out << "tolerance_factor\t"
      << format_precise(model.thresholds.tolerance_factor) << '\n';
  out << "absolute_slack\t" << format_precise(model.thresholds.absolute_slack)
      << '\n';
  out << "columns\texe\tmetric\tslope\tintercept\tr2\tmax_abs_residual\t"
         "selected\n";
  std::set<FeatureId> selected(model.selected.begin(), model.selected.end());
  for (std::size_t i = 0; i < model.registry.size(); ++i) {
    const FeatureId& f = model.registry[i];
    const LinearFit& fit = model.fits.at(i);
    out << "feature\t" << text::escape_field(f.exe) << '\t'
        << to_string(f.metric) << '\t' << format_precise(fit.slope) << '\t'
        << format_precise(fit.intercept) << '\t'
        << (fit.perfect_constant ? std::string(kPerfectConstant)
                                 : format_precise(fit.r2))
        << '\t' << format_precise(fit.max_abs_residual) << '\t'
        << (selected.contains(f) ? 1 : 0) << '\n';
  }
  out << "end\n";
}

void save_model(const BehaviorModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  save_model(model, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

BehaviorModel load_model(std::istream& in, const std::string& source_name) {
  text::LineReader reader(in, source_name);
  std::string line;
  if (!reader.next(line)) reader.fail("empty model file");
  if (line != kModelTag) {
    if (line.starts_with("#behavior-model/")) {
      throw FormatVersionError(source_name + ": unsupported model version '" +
                               line + "'");
    }
    reader.fail("missing '#behavior-model/1' header");
  }

  auto read_real = [&](std::string_view key) {
    std::string l;
    if (!reader.next(l)) reader.fail("unexpected end of model file");
    auto fields = text::split_fields(l);
    if (fields.size() != 2 || fields[0] != key) {
      reader.fail("expected '" + std::string(key) + "'");
    }
    auto v = text::parse_double(fields[1]);
    if (!v) reader.fail("invalid real for '" + std::string(key) + "'");
    return *v;
  };

  BehaviorModel model;
  model.thresholds.r2_threshold = read_real("r2_threshold");
  model.thresholds.tolerance_factor = read_real("tolerance_factor");
  model.thresholds.absolute_slack = read_real("absolute_slack");

  if (!reader.next(line) || !line.starts_with("columns\t")) {
    reader.fail("expected columns line");
  }

  std::vector<FeatureId> features;
  std::vector<bool> selected_flags;
  bool saw_end = false;
  while (reader.next(line)) {
    if (line == "end") {
      saw_end = true;
      break;
    }
    auto fields = text::split_fields(line);
    if (fields.size() != 8 || fields[0] != "feature") {
      reader.fail("malformed feature line");
    }
    auto exe = text::unescape_field(fields[1]);
    auto metric = parse_metric(fields[2]);
    if (!exe || exe->empty() || !metric) reader.fail("malformed feature id");
    LinearFit fit;
    auto slope = text::parse_double(fields[3]);
    auto intercept = text::parse_double(fields[4]);
    auto residual = text::parse_double(fields[6]);
    if (!slope || !intercept || !residual || *residual < 0.0) {
      reader.fail("malformed fit values");
    }
    fit.slope = *slope;
    fit.intercept = *intercept;
    fit.max_abs_residual = *residual;
    if (fields[5] == kPerfectConstant) {
      fit.perfect_constant = true;
    } else {
      auto r2 = text::parse_double(fields[5]);
      if (!r2 || *r2 < 0.0 || *r2 > 1.0) reader.fail("malformed r2");
      fit.r2 = *r2;
    }
    if (fields[7] != "0" && fields[7] != "1") reader.fail("malformed flag");
    features.push_back({std::move(*exe), *metric});
    selected_flags.push_back(fields[7] == "1");
    model.fits.push_back(fit);
  }
  if (!saw_end) reader.fail("missing 'end' line");

  std::set<std::string> exes;
  for (const FeatureId& f : features) exes.insert(f.exe);
  model.registry = FeatureRegistry(exes);
  if (!std::equal(features.begin(), features.end(),
                  model.registry.features().begin(),
                  model.registry.features().end())) {
    throw ParseError(source_name, reader.line_number(),
                     "feature lines are not in registry order");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!selected_flags[i]) continue;
    if (!is_selected(model.fits[i], model.thresholds.r2_threshold)) {
      throw ValidationError(source_name + ": selected feature " +
                            to_string(features[i]) +
                            " does not meet the r2 threshold");
    }
    model.selected.push_back(features[i]);
  }
  validate(model.thresholds);
  return model;
}

BehaviorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  return load_model(in, path.string());
}

}  // namespace sysgraph
