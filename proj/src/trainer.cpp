// Copyright 2026 The quditnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quditnet/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include "quditnet/error.hpp"

namespace quditnet {

std::string_view to_string(AssignmentMode mode) noexcept {
  return mode == AssignmentMode::Optimized ? "optimized" : "fixed";
}

AssignmentMode parse_assignment_mode(std::string_view text) {
  if (text == "optimized") return AssignmentMode::Optimized;
  if (text == "fixed") return AssignmentMode::Fixed;
  throw Error(ErrorCode::InvalidArgument, "unknown assignment mode '" + std::string(text) + "'");
}

std::string_view to_string(OrderingEval mode) noexcept { return mode == OrderingEval::Train ? "train" : "holdout"; }

OrderingEval parse_ordering_eval(std::string_view text) {
  if (text == "train") return OrderingEval::Train;
  if (text == "holdout") return OrderingEval::Holdout;
  throw Error(ErrorCode::InvalidArgument, "unknown ordering evaluation '" + std::string(text) + "'");
}

void TrainerConfig::validate() const {
  solver.validate();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "holdout_fraction must lie in (0, 1)");
  }
  if (jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Runs task(i) for i in [0, count) on up to `jobs` threads; rethrows the
// lowest-index failure.
template <typename Task>
void run_indexed(std::size_t count, std::size_t jobs, Task&& task) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct CandidateFit {
  svm::SvmFit fit;
  double hinge = 0.0;
};

}  // namespace

FitResult fit(const Matrix& features, std::span<const int> labels, std::size_t d, const TrainerConfig& config,
              std::span<const std::size_t> rows, const FitHooks& hooks) {
  config.validate();
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "need at least two classes");
  if (features.cols() < 2) throw Error(ErrorCode::DimensionMismatch, "feature matrix needs a constant and a monomial");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature rows and labels differ in count");
  }
  const auto start = Clock::now();

  std::vector<std::size_t> surviving;
  if (rows.empty()) {
    surviving.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) surviving[i] = i;
  } else {
    surviving.assign(rows.begin(), rows.end());
  }
  std::vector<std::size_t> class_count(d, 0);
  for (std::size_t r : surviving) {
    if (r >= labels.size()) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
    const int c = labels[r];
    if (c < 0 || static_cast<std::size_t>(c) >= d) {
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(c) + " outside [0, d)");
    }
    ++class_count[static_cast<std::size_t>(c)];
  }
  for (std::size_t c = 0; c < d; ++c) {
    if (class_count[c] == 0) throw Error(ErrorCode::ClassMissing, "class " + std::to_string(c) + " has no samples");
  }

  std::vector<int> remaining(d);
  for (std::size_t c = 0; c < d; ++c) remaining[c] = static_cast<int>(c);

  FitResult result;
  result.outcome_to_class.assign(d, -1);
  const std::size_t width = static_cast<std::size_t>(features.cols());

  for (std::size_t m = 1; m < d; ++m) {
    const auto step_start = Clock::now();
    if (remaining.size() < 2) throw Error(ErrorCode::DegenerateStep, "one class left before the last step");

    std::vector<int> candidates;
    if (config.assignment == AssignmentMode::Optimized) {
      candidates = remaining;
    } else {
      candidates = {static_cast<int>(d - m)};
    }

    std::vector<std::size_t> fit_rows;
    std::vector<std::size_t> eval_rows;
    if (config.ordering_eval == OrderingEval::Train) {
      fit_rows = surviving;
      eval_rows = surviving;
    } else {
      const auto threshold = static_cast<std::uint64_t>(config.holdout_fraction * 18446744073709551615.0);
      for (std::size_t r : surviving) {
        (splitmix64(config.solver.seed ^ (r * 0x2545f4914f6cdd1dull)) < threshold ? eval_rows : fit_rows).push_back(r);
      }
      if (eval_rows.empty() || fit_rows.empty()) {
        throw Error(ErrorCode::DegenerateStep, "holdout split left one side empty");
      }
    }

    std::vector<CandidateFit> fits(candidates.size());
    run_indexed(candidates.size(), config.jobs, [&](std::size_t k) {
      const int cls = candidates[k];
      std::vector<std::int8_t> y_fit;
      y_fit.reserve(fit_rows.size());
      for (std::size_t r : fit_rows) y_fit.push_back(labels[r] == cls ? -1 : 1);
      svm::SolverConfig solver = config.solver;
      solver.seed = splitmix64(config.solver.seed ^ splitmix64((m << 32) ^ static_cast<std::uint64_t>(cls)));
      const svm::SvmProblem problem(features, std::move(y_fit), solver, fit_rows);
      fits[k].fit = svm::train(problem);

      std::vector<std::int8_t> y_eval;
      y_eval.reserve(eval_rows.size());
      for (std::size_t r : eval_rows) y_eval.push_back(labels[r] == cls ? -1 : 1);
      const std::vector<double> yhat = svm::decision_values(fits[k].fit.solution, features, eval_rows);
      fits[k].hinge = svm::hinge_loss(std::span<const std::int8_t>(y_eval), yhat);
    });
    result.report.svm_fits += candidates.size();

    std::size_t best = 0;
    for (std::size_t k = 1; k < fits.size(); ++k) {
      if (fits[k].hinge < fits[best].hinge) best = k;
    }
    const int chosen = candidates[best];

    std::vector<double> weights(width);
    const svm::SvmSolution& sol = fits[best].fit.solution;
    weights[0] = config.scale * sol.b;
    for (std::size_t j = 1; j < width; ++j) weights[j] = config.scale * sol.w[j - 1];
    result.theta_weights.push_back(std::move(weights));
    result.outcome_to_class[d - m] = chosen;

    StepRecord record;
    record.step = m;
    record.outcome = d - m;
    record.chosen_class = chosen;
    record.samples = surviving.size();
    for (std::size_t k = 0; k < fits.size(); ++k) {
      record.candidates.push_back({candidates[k], fits[k].hinge, fits[k].fit.converged, fits[k].fit.epochs});
    }

    std::erase_if(surviving, [&](std::size_t r) { return labels[r] == chosen; });
    std::erase(remaining, chosen);
    record.seconds = seconds_since(step_start);
    if (hooks.on_step) hooks.on_step(record);
    result.report.steps.push_back(std::move(record));
  }
  result.outcome_to_class[0] = remaining.front();
  result.report.seconds = seconds_since(start);
  return result;
}

std::vector<int> QuditClassifierModel::labels() const {
  std::vector<int> out = assignment.outcome_to_label;
  std::sort(out.begin(), out.end());
  return out;
}

void QuditClassifierModel::validate() const {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "model needs d >= 2");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "model scale must be positive");
  if (feature_map.inputs != pca.k()) throw Error(ErrorCode::DimensionMismatch, "feature map inputs differ from PCA k");
  const std::size_t width = feature_count(feature_map);
  if (theta_weights.size() != d - 1) throw Error(ErrorCode::DimensionMismatch, "need d-1 weight vectors");
  for (const auto& w : theta_weights) {
    if (w.size() != width) throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from feature count");
  }
  if (assignment.outcome_to_label.size() != d) throw Error(ErrorCode::DimensionMismatch, "assignment must cover d outcomes");
  std::vector<int> sorted = labels();
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "assignment is not a bijection");
  }
  if (static_cast<std::size_t>(pca.components.cols()) != pca.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "PCA component width differs from its mean");
  }
  if (standardizer && standardizer->mean.size() != width) {
    throw Error(ErrorCode::DimensionMismatch, "standardizer width differs from feature count");
  }
}

SinCos2 angle_terms(double z) noexcept {
  // sigmoid(z) and sigmoid(-z) evaluated without overflowing exp.
  double pos = 0.0;
  double neg = 0.0;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    pos = 1.0 / (1.0 + e);
    neg = e / (1.0 + e);
  } else {
    const double e = std::exp(z);
    pos = e / (1.0 + e);
    neg = 1.0 / (1.0 + e);
  }
  return {pos, neg * (1.0 + pos)};
}

std::vector<double> outcome_probabilities(std::span<const SinCos2> terms) {
  const std::size_t d = terms.size() + 1;
  std::vector<double> p(d, 0.0);
  double prefix = 1.0;
  for (std::size_t m = 1; m < d; ++m) {
    const SinCos2& t = terms[m - 1];
    p[d - m] = prefix * t.cos2;
    prefix *= t.sin * t.sin;
  }
  p[0] = prefix;
  return p;
}

namespace {

// Raw input -> z_1..z_{d-1}; shared by every prediction entry point so
// single and batch paths agree bit for bit.
class Activator {
 public:
  explicit Activator(const QuditClassifierModel& model)
      : model_(model), expander_(model.feature_map), scores_(model.pca.k()), features_(expander_.size()) {
    model.validate();
  }

  std::vector<double> operator()(std::span<const double> x) {
    if (x.size() != model_.pca.input_dim()) {
      throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) + " values, model expects " +
                                                    std::to_string(model_.pca.input_dim()));
    }
    data::pca_transform_row(model_.pca, x, scores_);
    expander_.expand_into(scores_, features_);
    if (model_.standardizer) model_.standardizer->apply(std::span<double>(features_));
    std::vector<double> z(model_.d - 1);
    for (std::size_t m = 0; m + 1 < model_.d; ++m) {
      const auto& w = model_.theta_weights[m];
      double s = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * features_[j];
      z[m] = s;
    }
    return z;
  }

 private:
  const QuditClassifierModel& model_;
  FeatureExpander expander_;
  std::vector<double> scores_;
  std::vector<double> features_;
};

std::vector<double> outcome_proba_from(std::span<const double> z) {
  std::vector<SinCos2> terms;
  terms.reserve(z.size());
  for (double v : z) terms.push_back(angle_terms(v));
  return outcome_probabilities(terms);
}

std::size_t argmax_lowest(std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < p.size(); ++j) {
    if (p[j] > p[best]) best = j;
  }
  return best;
}

std::span<const double> row_span(const Matrix& X, Eigen::Index r) {
  return {X.row(r).data(), static_cast<std::size_t>(X.cols())};
}

}  // namespace

std::vector<double> theta_activations(const QuditClassifierModel& model, std::span<const double> x) {
  Activator act(model);
  return act(x);
}

std::vector<SinCos2> predict_thetas(const QuditClassifierModel& model, std::span<const double> x) {
  const std::vector<double> z = theta_activations(model, x);
  std::vector<SinCos2> out;
  out.reserve(z.size());
  for (double v : z) out.push_back(angle_terms(v));
  return out;
}

std::vector<double> predict_outcome_proba(const QuditClassifierModel& model, std::span<const double> x) {
  return outcome_proba_from(theta_activations(model, x));
}

std::vector<double> predict_proba(const QuditClassifierModel& model, std::span<const double> x) {
  const std::vector<double> by_outcome = predict_outcome_proba(model, x);
  const std::vector<int> order = model.labels();
  std::vector<double> out(model.d, 0.0);
  for (std::size_t j = 0; j < model.d; ++j) {
    const int label = model.assignment.outcome_to_label[j];
    const auto pos = std::lower_bound(order.begin(), order.end(), label) - order.begin();
    out[static_cast<std::size_t>(pos)] = by_outcome[j];
  }
  return out;
}

int predict(const QuditClassifierModel& model, std::span<const double> x) {
  const std::vector<double> p = predict_outcome_proba(model, x);
  return model.assignment.outcome_to_label[argmax_lowest(p)];
}

std::vector<std::vector<double>> predict_outcome_proba(const QuditClassifierModel& model, const Matrix& X) {
  Activator act(model);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(outcome_proba_from(act(row_span(X, r))));
  return out;
}

std::vector<int> predict(const QuditClassifierModel& model, const Matrix& X) {
  Activator act(model);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const std::vector<double> p = outcome_proba_from(act(row_span(X, r)));
    out.push_back(model.assignment.outcome_to_label[argmax_lowest(p)]);
  }
  return out;
}

namespace {

std::uint64_t fingerprint_rows(const data::Dataset& ds, std::span<const std::size_t> rows) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::size_t n = rows.empty() ? ds.size() : rows.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = rows.empty() ? k : rows[k];
    mix(ds.X.row(static_cast<Eigen::Index>(r)).data(), static_cast<std::size_t>(ds.X.cols()) * sizeof(double));
    const int label = ds.label_names[static_cast<std::size_t>(ds.y[r])];
    mix(&label, sizeof label);
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrainedClassifier train_classifier(const data::Dataset& dataset, const TrainingSpec& spec,
                                   std::span<const std::size_t> rows, const FitHooks& hooks) {
  const data::PcaModel pca = data::pca_fit(dataset.X, spec.components, rows);
  return train_classifier(dataset, spec, pca, rows, hooks);
}

TrainedClassifier train_classifier(const data::Dataset& dataset, const TrainingSpec& spec,
                                   const data::PcaModel& full_pca, std::span<const std::size_t> rows,
                                   const FitHooks& hooks) {
  const data::PcaModel pca = full_pca.k() == spec.components ? full_pca : full_pca.truncated(spec.components);
  const FeatureMap map{spec.components, spec.degree, spec.variant};
  const FeatureExpander expander(map);

  Matrix features = expander.expand_rows(data::pca_transform(pca, dataset.X, rows));
  std::optional<FeatureStandardizer> standardizer;
  if (spec.standardize_features) {
    standardizer = FeatureStandardizer::fit(features);
    standardizer->apply(features);
  }

  const std::size_t n = rows.empty() ? dataset.size() : rows.size();
  std::vector<int> labels(n);
  std::vector<std::size_t> present(dataset.classes(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    labels[k] = dataset.y[rows.empty() ? k : rows[k]];
    ++present[static_cast<std::size_t>(labels[k])];
  }
  for (std::size_t c = 0; c < present.size(); ++c) {
    if (present[c] == 0) {
      throw Error(ErrorCode::ClassMissing, "label " + std::to_string(dataset.label_names[c]) +
                                               " has no training samples");
    }
  }

  FitResult fitted = fit(features, labels, dataset.classes(), spec.trainer, {}, hooks);

  TrainedClassifier out;
  QuditClassifierModel& model = out.model;
  model.d = dataset.classes();
  model.feature_map = map;
  model.pca = pca;
  model.standardizer = std::move(standardizer);
  model.theta_weights = std::move(fitted.theta_weights);
  model.scale = spec.trainer.scale;
  for (int c : fitted.outcome_to_class) {
    model.assignment.outcome_to_label.push_back(dataset.label_names[static_cast<std::size_t>(c)]);
  }

  const auto& solver = spec.trainer.solver;
  auto& meta = model.metadata;
  meta["assignment"] = std::string(to_string(spec.trainer.assignment));
  meta["C"] = format_double(solver.C);
  meta["components"] = std::to_string(spec.components);
  meta["dataset_fingerprint"] = std::to_string(fingerprint_rows(dataset, rows));
  meta["degree"] = std::to_string(spec.degree);
  meta["loss"] = std::string(svm::to_string(solver.loss));
  meta["max_epochs"] = std::to_string(solver.max_epochs);
  meta["ordering_eval"] = std::string(to_string(spec.trainer.ordering_eval));
  meta["pca_fit"] = "training_rows";
  meta["seed"] = std::to_string(solver.seed);
  meta["standardize_features"] = spec.standardize_features ? "true" : "false";
  meta["tolerance"] = format_double(solver.tolerance);
  meta["training_samples"] = std::to_string(n);
  meta["variant"] = std::string(to_string(spec.variant));
  meta["svm_fits"] = std::to_string(fitted.report.svm_fits);
  model.validate();
  out.report = std::move(fitted.report);
  return out;
}

}  // namespace quditnet
