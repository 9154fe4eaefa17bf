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

/**
 * @file
 * Sequential training of the d-1 angle functions and inference.
 *
 * Angle theta_m is driven by sin(theta_m) = sigmoid(z_m(x)), where z_m is a
 * scaled SVM decision function over polynomial features. Step m fits, for
 * every class still in play, a one-vs-rest SVM that sends that class to -1,
 * keeps the candidate with the smallest hinge loss, assigns it to outcome
 * d-m and drops its samples. The class left over after d-1 steps owns
 * outcome 0. The outcome probabilities are
 *
 *   p_{d-m} = cos^2(theta_m) * prod_{k<m} sin^2(theta_k),   p_0 = prod_k sin^2(theta_k).
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quditnet/dataset.hpp"
#include "quditnet/linear_svm.hpp"
#include "quditnet/pca.hpp"
#include "quditnet/poly_features.hpp"

namespace quditnet {

enum class AssignmentMode { Optimized, Fixed };
enum class OrderingEval { Train, Holdout };

std::string_view to_string(AssignmentMode mode) noexcept;
AssignmentMode parse_assignment_mode(std::string_view text);
std::string_view to_string(OrderingEval mode) noexcept;
OrderingEval parse_ordering_eval(std::string_view text);

struct TrainerConfig {
  svm::SolverConfig solver;
  /// Multiplies the whole affine SVM output (weights and bias) so the
  /// sigmoid saturates.
  double scale = 100.0;
  AssignmentMode assignment = AssignmentMode::Optimized;
  /// Which samples score the candidates' hinge losses.
  OrderingEval ordering_eval = OrderingEval::Train;
  double holdout_fraction = 0.2;
  /// Candidate SVM fits of one step run on up to this many threads.
  std::size_t jobs = 1;

  void validate() const;
};

struct CandidateRecord {
  int class_index = 0;
  double hinge_loss = 0.0;
  bool converged = false;
  std::size_t epochs = 0;
};

struct StepRecord {
  std::size_t step = 0;     // m, 1-based
  std::size_t outcome = 0;  // d - m
  std::vector<CandidateRecord> candidates;
  int chosen_class = 0;
  std::size_t samples = 0;  // surviving samples at this step
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<StepRecord> steps;
  std::size_t svm_fits = 0;
  double seconds = 0.0;
};

/// Output of the sequential procedure on dense class indices.
struct FitResult {
  std::vector<std::vector<double>> theta_weights;  // d-1 rows, constant term first, already scaled
  std::vector<int> outcome_to_class;               // size d
  TrainReport report;
};

struct FitHooks {
  /// Called after each step, once the chosen class's samples are dropped.
  std::function<void(const StepRecord&)> on_step;
};

/// Runs the sequential procedure. `features` is n x feature_count with the
/// constant column first; `labels` are dense class indices in [0, d).
/// `rows` restricts training to a subset (empty = all rows).
FitResult fit(const Matrix& features, std::span<const int> labels, std::size_t d, const TrainerConfig& config,
              std::span<const std::size_t> rows = {}, const FitHooks& hooks = {});

struct ClassAssignment {
  /// outcome j -> original label.
  std::vector<int> outcome_to_label;
};

struct QuditClassifierModel {
  std::size_t d = 0;
  FeatureMap feature_map;
  data::PcaModel pca;
  std::optional<FeatureStandardizer> standardizer;
  std::vector<std::vector<double>> theta_weights;
  ClassAssignment assignment;
  double scale = 100.0;
  std::map<std::string, std::string> metadata;

  /// Original labels in ascending order; predict_proba uses this order.
  std::vector<int> labels() const;
  void validate() const;
};

struct SinCos2 {
  double sin = 0.0;
  double cos2 = 0.0;
};

/// sin(theta) = sigmoid(z) and cos^2(theta) = sigmoid(-z) (1 + sigmoid(z)),
/// both free of cancellation and overflow for any finite z.
SinCos2 angle_terms(double z) noexcept;

/// Outcome probabilities from the per-angle terms (index = outcome).
std::vector<double> outcome_probabilities(std::span<const SinCos2> terms);

/// z_m for one raw input (before the sigmoid).
std::vector<double> theta_activations(const QuditClassifierModel& model, std::span<const double> x);
std::vector<SinCos2> predict_thetas(const QuditClassifierModel& model, std::span<const double> x);
/// Probabilities indexed by outcome.
std::vector<double> predict_outcome_proba(const QuditClassifierModel& model, std::span<const double> x);
/// Probabilities in the order of model.labels().
std::vector<double> predict_proba(const QuditClassifierModel& model, std::span<const double> x);
/// Label of the most probable outcome; ties go to the lower outcome.
int predict(const QuditClassifierModel& model, std::span<const double> x);

/// Batch versions over raw input rows.
std::vector<std::vector<double>> predict_outcome_proba(const QuditClassifierModel& model, const Matrix& X);
std::vector<int> predict(const QuditClassifierModel& model, const Matrix& X);

/// Everything needed to turn raw inputs into a trained model.
struct TrainingSpec {
  std::size_t components = 10;
  std::size_t degree = 1;
  FeatureVariant variant = FeatureVariant::Multivariable;
  bool standardize_features = false;
  TrainerConfig trainer;
};

struct TrainedClassifier {
  QuditClassifierModel model;
  TrainReport report;
};

/// PCA on the selected rows, polynomial expansion, sequential fit. Only
/// rows listed in `rows` (all when empty) are ever read.
TrainedClassifier train_classifier(const data::Dataset& dataset, const TrainingSpec& spec,
                                   std::span<const std::size_t> rows = {}, const FitHooks& hooks = {});

/// Same, reusing a PCA already fitted on the same rows (it is truncated to
/// spec.components).
TrainedClassifier train_classifier(const data::Dataset& dataset, const TrainingSpec& spec,
                                   const data::PcaModel& pca, std::span<const std::size_t> rows = {},
                                   const FitHooks& hooks = {});

}  // namespace quditnet
