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
 * Soft-margin linear SVM with an unregularized intercept.
 *
 * Minimizes 1/2 ||w||^2 + sum_i C_i loss(1 - y_i (w . x_i + b)) where loss is
 * the hinge max(0, t) or, as an ablation, the squared hinge. Column 0 of the
 * feature matrix is the constant monomial; it is routed to b instead of w.
 *
 * The solver is dual coordinate descent with a random permutation per epoch.
 * Because the intercept is not penalized, the dual carries the coupling
 * constraint sum_i alpha_i y_i = 0. It is handled with proximal steps on b:
 * each stage solves the problem with an extra (b - center)^2 / (2 B^2)
 * penalty (a plain box-constrained dual, B being the bias feature value),
 * then recenters on the new b. The stages stop once the penalty is
 * negligible against the objective, which is the unpenalized optimum.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "quditnet/poly_features.hpp"

namespace quditnet::svm {

enum class Loss { Hinge, SquaredHinge };

std::string_view to_string(Loss loss) noexcept;
Loss parse_loss(std::string_view text);

struct SolverConfig {
  double C = 1.0;
  /// Relative duality-gap target for each stage, and the relative size the
  /// proximal bias penalty must shrink to before the solver stops.
  double tolerance = 1e-4;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
  Loss loss = Loss::Hinge;
  /// Multipliers on C for the +1 and -1 classes; 1/1 means no re-weighting.
  double positive_weight = 1.0;
  double negative_weight = 1.0;

  void validate() const;
};

/// Labels in {-1, +1} over a (possibly row-subsetted) feature matrix. The
/// matrix is borrowed and must outlive the problem.
class SvmProblem {
 public:
  /// `rows` selects the samples used; empty means every row. labels[k] is
  /// the label of the k-th selected row.
  SvmProblem(const Matrix& features, std::vector<std::int8_t> labels, SolverConfig config = {},
             std::vector<std::size_t> rows = {});

  const Matrix& features() const noexcept { return *features_; }
  std::span<const std::int8_t> labels() const noexcept { return labels_; }
  const SolverConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t row(std::size_t k) const noexcept { return rows_.empty() ? k : rows_[k]; }
  std::span<const std::size_t> rows() const noexcept { return rows_; }

 private:
  const Matrix* features_;
  std::vector<std::int8_t> labels_;
  SolverConfig config_;
  std::vector<std::size_t> rows_;
};

struct SvmSolution {
  std::vector<double> w;  // one weight per non-constant column
  double b = 0.0;

  friend bool operator==(const SvmSolution&, const SvmSolution&) = default;
};

struct EpochRecord {
  std::size_t stage = 0;
  /// Dual objective of the current stage in minimization form; coordinate
  /// descent never increases it within a stage.
  double dual_objective = 0.0;
  double duality_gap = 0.0;
};

struct SvmFit {
  SvmSolution solution;
  bool converged = false;
  std::size_t epochs = 0;
  std::size_t stages = 0;
  double objective = 0.0;  // primal objective of `solution`
  std::vector<EpochRecord> trace;
};

SvmFit train(const SvmProblem& problem);

/// yhat_i = w . x_i[1:] + b for every row (or the selected rows).
std::vector<double> decision_values(const SvmSolution& solution, const Matrix& features);
std::vector<double> decision_values(const SvmSolution& solution, const Matrix& features,
                                    std::span<const std::size_t> rows);

/// sum_i max(0, 1 - y_i yhat_i), accumulated in index order.
double hinge_loss(std::span<const double> labels, std::span<const double> decisions);
double hinge_loss(std::span<const std::int8_t> labels, std::span<const double> decisions);

/// The primal objective the solver minimizes, evaluated at `solution`.
double primal_objective(const SvmProblem& problem, const SvmSolution& solution);

}  // namespace quditnet::svm
