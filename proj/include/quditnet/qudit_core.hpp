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
 * Closed-form evaluation of the single-qudit neuron U(theta)|0>.
 *
 * The neuron is an orthogonal d x d matrix U = (A - I)(A + I)^{-1} obtained
 * by a Cayley transform of a skew-symmetric matrix A whose only non-zero
 * entries sit in the first row and column. Applied to |0> it produces a
 * real state whose amplitudes are products of sines and one cosine of the
 * d-1 angles, so the probabilities never require the matrix itself. The
 * matrix route is kept here as an independent check of the closed form.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quditnet::qudit {

/// |s_1 - 1| at or below this value makes the skew-matrix entries blow up.
inline constexpr double kDegeneracyThreshold = 1e-9;

/// The d-1 angles theta_1..theta_{d-1}; `angles()[k - 1]` is theta_k.
class ThetaVector {
 public:
  explicit ThetaVector(std::vector<double> angles);

  std::size_t dimension() const noexcept { return angles_.size() + 1; }
  std::span<const double> angles() const noexcept { return angles_; }

 private:
  std::vector<double> angles_;
};

/// Auxiliary sine products and cosines. Indices follow the 1-based math:
/// c(l) for 0 <= l <= d-1 and s(l) for 1 <= l <= d.
class AuxProducts {
 public:
  AuxProducts(std::vector<double> c, std::vector<double> s);

  std::size_t dimension() const noexcept { return c_.size(); }
  double c(std::size_t l) const { return c_.at(l); }
  double s(std::size_t l) const { return s_.at(l - 1); }

 private:
  std::vector<double> c_;  // c_0 .. c_{d-1}
  std::vector<double> s_;  // s_1 .. s_d
};

struct QuditState {
  std::vector<double> amplitudes;
};

struct OutcomeProbabilities {
  std::vector<double> probs;
};

AuxProducts compute_aux(const ThetaVector& theta);

/// Sum over l of s_l^2 c_{l-1}^2; equals one for every theta.
double normalization_sum(const AuxProducts& aux);

/// Amplitudes s_{l+1} c_l of U|0>. Total: defined for every angle vector.
QuditState output_state_closed_form(const ThetaVector& theta);

/// probs[j] = amplitudes[j]^2, so probs[d-1] = cos^2 theta_1 and
/// probs[0] = prod sin^2 theta_k.
OutcomeProbabilities outcome_probabilities(const ThetaVector& theta);

/// First row A_{1l} = s_l c_{l-1} / (s_1 - 1), first column its negation.
///
/// `denominator_offset` is added to s_1 - 1 and exists only so the
/// self-check battery can prove it catches a corrupted formula.
Eigen::MatrixXd build_skew_matrix(const ThetaVector& theta,
                                  double denominator_offset = 0.0);

/// U = (A - I)(A + I)^{-1}, evaluated as a linear solve.
Eigen::MatrixXd cayley_unitary(const Eigen::MatrixXd& skew);

/// Closed-form first column of (A + I)^{-1}.
std::vector<double> b_column_closed_form(const ThetaVector& theta);

/// First column of (A + I)^{-1} from a dense LU solve of (A + I) x = e_1.
std::vector<double> b_column_dense(const Eigen::MatrixXd& skew);

/// max_ij |(U^T U - I)_ij|
double orthogonality_defect(const Eigen::MatrixXd& u);

}  // namespace quditnet::qudit
