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

#include "quditnet/qudit_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "quditnet/error.hpp"

namespace quditnet::qudit {

ThetaVector::ThetaVector(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a qudit needs d >= 2, i.e. at least one angle");
  }
  for (double a : angles_) {
    if (!std::isfinite(a)) throw Error(ErrorCode::NonFinite, "theta contains a non-finite angle");
  }
}

AuxProducts::AuxProducts(std::vector<double> c, std::vector<double> s)
    : c_(std::move(c)), s_(std::move(s)) {
  if (c_.size() != s_.size() || c_.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "c and s must both have d >= 2 entries");
  }
}

AuxProducts compute_aux(const ThetaVector& theta) {
  const std::size_t d = theta.dimension();
  const auto angles = theta.angles();

  // prefix[j] = sin(theta_1) * ... * sin(theta_j); s_l = prefix[d - l].
  std::vector<double> prefix(d, 1.0);
  for (std::size_t j = 1; j < d; ++j) prefix[j] = prefix[j - 1] * std::sin(angles[j - 1]);

  std::vector<double> c(d);
  std::vector<double> s(d);
  c[0] = 1.0;
  for (std::size_t l = 1; l < d; ++l) c[l] = std::cos(angles[d - l - 1]);
  for (std::size_t l = 1; l <= d; ++l) s[l - 1] = prefix[d - l];
  return AuxProducts(std::move(c), std::move(s));
}

double normalization_sum(const AuxProducts& aux) {
  double total = 0.0;
  for (std::size_t l = 1; l <= aux.dimension(); ++l) {
    const double term = aux.s(l) * aux.c(l - 1);
    total += term * term;
  }
  return total;
}

QuditState output_state_closed_form(const ThetaVector& theta) {
  const AuxProducts aux = compute_aux(theta);
  QuditState state;
  state.amplitudes.resize(aux.dimension());
  for (std::size_t l = 0; l < aux.dimension(); ++l) {
    state.amplitudes[l] = aux.s(l + 1) * aux.c(l);
  }
  return state;
}

OutcomeProbabilities outcome_probabilities(const ThetaVector& theta) {
  const QuditState state = output_state_closed_form(theta);
  OutcomeProbabilities out;
  out.probs.reserve(state.amplitudes.size());
  for (double a : state.amplitudes) out.probs.push_back(a * a);
  return out;
}

namespace {

void require_non_degenerate(const AuxProducts& aux) {
  if (std::abs(aux.s(1) - 1.0) <= kDegeneracyThreshold) {
    throw Error(ErrorCode::DegenerateParameter,
                "s_1 is within 1e-9 of 1 (all angles near pi/2); use the closed form");
  }
}

}  // namespace

Eigen::MatrixXd build_skew_matrix(const ThetaVector& theta, double denominator_offset) {
  const AuxProducts aux = compute_aux(theta);
  require_non_degenerate(aux);
  const auto d = static_cast<Eigen::Index>(aux.dimension());
  const double denominator = aux.s(1) - 1.0 + denominator_offset;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index l = 2; l <= d; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const double entry = aux.s(ul) * aux.c(ul - 1) / denominator;
    a(0, l - 1) = entry;
    a(l - 1, 0) = -entry;
  }
  return a;
}

Eigen::MatrixXd cayley_unitary(const Eigen::MatrixXd& skew) {
  if (skew.rows() != skew.cols() || skew.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Cayley transform needs a non-empty square matrix");
  }
  const auto d = skew.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd plus = skew + identity;

  // (A - I) and (A + I)^{-1} commute, so U = (A + I)^{-1} (A - I).
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(plus);
  if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::SingularSolve, "A + I is numerically singular");
  }
  Eigen::MatrixXd u = lu.solve(skew - identity);
  if (!u.allFinite()) throw Error(ErrorCode::SingularSolve, "linear solve produced non-finite values");
  return u;
}

std::vector<double> b_column_closed_form(const ThetaVector& theta) {
  const AuxProducts aux = compute_aux(theta);
  require_non_degenerate(aux);
  const std::size_t d = aux.dimension();
  std::vector<double> column(d);
  column[0] = (1.0 - aux.s(1)) / 2.0;
  for (std::size_t l = 2; l <= d; ++l) column[l - 1] = -aux.s(l) * aux.c(l - 1) / 2.0;
  return column;
}

std::vector<double> b_column_dense(const Eigen::MatrixXd& skew) {
  if (skew.rows() != skew.cols() || skew.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "expected a non-empty square matrix");
  }
  const auto d = skew.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(skew + Eigen::MatrixXd::Identity(d, d));
  if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::SingularSolve, "A + I is numerically singular");
  }
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Unit(d, 0));
  return {x.data(), x.data() + x.size()};
}

double orthogonality_defect(const Eigen::MatrixXd& u) {
  const Eigen::MatrixXd gram = u.transpose() * u;
  return (gram - Eigen::MatrixXd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace quditnet::qudit
