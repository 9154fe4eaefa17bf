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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "quditnet/poly_features.hpp"

namespace quditnet::data {

/// Leading eigenvectors of the sample covariance, one per row of
/// `components`, ordered by decreasing eigenvalue. Each row's
/// largest-magnitude entry is positive.
struct PcaModel {
  Eigen::VectorXd mean;
  Matrix components;  // k x input_dim
  std::vector<double> eigenvalues;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
  std::size_t k() const noexcept { return static_cast<std::size_t>(components.rows()); }

  /// The first `k` components of this model.
  PcaModel truncated(std::size_t k) const;
};

/// Fits on the selected rows (all rows when `rows` is empty). Throws
/// RankDeficient when fewer than k eigenvalues are positive.
PcaModel pca_fit(const Matrix& X, std::size_t k, std::span<const std::size_t> rows = {});

/// (X - mean) * components^T for the selected rows.
Matrix pca_transform(const PcaModel& model, const Matrix& X, std::span<const std::size_t> rows = {});
void pca_transform_row(const PcaModel& model, std::span<const double> x, std::span<double> out);

Matrix pca_inverse_transform(const PcaModel& model, const Matrix& scores);

}  // namespace quditnet::data
