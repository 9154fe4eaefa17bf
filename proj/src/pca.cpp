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

#include "quditnet/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "quditnet/error.hpp"

namespace quditnet::data {

PcaModel PcaModel::truncated(std::size_t count) const {
  if (count < 1 || count > k()) throw Error(ErrorCode::InvalidArgument, "cannot truncate PCA to that many components");
  PcaModel out;
  out.mean = mean;
  out.components = components.topRows(static_cast<Eigen::Index>(count));
  out.eigenvalues.assign(eigenvalues.begin(), eigenvalues.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

PcaModel pca_fit(const Matrix& X, std::size_t k, std::span<const std::size_t> rows) {
  const auto dim = X.cols();
  const std::size_t n = rows.empty() ? static_cast<std::size_t>(X.rows()) : rows.size();
  if (k < 1 || k > static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, " + std::to_string(dim) + "]");
  }
  if (n <= k) throw Error(ErrorCode::InvalidArgument, "PCA needs more samples than components");
  auto row_of = [&](std::size_t i) { return static_cast<Eigen::Index>(rows.empty() ? i : rows[i]); };

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < n; ++i) mean += X.row(row_of(i)).transpose();
  mean /= static_cast<double>(n);
  if (!mean.allFinite()) throw Error(ErrorCode::NonFinite, "PCA input contains non-finite values");

  // Accumulate the scatter matrix in row blocks so the centered copy stays
  // small even for tens of thousands of samples.
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(dim, dim);
  constexpr std::size_t kBlock = 2048;
  Eigen::MatrixXd block;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t len = std::min(kBlock, n - start);
    block.resize(static_cast<Eigen::Index>(len), dim);
    for (std::size_t t = 0; t < len; ++t) {
      block.row(static_cast<Eigen::Index>(t)) = X.row(row_of(start + t)) - mean.transpose();
    }
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }
  Eigen::MatrixXd cov = scatter.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::RankDeficient, "eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  // Relative to the data's own scale so that rounding noise from centering
  // identical rows does not count as variance.
  const double scale = (cov.trace() + mean.squaredNorm()) / static_cast<double>(dim);
  const double floor = 1e-12 * std::max(scale, 1e-300);
  std::size_t positive = 0;
  for (Eigen::Index j = 0; j < values.size(); ++j) positive += values[j] > floor ? 1 : 0;
  if (positive < k) {
    throw Error(ErrorCode::RankDeficient, "only " + std::to_string(positive) + " positive eigenvalues, need " +
                                              std::to_string(k));
  }

  PcaModel model;
  model.mean = mean;
  model.components.resize(static_cast<Eigen::Index>(k), dim);
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index src = dim - 1 - static_cast<Eigen::Index>(c);
    Eigen::VectorXd v = vectors.col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    model.components.row(static_cast<Eigen::Index>(c)) = v.transpose();
    model.eigenvalues.push_back(values[src]);
  }
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& X, std::span<const std::size_t> rows) {
  if (static_cast<std::size_t>(X.cols()) != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "PCA expects " + std::to_string(model.input_dim()) +
                                                  " columns, got " + std::to_string(X.cols()));
  }
  if (rows.empty()) return (X.rowwise() - model.mean.transpose()) * model.components.transpose();
  Matrix selected(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    selected.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i])) - model.mean.transpose();
  }
  return selected * model.components.transpose();
}

void pca_transform_row(const PcaModel& model, std::span<const double> x, std::span<double> out) {
  if (x.size() != model.input_dim() || out.size() != model.k()) {
    throw Error(ErrorCode::DimensionMismatch, "PCA row transform size mismatch");
  }
  for (std::size_t c = 0; c < model.k(); ++c) {
    const double* comp = model.components.row(static_cast<Eigen::Index>(c)).data();
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - model.mean[static_cast<Eigen::Index>(j)]) * comp[j];
    out[c] = s;
  }
}

Matrix pca_inverse_transform(const PcaModel& model, const Matrix& scores) {
  if (static_cast<std::size_t>(scores.cols()) != model.k()) {
    throw Error(ErrorCode::DimensionMismatch, "score width differs from k");
  }
  Matrix out = scores * model.components;
  out.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace quditnet::data
