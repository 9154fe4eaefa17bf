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

// Synthetic datasets shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "quditnet/dataset.hpp"
#include "quditnet/poly_features.hpp"

namespace quditnet::testing {

/// `per_class` points around each center with isotropic noise `sigma`.
/// Labels are 0..centers-1 in blocks of per_class rows.
inline data::Dataset gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_class,
                                    double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t dim = centers.front().size();
  Matrix X(static_cast<Eigen::Index>(centers.size() * per_class), static_cast<Eigen::Index>(dim));
  std::vector<int> labels;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const auto r = static_cast<Eigen::Index>(labels.size());
      for (std::size_t j = 0; j < dim; ++j) X(r, static_cast<Eigen::Index>(j)) = centers[c][j] + noise(rng);
      labels.push_back(static_cast<int>(c));
    }
  }
  return data::make_dataset(std::move(X), labels);
}

/// `count` centers on a circle of the given radius, in 2-D.
inline std::vector<std::vector<double>> circle_centers(std::size_t count, double radius) {
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < count; ++c) {
    const double a = 2.0 * 3.14159265358979323846 * static_cast<double>(c) / static_cast<double>(count);
    out.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return out;
}

/// Nearest-centroid labels, the oracle for well separated blobs.
inline std::vector<int> nearest_centroid(const Matrix& X, const std::vector<std::vector<double>>& centers) {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d = 0.0;
      for (std::size_t j = 0; j < centers[c].size(); ++j) {
        const double diff = X(r, static_cast<Eigen::Index>(j)) - centers[c][j];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.push_back(static_cast<int>(best));
  }
  return out;
}

}  // namespace quditnet::testing
