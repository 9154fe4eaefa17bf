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
 * Polynomial feature maps feeding the angle functions.
 *
 * The multivariable map lists every monomial of total degree <= L in p
 * variables (C(L+p, p) terms, constant included). The univariate-powers map
 * keeps only per-coordinate powers: [1, x, x∘x, ..., x^∘L].
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace quditnet {

/// Row-major dense matrix; rows are samples.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class FeatureVariant { Multivariable, UnivariatePowers };

std::string_view to_string(FeatureVariant variant) noexcept;
FeatureVariant parse_feature_variant(std::string_view text);

struct FeatureMap {
  std::size_t inputs = 1;  // p
  std::size_t degree = 1;  // L
  FeatureVariant variant = FeatureVariant::Multivariable;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

/// Variable indices of one monomial, non-decreasing; empty means the constant.
struct MonomialIndex {
  std::vector<std::uint32_t> factors;

  std::size_t degree() const noexcept { return factors.size(); }
  friend bool operator==(const MonomialIndex&, const MonomialIndex&) = default;
};

/// Exact term count; throws Overflow when it does not fit in size_t.
std::size_t feature_count(const FeatureMap& map);

/// Graded (degree ascending) then lexicographic; constant term first.
std::vector<MonomialIndex> enumerate_monomials(const FeatureMap& map);

/// Precomputed evaluation plan: every monomial is its parent (the same
/// monomial without its last factor) times one variable.
class FeatureExpander {
 public:
  explicit FeatureExpander(const FeatureMap& map);

  const FeatureMap& map() const noexcept { return map_; }
  std::size_t size() const noexcept { return parent_.size(); }

  void expand_into(std::span<const double> x, std::span<double> out) const;
  std::vector<double> expand(std::span<const double> x) const;
  /// Expands each row of `x` (n x p) into an n x size() matrix.
  Matrix expand_rows(const Matrix& x) const;

 private:
  FeatureMap map_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> variable_;
};

std::vector<double> expand(const FeatureMap& map, std::span<const double> x);

/// Optional per-column z-scoring of expanded features. Column 0 (the
/// constant) is left untouched.
struct FeatureStandardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureStandardizer fit(const Matrix& features);
  void apply(Matrix& features) const;
  void apply(std::span<double> row) const;
};

}  // namespace quditnet
