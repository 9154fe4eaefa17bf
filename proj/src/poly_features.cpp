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

#include "quditnet/poly_features.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "quditnet/error.hpp"

namespace quditnet {

std::string_view to_string(FeatureVariant variant) noexcept {
  return variant == FeatureVariant::Multivariable ? "multivariable" : "univariate_powers";
}

FeatureVariant parse_feature_variant(std::string_view text) {
  if (text == "multivariable") return FeatureVariant::Multivariable;
  if (text == "univariate_powers") return FeatureVariant::UnivariatePowers;
  throw Error(ErrorCode::InvalidArgument, "unknown feature variant '" + std::string(text) + "'");
}

namespace {

void check_map(const FeatureMap& map) {
  if (map.inputs < 1 || map.degree < 1) {
    throw Error(ErrorCode::InvalidArgument, "feature map needs p >= 1 and L >= 1");
  }
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::Overflow, "feature count overflows size_t");
  return out;
}

std::size_t checked_add(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::Overflow, "feature count overflows size_t");
  return out;
}

}  // namespace

std::size_t feature_count(const FeatureMap& map) {
  check_map(map);
  if (map.variant == FeatureVariant::UnivariatePowers) {
    return checked_add(1, checked_mul(map.degree, map.inputs));
  }
  // C(p+i, i) = C(p+i-1, i-1) * (p+i) / i, with the common factor removed
  // first so intermediate products stay as small as the result allows.
  std::size_t result = 1;
  for (std::size_t i = 1; i <= map.degree; ++i) {
    const std::size_t top = checked_add(map.inputs, i);
    const std::size_t g = std::gcd(result, i);
    result = checked_mul(result / g, top / (i / g));
  }
  return result;
}

std::vector<MonomialIndex> enumerate_monomials(const FeatureMap& map) {
  const std::size_t total = feature_count(map);
  std::vector<MonomialIndex> out;
  out.reserve(total);
  out.push_back({});

  const auto p = static_cast<std::uint32_t>(map.inputs);
  if (map.variant == FeatureVariant::UnivariatePowers) {
    for (std::size_t deg = 1; deg <= map.degree; ++deg) {
      for (std::uint32_t j = 0; j < p; ++j) out.push_back({std::vector<std::uint32_t>(deg, j)});
    }
    return out;
  }

  for (std::size_t deg = 1; deg <= map.degree; ++deg) {
    // Odometer over non-decreasing sequences of length deg.
    std::vector<std::uint32_t> current(deg, 0);
    while (true) {
      out.push_back({current});
      std::size_t pos = deg;
      while (pos > 0 && current[pos - 1] == p - 1) --pos;
      if (pos == 0) break;
      const std::uint32_t next = current[pos - 1] + 1;
      for (std::size_t k = pos - 1; k < deg; ++k) current[k] = next;
    }
  }
  return out;
}

FeatureExpander::FeatureExpander(const FeatureMap& map) : map_(map) {
  const std::vector<MonomialIndex> monomials = enumerate_monomials(map);
  if (monomials.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::Overflow, "too many monomials for the expansion plan");
  }
  parent_.resize(monomials.size(), 0);
  variable_.resize(monomials.size(), 0);

  // Graded order guarantees a parent precedes its children, so one pass
  // with a lookup from the previous degree's monomials is enough.
  std::vector<std::size_t> degree_start(map.degree + 2, monomials.size());
  for (std::size_t i = monomials.size(); i-- > 0;) degree_start[monomials[i].degree()] = i;

  for (std::size_t i = 1; i < monomials.size(); ++i) {
    const auto& factors = monomials[i].factors;
    const std::size_t deg = factors.size();
    MonomialIndex parent{std::vector<std::uint32_t>(factors.begin(), factors.end() - 1)};
    // Monomials of one degree are sorted, so a binary search finds the parent.
    auto first = monomials.begin() + static_cast<std::ptrdiff_t>(degree_start[deg - 1]);
    auto last = monomials.begin() + static_cast<std::ptrdiff_t>(degree_start[deg]);
    auto it = std::lower_bound(first, last, parent, [](const MonomialIndex& a, const MonomialIndex& b) {
      return a.factors < b.factors;
    });
    parent_[i] = static_cast<std::uint32_t>(it - monomials.begin());
    variable_[i] = factors.back();
  }
}

void FeatureExpander::expand_into(std::span<const double> x, std::span<double> out) const {
  if (x.size() != map_.inputs) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " entries, feature map expects " +
                                                  std::to_string(map_.inputs));
  }
  if (out.size() != size()) throw Error(ErrorCode::DimensionMismatch, "output span has the wrong size");
  out[0] = 1.0;
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[parent_[i]] * x[variable_[i]];
  for (double v : out) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "feature expansion produced a non-finite value");
  }
}

std::vector<double> FeatureExpander::expand(std::span<const double> x) const {
  std::vector<double> out(size());
  expand_into(x, out);
  return out;
}

Matrix FeatureExpander::expand_rows(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != map_.inputs) {
    throw Error(ErrorCode::DimensionMismatch, "input matrix has the wrong column count");
  }
  Matrix out(x.rows(), static_cast<Eigen::Index>(size()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    expand_into(std::span<const double>(x.row(r).data(), map_.inputs),
                std::span<double>(out.row(r).data(), size()));
  }
  return out;
}

std::vector<double> expand(const FeatureMap& map, std::span<const double> x) {
  return FeatureExpander(map).expand(x);
}

FeatureStandardizer FeatureStandardizer::fit(const Matrix& features) {
  const auto n = features.rows();
  const auto m = features.cols();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "standardization needs at least two rows");
  FeatureStandardizer out;
  out.mean.assign(static_cast<std::size_t>(m), 0.0);
  out.scale.assign(static_cast<std::size_t>(m), 1.0);
  for (Eigen::Index j = 1; j < m; ++j) {
    const double mu = features.col(j).mean();
    const double var = (features.col(j).array() - mu).square().sum() / static_cast<double>(n - 1);
    out.mean[static_cast<std::size_t>(j)] = mu;
    out.scale[static_cast<std::size_t>(j)] = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return out;
}

void FeatureStandardizer::apply(std::span<double> row) const {
  if (row.size() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "standardizer width mismatch");
  for (std::size_t j = 1; j < row.size(); ++j) row[j] = (row[j] - mean[j]) * scale[j];
}

void FeatureStandardizer::apply(Matrix& features) const {
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    apply(std::span<double>(features.row(r).data(), static_cast<std::size_t>(features.cols())));
  }
}

}  // namespace quditnet
