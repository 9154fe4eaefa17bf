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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quditnet/idx.hpp"
#include "quditnet/poly_features.hpp"

namespace quditnet::data {

/// Feature rows with labels remapped densely onto 0..d-1.
/// `label_names[c]` is the original label of class c.
struct Dataset {
  Matrix X;
  std::vector<int> y;
  std::vector<int> label_names;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t classes() const noexcept { return label_names.size(); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

/// Sorts the distinct raw labels and maps them onto 0..d-1.
Dataset make_dataset(Matrix features, std::span<const int> raw_labels);

/// Pixels scaled to [0, 1] by dividing by 255.
Dataset to_dataset(const RawImageSet& set);

RawImageSet concatenate(const RawImageSet& first, const RawImageSet& second);

/// Keeps at most `max_samples` rows chosen by a seeded shuffle; the kept
/// rows stay in their original order.
RawImageSet subsample(const RawImageSet& set, std::size_t max_samples, std::uint64_t seed);

/// FNV-1a over geometry, pixels and labels.
std::uint64_t fingerprint(const RawImageSet& set);
/// FNV-1a over the raw bytes of X and the labels.
std::uint64_t fingerprint(const Dataset& set);

/// Rows "label,x1,...,xp" (no header). Labels are integers.
Dataset load_labeled_csv(const std::filesystem::path& path);
/// Rows "x1,...,xp" (no header).
Matrix load_csv_matrix(const std::filesystem::path& path);
void write_labeled_csv(const std::filesystem::path& path, const Matrix& X, std::span<const int> labels);

/// Known dataset names and the IDX files they are stored in.
struct DatasetFiles {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
};

/// Looks for `name` ("mnist", "emnist-digits", "emnist-letters", ...)
/// under `cache_dir` and `cache_dir/<name>`, accepting plain or .gz files.
std::optional<DatasetFiles> locate_dataset(const std::string& name, const std::filesystem::path& cache_dir);

/// Loads train (and, when `pool_test` is set, test) splits as one set.
RawImageSet load_named_dataset(const std::string& name, const std::filesystem::path& cache_dir,
                               bool pool_test = true);

/// $QUDITNET_DATA_DIR, or ./data when unset.
std::filesystem::path default_cache_dir();

}  // namespace quditnet::data
