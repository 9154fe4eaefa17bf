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

#include "quditnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "quditnet/error.hpp"

namespace quditnet::data {

Dataset make_dataset(Matrix features, std::span<const int> raw_labels) {
  if (static_cast<std::size_t>(features.rows()) != raw_labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "feature rows and labels differ in count");
  }
  Dataset out;
  out.label_names.assign(raw_labels.begin(), raw_labels.end());
  std::sort(out.label_names.begin(), out.label_names.end());
  out.label_names.erase(std::unique(out.label_names.begin(), out.label_names.end()), out.label_names.end());
  out.y.reserve(raw_labels.size());
  for (int label : raw_labels) {
    const auto it = std::lower_bound(out.label_names.begin(), out.label_names.end(), label);
    out.y.push_back(static_cast<int>(it - out.label_names.begin()));
  }
  out.X = std::move(features);
  return out;
}

Dataset to_dataset(const RawImageSet& set) {
  const std::size_t n = set.image_count();
  const std::size_t dim = set.rows * set.cols;
  if (set.labels.size() != n) throw Error(ErrorCode::DimensionMismatch, "image and label counts differ");
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    double* row = X.row(static_cast<Eigen::Index>(i)).data();
    const std::uint8_t* px = set.pixels.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) row[j] = static_cast<double>(px[j]) / 255.0;
  }
  return make_dataset(std::move(X), set.labels);
}

RawImageSet concatenate(const RawImageSet& first, const RawImageSet& second) {
  if (first.rows != second.rows || first.cols != second.cols) {
    throw Error(ErrorCode::DimensionMismatch, "image geometries differ");
  }
  RawImageSet out = first;
  out.pixels.insert(out.pixels.end(), second.pixels.begin(), second.pixels.end());
  out.labels.insert(out.labels.end(), second.labels.begin(), second.labels.end());
  return out;
}

RawImageSet subsample(const RawImageSet& set, std::size_t max_samples, std::uint64_t seed) {
  const std::size_t n = set.image_count();
  if (max_samples == 0 || max_samples >= n) return set;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(max_samples);
  std::sort(order.begin(), order.end());

  const std::size_t dim = set.rows * set.cols;
  RawImageSet out;
  out.rows = set.rows;
  out.cols = set.cols;
  out.pixels.reserve(max_samples * dim);
  out.labels.reserve(max_samples);
  for (std::size_t i : order) {
    out.pixels.insert(out.pixels.end(), set.pixels.begin() + static_cast<std::ptrdiff_t>(i * dim),
                      set.pixels.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
    out.labels.push_back(set.labels[i]);
  }
  return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

std::vector<double> parse_csv_row(const std::string& line, std::size_t line_no) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) {
      throw Error(ErrorCode::CorruptFile, "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_csv_row(line, line_no));
    if (rows.back().size() != rows.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, path.string() + " line " + std::to_string(line_no) +
                                                    " has a different column count");
    }
  }
  if (rows.empty()) throw Error(ErrorCode::EmptySplit, path.string() + " has no rows");
  return rows;
}

}  // namespace

std::uint64_t fingerprint(const RawImageSet& set) {
  std::uint64_t h = kFnvOffset;
  const std::uint64_t geometry[2] = {set.rows, set.cols};
  fnv_mix(h, geometry, sizeof geometry);
  fnv_mix(h, set.pixels.data(), set.pixels.size());
  for (int label : set.labels) fnv_mix(h, &label, sizeof label);
  return h;
}

std::uint64_t fingerprint(const Dataset& set) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, set.X.data(), static_cast<std::size_t>(set.X.size()) * sizeof(double));
  for (int c : set.y) fnv_mix(h, &set.label_names[static_cast<std::size_t>(c)], sizeof(int));
  return h;
}

Dataset load_labeled_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.front().size() < 2) throw Error(ErrorCode::DimensionMismatch, "labeled CSV needs a label and a feature");
  Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size() - 1));
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double label = rows[i][0];
    if (label != std::floor(label)) throw Error(ErrorCode::CorruptFile, "labels must be integers");
    labels.push_back(static_cast<int>(label));
    for (std::size_t j = 1; j < rows[i].size(); ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = rows[i][j];
    }
  }
  return make_dataset(std::move(X), labels);
}

Matrix load_csv_matrix(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return X;
}

void write_labeled_csv(const std::filesystem::path& path, const Matrix& X, std::span<const int> labels) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "rows and labels differ in count");
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < X.cols(); ++j) out << ',' << X(i, j);
    out << '\n';
  }
}

namespace {

std::optional<std::filesystem::path> find_file(const std::vector<std::filesystem::path>& dirs,
                                               const std::vector<std::string>& stems) {
  for (const auto& dir : dirs) {
    for (const auto& stem : stems) {
      for (const char* suffix : {"", ".gz"}) {
        const auto candidate = dir / (stem + suffix);
        if (std::filesystem::is_regular_file(candidate)) return candidate;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<DatasetFiles> locate_dataset(const std::string& name, const std::filesystem::path& cache_dir) {
  const std::vector<std::filesystem::path> dirs = {cache_dir / name, cache_dir};
  std::vector<std::string> train_images, train_labels, test_images, test_labels;
  if (name == "mnist") {
    train_images = {"train-images-idx3-ubyte", "train-images.idx3-ubyte"};
    train_labels = {"train-labels-idx1-ubyte", "train-labels.idx1-ubyte"};
    test_images = {"t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte"};
    test_labels = {"t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte"};
  } else if (name.rfind("emnist-", 0) == 0) {
    train_images = {name + "-train-images-idx3-ubyte"};
    train_labels = {name + "-train-labels-idx1-ubyte"};
    test_images = {name + "-test-images-idx3-ubyte"};
    test_labels = {name + "-test-labels-idx1-ubyte"};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown dataset name '" + name + "'");
  }
  auto a = find_file(dirs, train_images);
  auto b = find_file(dirs, train_labels);
  auto c = find_file(dirs, test_images);
  auto d = find_file(dirs, test_labels);
  if (!a || !b || !c || !d) return std::nullopt;
  return DatasetFiles{*a, *b, *c, *d};
}

RawImageSet load_named_dataset(const std::string& name, const std::filesystem::path& cache_dir, bool pool_test) {
  const auto files = locate_dataset(name, cache_dir);
  if (!files) {
    throw Error(ErrorCode::Io, "dataset '" + name + "' not found under " + cache_dir.string());
  }
  RawImageSet set = load_image_set(files->train_images, files->train_labels);
  if (pool_test) set = concatenate(set, load_image_set(files->test_images, files->test_labels));
  return set;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("QUDITNET_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return "data";
}

}  // namespace quditnet::data
