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

#include <doctest.h>
#include <zlib.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "quditnet/dataset.hpp"
#include "quditnet/error.hpp"
#include "quditnet/idx.hpp"
#include "quditnet/kfold.hpp"
#include "quditnet/metrics.hpp"
#include "quditnet/pca.hpp"
#include "quditnet/trainer.hpp"

using namespace quditnet;
using namespace quditnet::data;

namespace {

std::vector<std::uint8_t> gzip_bytes(const std::vector<std::uint8_t>& in) {
  z_stream zs{};
  REQUIRE(deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY) == Z_OK);
  std::vector<std::uint8_t> out(compressBound(static_cast<uLong>(in.size())) + 64);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("idx images and labels") {
  const std::vector<std::uint8_t> images{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 1, 2, 3, 4, 5, 6, 7, 8};
  const RawImageSet set = parse_idx_images(images);
  CHECK(set.image_count() == 2);
  CHECK(set.rows == 2);
  CHECK(set.cols == 2);
  CHECK(set.pixels == std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8});

  const std::vector<std::uint8_t> labels{0, 0, 8, 1, 0, 0, 0, 3, 7, 0, 7};
  CHECK(parse_idx_labels(labels) == std::vector<int>{7, 0, 7});
}

TEST_CASE("idx error cases") {
  const std::vector<std::uint8_t> short_payload{0, 0, 8, 1, 0, 0, 0, 3, 7, 0};
  CHECK(code_of([&] { parse_idx_labels(short_payload); }) == ErrorCode::TruncatedPayload);
  const std::vector<std::uint8_t> bad_magic{0, 0, 8, 2, 0, 0, 0, 1, 7};
  CHECK(code_of([&] { parse_idx_labels(bad_magic); }) == ErrorCode::BadMagic);
  const std::vector<std::uint8_t> wrong_kind{0, 0, 8, 1, 0, 0, 0, 1, 7};
  CHECK(code_of([&] { parse_idx_images(wrong_kind); }) == ErrorCode::BadMagic);
  const std::vector<std::uint8_t> huge{0, 0, 8, 3, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff};
  CHECK(code_of([&] { parse_idx_images(huge); }) == ErrorCode::DimensionOverflow);
  const std::vector<std::uint8_t> header_only{0, 0, 8};
  CHECK(code_of([&] { parse_idx_labels(header_only); }) == ErrorCode::TruncatedPayload);
}

TEST_CASE("idx round-trip, plain and gzip") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> px(0, 255);
  RawImageSet set;
  set.rows = 5;
  set.cols = 3;
  for (int i = 0; i < 7 * 15; ++i) set.pixels.push_back(static_cast<std::uint8_t>(px(rng)));
  set.labels = {3, 1, 4, 1, 5, 9, 2};

  const auto img = write_idx_images(set);
  const auto lab = write_idx_labels(set.labels);
  const RawImageSet back = parse_idx_images(img);
  CHECK(back.pixels == set.pixels);
  CHECK(back.rows == 5);
  CHECK(back.cols == 3);
  CHECK(parse_idx_labels(lab) == set.labels);

  const auto gz = gzip_bytes(img);
  CHECK(is_gzip(gz));
  CHECK(parse_idx_images(gz).pixels == set.pixels);
  auto truncated = gz;
  truncated.resize(gz.size() / 2);
  CHECK(code_of([&] { parse_idx_images(truncated); }) == ErrorCode::TruncatedPayload);

  const auto dir = std::filesystem::temp_directory_path() / "quditnet_idx_test";
  std::filesystem::create_directories(dir);
  write_file(dir / "img.gz", gz);
  write_file(dir / "lab", lab);
  const RawImageSet loaded = load_image_set(dir / "img.gz", dir / "lab");
  CHECK(loaded.pixels == set.pixels);
  CHECK(loaded.labels == set.labels);
  std::filesystem::remove_all(dir);
}

TEST_CASE("pixels are scaled and labels made dense") {
  RawImageSet set;
  set.rows = 1;
  set.cols = 2;
  set.pixels = {0, 255, 51, 102, 255, 0};
  set.labels = {9, 3, 9};
  const Dataset ds = to_dataset(set);
  CHECK(ds.X(0, 1) == 1.0);
  CHECK(ds.X(1, 0) == doctest::Approx(0.2));
  CHECK(ds.label_names == std::vector<int>{3, 9});
  CHECK(ds.y == std::vector<int>{1, 0, 1});
}

TEST_CASE("letters-style labels map onto 0..n-1") {
  std::vector<int> raw;
  for (int i = 0; i < 52; ++i) raw.push_back(1 + i % 26);
  const Dataset ds = make_dataset(Matrix::Zero(52, 1), raw);
  CHECK(ds.classes() == 26);
  CHECK(*std::min_element(ds.y.begin(), ds.y.end()) == 0);
  CHECK(*std::max_element(ds.y.begin(), ds.y.end()) == 25);
  for (std::size_t i = 0; i < raw.size(); ++i) CHECK(ds.label_names[static_cast<std::size_t>(ds.y[i])] == raw[i]);
}

TEST_CASE("subsampling is seeded and keeps the order") {
  RawImageSet set;
  set.rows = 1;
  set.cols = 1;
  for (int i = 0; i < 100; ++i) {
    set.pixels.push_back(static_cast<std::uint8_t>(i));
    set.labels.push_back(i % 10);
  }
  const RawImageSet a = subsample(set, 30, 5);
  const RawImageSet b = subsample(set, 30, 5);
  CHECK(a.pixels == b.pixels);
  CHECK(a.image_count() == 30);
  CHECK(std::is_sorted(a.pixels.begin(), a.pixels.end()));
  CHECK(subsample(set, 0, 5).image_count() == 100);
}

TEST_CASE("pca of two points") {
  Matrix x(2, 2);
  x << 0, 0, 2, 2;
  const PcaModel m = pca_fit(x, 1);
  CHECK(m.mean(0) == doctest::Approx(1.0));
  CHECK(m.mean(1) == doctest::Approx(1.0));
  CHECK(m.components(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(m.components(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  const Matrix s = pca_transform(m, x);
  CHECK(s(0, 0) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(s(1, 0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pca properties on random data") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::Index n = 200, dim = 12;
  Matrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = g(rng) * static_cast<double>(j + 1) + 0.1 * static_cast<double>(j);
  }
  const PcaModel full = pca_fit(x, static_cast<std::size_t>(dim));
  const Eigen::MatrixXd gram = full.components * full.components.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-8);
  for (std::size_t i = 1; i < full.eigenvalues.size(); ++i) CHECK(full.eigenvalues[i] <= full.eigenvalues[i - 1]);
  for (Eigen::Index r = 0; r < dim; ++r) {
    Eigen::Index arg = 0;
    full.components.row(r).cwiseAbs().maxCoeff(&arg);
    CHECK(full.components(r, arg) > 0.0);
  }
  const Matrix back = pca_inverse_transform(full, pca_transform(full, x));
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-8);

  // The mean row maps to zero and component rows map to unit vectors.
  Matrix mean_row = full.mean.transpose();
  CHECK(pca_transform(full, mean_row).cwiseAbs().maxCoeff() < 1e-12);
  Matrix shifted = full.components;
  shifted.rowwise() += full.mean.transpose();
  CHECK((pca_transform(full, shifted) - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);

  // Eigen-free check: the first component maximizes variance among unit
  // vectors along the coordinate axes and random directions.
  const PcaModel top = pca_fit(x, 1);
  const double top_var = (pca_transform(top, x).col(0)).squaredNorm();
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v(j) = g(rng);
    v.normalize();
    const Eigen::VectorXd centered_proj = (x.rowwise() - full.mean.transpose()) * v;
    CHECK(centered_proj.squaredNorm() <= top_var * (1 + 1e-12));
  }

  const PcaModel three = full.truncated(3);
  const PcaModel direct = pca_fit(x, 3);
  CHECK((three.components - direct.components).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pca errors") {
  Matrix same(5, 3);
  same.setConstant(0.5);
  CHECK(code_of([&] { pca_fit(same, 1); }) == ErrorCode::RankDeficient);
  Matrix x(4, 3);
  x.setRandom();
  const PcaModel m = pca_fit(x, 2);
  Matrix wrong(2, 4);
  wrong.setZero();
  CHECK(code_of([&] { pca_transform(m, wrong); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("stratified folds") {
  std::vector<int> y;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 10; ++i) y.push_back(c);
  }
  const FoldPlan plan = stratified_kfold(y, 5, 3);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = plan.test_indices(f);
    CHECK(test.size() == 6);
    std::map<int, int> per_class;
    for (auto i : test) ++per_class[y[i]];
    for (int c = 0; c < 3; ++c) CHECK(per_class[c] == 2);
    const auto train = plan.train_indices(f);
    CHECK(train.size() == 24);
    for (auto i : train) CHECK(plan.assignments[i] != f);
  }
  CHECK(stratified_kfold(y, 5, 3).assignments == plan.assignments);
  CHECK(stratified_kfold(y, 5, 4).assignments != plan.assignments);
  CHECK(code_of([&] { stratified_kfold(y, 11, 3); }) == ErrorCode::ClassTooSmall);
  CHECK(code_of([&] { stratified_kfold(y, 1, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("uneven classes differ by at most one per fold") {
  std::vector<int> y;
  const int sizes[] = {23, 17, 31, 10};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < sizes[c]; ++i) y.push_back(c);
  }
  std::shuffle(y.begin(), y.end(), std::mt19937_64(4));
  const FoldPlan plan = stratified_kfold(y, 7, 1);
  std::vector<std::vector<int>> counts(4, std::vector<int>(7, 0));
  std::vector<int> fold_size(7, 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++counts[static_cast<std::size_t>(y[i])][plan.assignments[i]];
    ++fold_size[plan.assignments[i]];
  }
  for (const auto& c : counts) CHECK(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()) <= 1);
  CHECK(*std::max_element(fold_size.begin(), fold_size.end()) - *std::min_element(fold_size.begin(), fold_size.end()) <= 1);
}

TEST_CASE("metrics") {
  const std::vector<int> truth{0, 1, 2, 3, 0, 1, 2, 3};
  const std::vector<int> constant(8, 2);
  const auto m = score_predictions(truth, constant, 4);
  CHECK(m.accuracy == 0.25);
  CHECK(m.confusion[0][2] == 2);
  const auto perfect = score_predictions(truth, truth, 4);
  CHECK(perfect.accuracy == 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) CHECK(perfect.confusion[i][j] == (i == j ? 2u : 0u));
  }
  const auto absent = score_predictions(std::vector<int>{0, 0}, std::vector<int>{0, 1}, 3);
  CHECK(std::isnan(absent.per_class_accuracy[2]));
  CHECK(code_of([] { score_predictions({}, {}, 2); }) == ErrorCode::EmptySplit);

  const std::vector<double> acc{0.9, 1.0};
  const MeanStd ms = mean_std(acc);
  CHECK(ms.mean == doctest::Approx(0.95));
  CHECK(ms.stddev == doctest::Approx(0.0707107).epsilon(1e-6));
}

TEST_CASE("test rows never reach pca or the trainer") {
  Dataset ds = testing::gaussian_blobs({{0, 0, 0}, {4, 0, 1}, {0, 4, 2}}, 30, 0.5, 9);
  const FoldPlan plan = stratified_kfold(ds.y, 5, 0);
  const auto train = plan.train_indices(0);
  const auto test = plan.test_indices(0);
  const PcaModel clean_pca = pca_fit(ds.X, 2, train);
  TrainingSpec spec;
  spec.components = 2;
  spec.degree = 2;
  const TrainedClassifier clean = train_classifier(ds, spec, train);

  // Sentinel rows: NaN would propagate into any fit that read them.
  for (auto i : test) ds.X.row(static_cast<Eigen::Index>(i)).setConstant(NAN);
  const PcaModel sentinel_pca = pca_fit(ds.X, 2, train);
  CHECK(sentinel_pca.components == clean_pca.components);
  CHECK(sentinel_pca.mean == clean_pca.mean);
  const TrainedClassifier sentinel = train_classifier(ds, spec, train);
  CHECK(sentinel.model.theta_weights == clean.model.theta_weights);
}

TEST_CASE("csv datasets") {
  const auto path = std::filesystem::temp_directory_path() / "quditnet_csv_test.csv";
  Matrix x(3, 2);
  x << 0.5, -1, 2, 3.25, 1e-3, 7;
  write_labeled_csv(path, x, std::vector<int>{4, 2, 4});
  const Dataset ds = load_labeled_csv(path);
  CHECK(ds.X == x);
  CHECK(ds.label_names == std::vector<int>{2, 4});
  std::filesystem::remove(path);
}

TEST_CASE("dataset discovery") {
  const auto dir = std::filesystem::temp_directory_path() / "quditnet_locate_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "mnist");
  CHECK_FALSE(locate_dataset("mnist", dir).has_value());
  for (const char* f : {"train-images-idx3-ubyte.gz", "train-labels-idx1-ubyte.gz", "t10k-images-idx3-ubyte.gz",
                        "t10k-labels-idx1-ubyte.gz"}) {
    write_file(dir / "mnist" / f, std::vector<std::uint8_t>{0});
  }
  const auto found = locate_dataset("mnist", dir);
  REQUIRE(found.has_value());
  CHECK(found->train_images.filename() == "train-images-idx3-ubyte.gz");
  std::filesystem::remove_all(dir);
}
