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

#include <filesystem>
#include <json.hpp>

#include "fixtures.hpp"
#include "quditnet/cross_validation.hpp"
#include "quditnet/error.hpp"
#include "quditnet/model_io.hpp"
#include "quditnet/run_config.hpp"
#include "quditnet/verify.hpp"

using namespace quditnet;

TEST_CASE("verify battery passes and detects a perturbed denominator") {
  const verify::VerifyReport ok = verify::run_verify();
  CHECK(ok.all_passed());
  CHECK(ok.checks.size() == 7);

  verify::VerifyOptions bad;
  bad.denominator_offset = 1e-6;
  const verify::VerifyReport broken = verify::run_verify(bad);
  CHECK_FALSE(broken.all_passed());
  CHECK(broken.first_failure() == "cayley_equivalence");
}

TEST_CASE("run config round-trips losslessly") {
  RunConfig c;
  c.dataset = "emnist-digits";
  c.components = {10, 20, 30};
  c.neurons = {1, 3};
  c.variant = FeatureVariant::UnivariatePowers;
  c.C = 0.1 + 0.2;  // not exactly representable in short decimal
  c.tolerance = 3e-5;
  c.scale = 123.456789012345678;
  c.assignment = AssignmentMode::Fixed;
  c.ordering_eval = OrderingEval::Holdout;
  c.loss = svm::Loss::SquaredHinge;
  c.seed = 18446744073709551615ull;
  c.max_samples = 50000;
  c.save_fold_models = true;
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(back == c);
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("run config rejects unknown keys and bad ranges") {
  CHECK_THROWS_AS(config_from_json(R"({"compnents": [10]})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"folds": 1})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"C": -1})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"variant": "cubic"})"), Error);
  CHECK_THROWS_AS(config_from_json("{"), Error);
}

TEST_CASE("cross-validation on blobs") {
  const data::Dataset ds = testing::gaussian_blobs(
      {{0, 0, 0, 0}, {5, 0, 0, 1}, {0, 5, 1, 0}, {3, 3, 3, 3}}, 30, 0.5, 77);
  CvSpec spec;
  spec.dataset_name = "blobs";
  spec.components = {2, 3};
  spec.neurons = {1, 2};
  spec.folds = 3;
  spec.seed = 4;
  const CvResult a = run_cv(ds, spec);
  CHECK(a.folds.size() == 12);
  REQUIRE(a.summary.size() == 4);
  CHECK(a.summary[0].weights == 3);
  CHECK(a.summary[3].weights == 10);
  for (const auto& row : a.summary) CHECK(row.mean_accuracy > 0.9);
  CHECK(a.folds[0].train_samples + a.folds[0].test_samples == 120);

  spec.jobs = 3;
  const CvResult b = run_cv(ds, spec);
  CHECK(metrics_csv(a, false) == metrics_csv(b, false));

  const std::string csv = metrics_csv(a);
  CHECK(csv.rfind("dataset,components,neurons,fold,accuracy,seconds\n", 0) == 0);
  const auto summary = nlohmann::json::parse(summary_json(a, {{"dataset", "blobs"}}));
  CHECK(summary["summary"].size() == 4);
  CHECK(summary["metadata"]["dataset"] == "blobs");
}

TEST_CASE("fold models are written and reload") {
  const data::Dataset ds = testing::gaussian_blobs({{0, 0, 0}, {5, 0, 1}, {0, 5, 2}}, 20, 0.4, 78);
  CvSpec spec;
  spec.dataset_name = "blobs";
  spec.components = {2};
  spec.neurons = {2};
  spec.folds = 2;
  spec.model_dir = std::filesystem::temp_directory_path() / "quditnet_cv_models";
  std::filesystem::remove_all(spec.model_dir);
  run_cv(ds, spec);
  const auto path = spec.model_dir / fold_model_name("blobs", 2, 2, 1);
  REQUIRE(std::filesystem::exists(path));
  const QuditClassifierModel m = load_model(path);
  CHECK(m.metadata.at("fold") == "1");
  std::filesystem::remove_all(spec.model_dir);
}

TEST_CASE("table formatting") {
  CvSummaryRow row;
  row.components = 10;
  row.neurons = 2;
  row.weights = 66;
  row.mean_accuracy = 0.90364;
  row.std_accuracy = 0.0022;
  row.total_seconds = 12.345;
  CHECK(format_accuracy(row.mean_accuracy, row.std_accuracy) == "90.36 (0.22)");
  CHECK(format_paper_row(row) == "2 & 66 & 90.36 (0.22) & 12.35");
}
