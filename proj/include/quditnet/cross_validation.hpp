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
 * Stratified K-fold sweeps over (components, neurons).
 *
 * PCA is fit on each training split at the largest requested k and
 * truncated for the smaller ones, so the test split never reaches pca_fit
 * or the trainer.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quditnet/dataset.hpp"
#include "quditnet/trainer.hpp"

namespace quditnet {

struct CvSpec {
  std::string dataset_name = "dataset";
  std::vector<std::size_t> components{10};
  std::vector<std::size_t> neurons{2};
  FeatureVariant variant = FeatureVariant::Multivariable;
  bool standardize_features = false;
  TrainerConfig trainer;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// When set, each fold's model is written here.
  std::filesystem::path model_dir;
};

struct FoldRecord {
  std::string dataset;
  std::size_t components = 0;
  std::size_t neurons = 0;
  std::size_t fold = 0;
  double accuracy = 0.0;
  double seconds = 0.0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::size_t svm_fits = 0;
  std::size_t unconverged_fits = 0;
};

struct CvSummaryRow {
  std::size_t components = 0;
  std::size_t neurons = 0;
  std::size_t weights = 0;  // feature count per angle
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_seconds = 0.0;
  double total_seconds = 0.0;
};

struct CvResult {
  std::vector<FoldRecord> folds;  // ordered by (components, neurons, fold)
  std::vector<CvSummaryRow> summary;
};

using CvProgress = std::function<void(const FoldRecord&)>;

CvResult run_cv(const data::Dataset& dataset, const CvSpec& spec, const CvProgress& progress = {});

/// Accuracy in percent as "90.36 (0.22)".
std::string format_accuracy(double mean, double stddev);

/// One console/table row: "L & weights & acc (std) & seconds".
std::string format_paper_row(const CvSummaryRow& row);

std::string metrics_csv(const CvResult& result, bool include_timing = true);

std::string summary_json(const CvResult& result, const std::map<std::string, std::string>& metadata,
                         bool include_timing = true);

std::string fold_model_name(const std::string& dataset, std::size_t k, std::size_t L, std::size_t fold);

}  // namespace quditnet
