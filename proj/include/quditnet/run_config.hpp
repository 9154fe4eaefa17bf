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
 * Run configuration shared by the command-line tools.
 *
 * A config is one JSON object whose keys are the field names below. Every
 * field can also be set by a command-line flag of the same name.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quditnet/trainer.hpp"

namespace quditnet {

struct RunConfig {
  std::string dataset = "mnist";
  std::string data_dir;  // empty: $QUDITNET_DATA_DIR, else ./data
  std::string train_images;  // explicit IDX files override `dataset`
  std::string train_labels;
  std::string train_csv;  // labeled CSV (label first), overrides both
  bool pool_test = true;
  std::size_t max_samples = 0;  // 0: no cap

  std::vector<std::size_t> components{10};
  std::vector<std::size_t> neurons{2};
  FeatureVariant variant = FeatureVariant::Multivariable;
  bool standardize_features = false;

  double C = 1.0;
  double tolerance = 1e-4;
  std::size_t max_epochs = 1000;
  svm::Loss loss = svm::Loss::Hinge;
  double scale = 100.0;
  AssignmentMode assignment = AssignmentMode::Optimized;
  OrderingEval ordering_eval = OrderingEval::Train;
  double holdout_fraction = 0.2;

  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  std::string output_dir = "out";
  std::string model;  // model file for train / predict
  bool save_fold_models = false;

  void validate() const;

  TrainerConfig trainer_config() const;
  /// Training spec for one sweep point.
  TrainingSpec training_spec(std::size_t k, std::size_t L) const;

  std::filesystem::path resolved_data_dir() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct LoadedData {
  data::Dataset dataset;
  std::string source;
  std::size_t available_samples = 0;  // before the max_samples cap
  std::uint64_t fingerprint = 0;
};

/// Loads the configured dataset and applies max_samples.
LoadedData load_run_dataset(const RunConfig& config);

std::string config_to_json(const RunConfig& config);
/// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace quditnet
