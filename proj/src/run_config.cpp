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

#include "quditnet/run_config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "quditnet/dataset.hpp"
#include "quditnet/error.hpp"

namespace quditnet {

using nlohmann::json;

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (dataset.empty() && train_images.empty() && train_csv.empty()) fail("no dataset configured");
  if (train_images.empty() != train_labels.empty()) fail("train_images and train_labels go together");
  if (components.empty() || neurons.empty()) fail("components and neurons need at least one value");
  for (std::size_t k : components) {
    if (k < 1) fail("components must be >= 1");
  }
  for (std::size_t L : neurons) {
    if (L < 1) fail("neurons must be >= 1");
  }
  if (folds < 2) fail("folds must be >= 2");
  if (jobs < 1) fail("jobs must be >= 1");
  trainer_config().validate();
}

TrainerConfig RunConfig::trainer_config() const {
  TrainerConfig t;
  t.solver.C = C;
  t.solver.tolerance = tolerance;
  t.solver.max_epochs = max_epochs;
  t.solver.seed = seed;
  t.solver.loss = loss;
  t.scale = scale;
  t.assignment = assignment;
  t.ordering_eval = ordering_eval;
  t.holdout_fraction = holdout_fraction;
  t.jobs = 1;
  return t;
}

TrainingSpec RunConfig::training_spec(std::size_t k, std::size_t L) const {
  TrainingSpec s;
  s.components = k;
  s.degree = L;
  s.variant = variant;
  s.standardize_features = standardize_features;
  s.trainer = trainer_config();
  return s;
}

std::filesystem::path RunConfig::resolved_data_dir() const {
  return data_dir.empty() ? data::default_cache_dir() : std::filesystem::path(data_dir);
}

LoadedData load_run_dataset(const RunConfig& config) {
  LoadedData out;
  if (!config.train_csv.empty()) {
    data::Dataset full = data::load_labeled_csv(config.train_csv);
    out.source = config.train_csv;
    out.available_samples = full.size();
    if (config.max_samples > 0 && config.max_samples < full.size()) {
      throw Error(ErrorCode::InvalidArgument, "max_samples applies to IDX datasets only");
    }
    out.dataset = std::move(full);
  } else {
    data::RawImageSet raw;
    if (!config.train_images.empty()) {
      raw = data::load_image_set(config.train_images, config.train_labels);
      out.source = config.train_images;
    } else {
      raw = data::load_named_dataset(config.dataset, config.resolved_data_dir(), config.pool_test);
      out.source = config.dataset;
    }
    out.available_samples = raw.image_count();
    out.dataset = data::to_dataset(data::subsample(raw, config.max_samples, config.seed));
  }
  out.fingerprint = data::fingerprint(out.dataset);
  return out;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["dataset"] = c.dataset;
  j["data_dir"] = c.data_dir;
  j["train_images"] = c.train_images;
  j["train_labels"] = c.train_labels;
  j["train_csv"] = c.train_csv;
  j["pool_test"] = c.pool_test;
  j["max_samples"] = c.max_samples;
  j["components"] = c.components;
  j["neurons"] = c.neurons;
  j["variant"] = std::string(to_string(c.variant));
  j["standardize_features"] = c.standardize_features;
  j["C"] = c.C;
  j["tolerance"] = c.tolerance;
  j["max_epochs"] = c.max_epochs;
  j["loss"] = std::string(svm::to_string(c.loss));
  j["scale"] = c.scale;
  j["assignment"] = std::string(to_string(c.assignment));
  j["ordering_eval"] = std::string(to_string(c.ordering_eval));
  j["holdout_fraction"] = c.holdout_fraction;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["output_dir"] = c.output_dir;
  j["model"] = c.model;
  j["save_fold_models"] = c.save_fold_models;
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::CorruptFile, "config must be a JSON object");

  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "dataset") c.dataset = v.get<std::string>();
      else if (key == "data_dir") c.data_dir = v.get<std::string>();
      else if (key == "train_images") c.train_images = v.get<std::string>();
      else if (key == "train_labels") c.train_labels = v.get<std::string>();
      else if (key == "train_csv") c.train_csv = v.get<std::string>();
      else if (key == "pool_test") c.pool_test = v.get<bool>();
      else if (key == "max_samples") c.max_samples = v.get<std::size_t>();
      else if (key == "components") c.components = v.get<std::vector<std::size_t>>();
      else if (key == "neurons") c.neurons = v.get<std::vector<std::size_t>>();
      else if (key == "variant") c.variant = parse_feature_variant(v.get<std::string>());
      else if (key == "standardize_features") c.standardize_features = v.get<bool>();
      else if (key == "C") c.C = v.get<double>();
      else if (key == "tolerance") c.tolerance = v.get<double>();
      else if (key == "max_epochs") c.max_epochs = v.get<std::size_t>();
      else if (key == "loss") c.loss = svm::parse_loss(v.get<std::string>());
      else if (key == "scale") c.scale = v.get<double>();
      else if (key == "assignment") c.assignment = parse_assignment_mode(v.get<std::string>());
      else if (key == "ordering_eval") c.ordering_eval = parse_ordering_eval(v.get<std::string>());
      else if (key == "holdout_fraction") c.holdout_fraction = v.get<double>();
      else if (key == "folds") c.folds = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "jobs") c.jobs = v.get<std::size_t>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "model") c.model = v.get<std::string>();
      else if (key == "save_fold_models") c.save_fold_models = v.get<bool>();
      else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write config " + path.string());
  out << config_to_json(config);
}

}  // namespace quditnet
