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

#include "quditnet/model_io.hpp"

#include <json.hpp>

#include "quditnet/error.hpp"
#include "quditnet/idx.hpp"

namespace quditnet {

using nlohmann::json;

namespace {

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).data(), m.row(r).data() + m.cols()));
  }
  return rows;
}

}  // namespace

std::string serialize_model(const QuditClassifierModel& model) {
  model.validate();
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["d"] = model.d;
  j["scale"] = model.scale;
  j["feature_map"] = {{"p", model.feature_map.inputs},
                      {"L", model.feature_map.degree},
                      {"variant", std::string(to_string(model.feature_map.variant))}};
  j["pca"] = {{"input_dim", model.pca.input_dim()},
              {"mean", std::vector<double>(model.pca.mean.data(), model.pca.mean.data() + model.pca.mean.size())},
              {"components", matrix_rows(model.pca.components)},
              {"eigenvalues", model.pca.eigenvalues}};
  j["thetas"] = model.theta_weights;
  j["assignment"] = {{"outcome_to_label", model.assignment.outcome_to_label}};
  j["metadata"] = model.metadata;
  if (model.standardizer) {
    j["feature_standardization"] = {{"mean", model.standardizer->mean}, {"scale", model.standardizer->scale}};
  }
  return j.dump() + "\n";
}

QuditClassifierModel deserialize_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("model is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw Error(ErrorCode::CorruptFile, "model has no schema_version");
  }
  const int version = j["schema_version"].get<int>();
  if (version != kModelSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch, "model schema version " + std::to_string(version) +
                                                      ", expected " + std::to_string(kModelSchemaVersion));
  }

  QuditClassifierModel m;
  try {
    m.d = j.at("d").get<std::size_t>();
    m.scale = j.at("scale").get<double>();
    const json& fm = j.at("feature_map");
    m.feature_map.inputs = fm.at("p").get<std::size_t>();
    m.feature_map.degree = fm.at("L").get<std::size_t>();
    m.feature_map.variant = parse_feature_variant(fm.at("variant").get<std::string>());

    const json& pca = j.at("pca");
    const auto input_dim = pca.at("input_dim").get<std::size_t>();
    const auto mean = pca.at("mean").get<std::vector<double>>();
    const auto comps = pca.at("components").get<std::vector<std::vector<double>>>();
    if (mean.size() != input_dim) throw Error(ErrorCode::CorruptFile, "PCA mean length differs from input_dim");
    m.pca.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    m.pca.components.resize(static_cast<Eigen::Index>(comps.size()), static_cast<Eigen::Index>(input_dim));
    for (std::size_t r = 0; r < comps.size(); ++r) {
      if (comps[r].size() != input_dim) throw Error(ErrorCode::CorruptFile, "PCA component length differs");
      for (std::size_t c = 0; c < input_dim; ++c) {
        m.pca.components(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = comps[r][c];
      }
    }
    if (pca.contains("eigenvalues")) m.pca.eigenvalues = pca["eigenvalues"].get<std::vector<double>>();

    m.theta_weights = j.at("thetas").get<std::vector<std::vector<double>>>();
    m.assignment.outcome_to_label = j.at("assignment").at("outcome_to_label").get<std::vector<int>>();
    m.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    if (j.contains("feature_standardization")) {
      const json& fs = j["feature_standardization"];
      m.standardizer = FeatureStandardizer{fs.at("mean").get<std::vector<double>>(),
                                           fs.at("scale").get<std::vector<double>>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("malformed model field: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    throw Error(ErrorCode::CorruptFile, std::string("malformed model field: ") + e.what());
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptFile, std::string("inconsistent model: ") + e.what());
  }
  return m;
}

void save_model(const QuditClassifierModel& model, const std::filesystem::path& path) {
  const std::string text = serialize_model(model);
  data::write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

QuditClassifierModel load_model(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = data::read_file(path);
  return deserialize_model(std::string(bytes.begin(), bytes.end()));
}

}  // namespace quditnet
