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

// quditnet command-line tool.

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "quditnet/cross_validation.hpp"
#include "quditnet/dataset.hpp"
#include "quditnet/error.hpp"
#include "quditnet/idx.hpp"
#include "quditnet/metrics.hpp"
#include "quditnet/model_io.hpp"
#include "quditnet/qubit_sim.hpp"
#include "quditnet/run_config.hpp"
#include "quditnet/verify.hpp"

namespace fs = std::filesystem;
using namespace quditnet;

namespace {

// Flag values parsed from the command line; only flags that were given
// override the config file.
struct ConfigFlags {
  std::string config_path;
  RunConfig values;
  std::string variant, loss, assignment, ordering_eval;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <typename T>
  void add(CLI::App* app, const std::string& name, T& slot, T RunConfig::*field, const std::string& help) {
    std::string names = "--" + name;
    std::string dashed = name;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != name) names += ",--" + dashed;
    CLI::Option* opt = app->add_option(names, slot, help);
    setters.emplace_back(opt, [&slot, field](RunConfig& c) { c.*field = slot; });
  }

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run config; flags override its fields");
    RunConfig& v = values;
    add(app, "dataset", v.dataset, &RunConfig::dataset, "Named dataset: mnist or emnist-<split>");
    add(app, "data_dir", v.data_dir, &RunConfig::data_dir, "Dataset cache directory (default $QUDITNET_DATA_DIR)");
    add(app, "train_images", v.train_images, &RunConfig::train_images, "IDX image file (overrides --dataset)");
    add(app, "train_labels", v.train_labels, &RunConfig::train_labels, "IDX label file");
    add(app, "train_csv", v.train_csv, &RunConfig::train_csv, "Labeled CSV, label in the first column");
    add(app, "pool_test", v.pool_test, &RunConfig::pool_test, "Pool the official test split into the data");
    add(app, "max_samples", v.max_samples, &RunConfig::max_samples, "Random subsample cap (0: none)");
    add(app, "components", v.components, &RunConfig::components, "PCA components k (list for sweeps)");
    add(app, "neurons", v.neurons, &RunConfig::neurons, "Polynomial degree L (list for sweeps)");
    auto* var = app->add_option("--variant", variant, "multivariable or univariate_powers");
    setters.emplace_back(var, [this](RunConfig& c) { c.variant = parse_feature_variant(variant); });
    add(app, "standardize_features", v.standardize_features, &RunConfig::standardize_features,
        "Standardize expanded features before the SVM");
    add(app, "C", v.C, &RunConfig::C, "SVM regularization C");
    add(app, "tolerance", v.tolerance, &RunConfig::tolerance, "SVM relative duality-gap tolerance");
    add(app, "max_epochs", v.max_epochs, &RunConfig::max_epochs, "SVM epoch cap");
    auto* lo = app->add_option("--loss", loss, "hinge or squared_hinge");
    setters.emplace_back(lo, [this](RunConfig& c) { c.loss = svm::parse_loss(loss); });
    add(app, "scale", v.scale, &RunConfig::scale, "Scale applied to the SVM affine output");
    auto* as = app->add_option("--assignment", assignment, "optimized or fixed");
    setters.emplace_back(as, [this](RunConfig& c) { c.assignment = parse_assignment_mode(assignment); });
    auto* oe = app->add_option("--ordering_eval,--ordering-eval", ordering_eval, "train or holdout");
    setters.emplace_back(oe, [this](RunConfig& c) { c.ordering_eval = parse_ordering_eval(ordering_eval); });
    add(app, "holdout_fraction", v.holdout_fraction, &RunConfig::holdout_fraction, "Holdout share for ordering");
    add(app, "folds", v.folds, &RunConfig::folds, "Cross-validation folds K");
    add(app, "seed", v.seed, &RunConfig::seed, "Random seed");
    add(app, "jobs", v.jobs, &RunConfig::jobs, "Worker threads");
    add(app, "output_dir", v.output_dir, &RunConfig::output_dir, "Output directory");
    add(app, "model", v.model, &RunConfig::model, "Model file");
    add(app, "save_fold_models", v.save_fold_models, &RunConfig::save_fold_models, "Write one model per fold");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
    c.validate();
    return c;
  }
};

std::string dataset_label(const RunConfig& c) {
  std::string name = !c.train_csv.empty()      ? fs::path(c.train_csv).stem().string()
                     : !c.train_images.empty() ? fs::path(c.train_images).stem().string()
                                               : c.dataset;
  for (char& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return name;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::map<std::string, std::string> run_metadata(const RunConfig& c, const LoadedData& loaded) {
  return {{"dataset", dataset_label(c)},
          {"source", loaded.source},
          {"samples", std::to_string(loaded.dataset.size())},
          {"available_samples", std::to_string(loaded.available_samples)},
          {"max_samples", std::to_string(c.max_samples)},
          {"pool_test", c.pool_test ? "true" : "false"},
          {"dataset_fingerprint", std::to_string(loaded.fingerprint)},
          {"classes", std::to_string(loaded.dataset.classes())},
          {"folds", std::to_string(c.folds)},
          {"seed", std::to_string(c.seed)},
          {"pca_fit", "per_training_fold"},
          {"config", config_to_json(c)}};
}

int cmd_prepare(const ConfigFlags& flags, const std::string& save_config_path) {
  const RunConfig c = flags.resolve();
  const LoadedData loaded = load_run_dataset(c);
  nlohmann::json j{{"dataset", dataset_label(c)},
                   {"source", loaded.source},
                   {"samples", loaded.dataset.size()},
                   {"available_samples", loaded.available_samples},
                   {"dimension", loaded.dataset.dimension()},
                   {"labels", loaded.dataset.label_names},
                   {"fingerprint", std::to_string(loaded.fingerprint)}};
  std::vector<std::size_t> counts(loaded.dataset.classes(), 0);
  for (int y : loaded.dataset.y) ++counts[static_cast<std::size_t>(y)];
  j["class_counts"] = counts;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  write_text(fs::path(c.output_dir) / "dataset.json", text);
  if (!save_config_path.empty()) save_config(c, save_config_path);
  return 0;
}

int cmd_train(const ConfigFlags& flags) {
  const RunConfig c = flags.resolve();
  const LoadedData loaded = load_run_dataset(c);
  const TrainingSpec spec = c.training_spec(c.components.front(), c.neurons.front());
  FitHooks hooks;
  hooks.on_step = [](const StepRecord& s) {
    std::fprintf(stderr, "step %zu: class index %d -> outcome %zu (%zu samples, %.2fs)\n", s.step, s.chosen_class,
                 s.outcome, s.samples, s.seconds);
  };
  TrainedClassifier trained = train_classifier(loaded.dataset, spec, {}, hooks);
  trained.model.metadata["dataset"] = dataset_label(c);
  trained.model.metadata["max_samples"] = std::to_string(c.max_samples);

  const fs::path model_path = c.model.empty() ? fs::path(c.output_dir) / "model.json" : fs::path(c.model);
  if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
  save_model(trained.model, model_path);

  const std::vector<int> predicted = predict(trained.model, loaded.dataset.X);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    correct += predicted[i] == loaded.dataset.label_names[static_cast<std::size_t>(loaded.dataset.y[i])];
  }
  std::printf("model %s\nsvm_fits %zu\ntraining_accuracy %.17g\n", model_path.string().c_str(),
              trained.report.svm_fits, static_cast<double>(correct) / static_cast<double>(predicted.size()));
  return 0;
}

bool is_idx_path(const fs::path& p) {
  const std::string s = p.filename().string();
  return s.find("idx3") != std::string::npos;
}

int cmd_predict(const std::string& model_path, const std::string& input, const std::string& output, bool proba,
                bool labeled) {
  const QuditClassifierModel model = load_model(model_path);
  Matrix X;
  std::vector<int> truth;
  if (is_idx_path(input)) {
    const data::IdxArray arr = data::parse_idx(data::read_file(input), data::IdxKind::Images);
    const std::size_t dim = arr.dims.size() > 1 ? arr.values.size() / arr.dims[0] : 0;
    X.resize(static_cast<Eigen::Index>(arr.dims[0]), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < arr.values.size(); ++i) X.data()[i] = arr.values[i] / 255.0;
  } else if (labeled) {
    const data::Dataset ds = data::load_labeled_csv(input);
    X = ds.X;
    for (int y : ds.y) truth.push_back(ds.label_names[static_cast<std::size_t>(y)]);
  } else {
    X = data::load_csv_matrix(input);
  }

  std::ostringstream out;
  const std::vector<int> labels = model.labels();
  out << "label";
  if (proba) {
    for (int l : labels) out << ",p_" << l;
  }
  out << "\n";
  const std::vector<int> predicted = predict(model, X);
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    out << predicted[static_cast<std::size_t>(r)];
    if (proba) {
      const std::vector<double> p = predict_proba(model, std::span<const double>(X.row(r).data(), X.cols()));
      for (double v : p) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        out << buf;
      }
    }
    out << "\n";
  }
  if (output.empty() || output == "-") {
    std::cout << out.str();
  } else {
    write_text(output, out.str());
  }
  if (!truth.empty()) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i];
    std::fprintf(stderr, "accuracy %.17g\n", static_cast<double>(correct) / static_cast<double>(truth.size()));
  }
  return 0;
}

int cmd_cv(const ConfigFlags& flags) {
  const RunConfig c = flags.resolve();
  const LoadedData loaded = load_run_dataset(c);
  CvSpec spec;
  spec.dataset_name = dataset_label(c);
  spec.components = c.components;
  spec.neurons = c.neurons;
  spec.variant = c.variant;
  spec.standardize_features = c.standardize_features;
  spec.trainer = c.trainer_config();
  spec.folds = c.folds;
  spec.seed = c.seed;
  spec.jobs = c.jobs;
  const fs::path out_dir = c.output_dir;
  if (c.save_fold_models) spec.model_dir = out_dir / "models";

  std::fprintf(stderr, "%s: %zu samples, %zu classes, %zu folds\n", spec.dataset_name.c_str(), loaded.dataset.size(),
               loaded.dataset.classes(), c.folds);
  const CvResult result = run_cv(loaded.dataset, spec, [](const FoldRecord& r) {
    std::fprintf(stderr, "k=%zu L=%zu fold %zu: accuracy %.4f (%.1fs, %zu unconverged of %zu fits)\n", r.components,
                 r.neurons, r.fold, r.accuracy, r.seconds, r.unconverged_fits, r.svm_fits);
  });

  write_text(out_dir / "metrics.csv", metrics_csv(result));
  write_text(out_dir / "summary.json", summary_json(result, run_metadata(c, loaded)));

  std::printf("%-10s %-4s %-4s %-8s %-16s %s\n", "dataset", "k", "L", "weights", "accuracy (std)", "time (s)");
  for (const auto& row : result.summary) {
    std::printf("%-10s %-4zu %-4zu %-8zu %-16s %.2f\n", spec.dataset_name.c_str(), row.components, row.neurons,
                row.weights, format_accuracy(row.mean_accuracy, row.std_accuracy).c_str(), row.total_seconds);
  }
  return 0;
}

int cmd_verify(double fault, std::uint64_t seed) {
  verify::VerifyOptions opt;
  opt.denominator_offset = fault;
  opt.seed = seed;
  const verify::VerifyReport report = verify::run_verify(opt);
  std::cout << verify::format_report(report);
  if (!report.all_passed()) {
    std::fprintf(stderr, "verify failed: %s\n", report.first_failure().c_str());
    return 1;
  }
  return 0;
}

int cmd_simulate(std::vector<double> theta, std::size_t d, std::uint64_t seed, const std::string& output) {
  if (theta.empty()) {
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "give --theta values or --d >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.01, std::numbers::pi - 0.01);
    theta.resize(d - 1);
    for (double& t : theta) t = angle(rng);
  }
  const qudit::ThetaVector tv(theta);
  const qubit::QubitCircuit circuit = qubit::compile(tv);
  const qubit::Statevector sv = qubit::simulate(circuit);
  const std::size_t dim = tv.dimension();
  const auto dist = qubit::measurement_distribution(sv, dim);
  const auto probs = qudit::outcome_probabilities(tv).probs;
  const auto gates = qubit::gate_count_report(circuit);

  std::printf("%-6s %-*s %-22s %-22s\n", "entry", static_cast<int>(std::max<std::size_t>(dim - 1, 9)), "bits",
              "circuit", "closed form");
  double max_diff = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t index = j == 0 ? 0 : std::size_t{1} << (j - 1);
    std::printf("%-6zu %-*s %-22.17g %-22.17g\n", j, static_cast<int>(std::max<std::size_t>(dim - 1, 9)),
                qubit::outcome_bits(index, dim).c_str(), dist.entries[j], probs[j]);
    max_diff = std::max(max_diff, std::abs(dist.entries[j] - probs[j]));
  }
  std::printf("invalid mass %.3g\nmax difference %.3g\ncontrol arity sum %zu\nelementary gate estimate %zu\n",
              dist.invalid, max_diff, gates.total_controls, gates.elementary_estimate);
  if (!output.empty()) write_text(output, qubit::circuit_to_json(circuit));
  return 0;
}

int cmd_report(const std::vector<std::string>& files) {
  for (const auto& f : files) {
    const std::vector<std::uint8_t> bytes = data::read_file(f);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptFile, f + ": " + e.what());
    }
    if (j.contains("summary")) {
      const std::string name = j["metadata"].value("dataset", std::string("?"));
      std::printf("%s (%s samples, %s folds)\n", name.c_str(), j["metadata"].value("samples", std::string("?")).c_str(),
                  j["metadata"].value("folds", std::string("?")).c_str());
      std::printf("  %-4s %s\n", "k", "L & weights & accuracy (std) & time (s)");
      for (const auto& row : j["summary"]) {
        std::printf("  %-4zu %s\n", row["components"].get<std::size_t>(), row["table_row"].get<std::string>().c_str());
      }
    } else if (j.contains("schema_version")) {
      const QuditClassifierModel m = deserialize_model(j.dump());
      std::printf("%s: d=%zu p=%zu L=%zu variant=%s weights=%zu scale=%g\n", f.c_str(), m.d, m.feature_map.inputs,
                  m.feature_map.degree, std::string(to_string(m.feature_map.variant)).c_str(),
                  feature_count(m.feature_map), m.scale);
      std::printf("  outcome -> label:");
      for (std::size_t o = 0; o < m.d; ++o) std::printf(" %zu->%d", o, m.assignment.outcome_to_label[o]);
      std::printf("\n");
      for (const auto& [k, v] : m.metadata) std::printf("  %s = %s\n", k.c_str(), v.c_str());
    } else {
      throw Error(ErrorCode::CorruptFile, f + ": neither a cv summary nor a model file");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qudit neural network classifier"};
  app.require_subcommand(1);

  ConfigFlags prepare_flags, train_flags, cv_flags;
  std::string save_config_path;
  auto* prepare = app.add_subcommand("prepare", "Load a dataset and report its shape and fingerprint");
  prepare_flags.attach(prepare);
  prepare->add_option("--save_config,--save-config", save_config_path, "Write the resolved config here");

  auto* train = app.add_subcommand("train", "Train one model on the whole dataset");
  train_flags.attach(train);

  std::string model_path, input, output;
  bool proba = false;
  bool labeled = false;
  auto* predict_cmd = app.add_subcommand("predict", "Predict labels for CSV or IDX rows");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--input", input, "CSV (one row per sample) or IDX image file")->required();
  predict_cmd->add_option("--output", output, "Output CSV (default stdout)");
  predict_cmd->add_flag("--proba", proba, "Append per-class probabilities");
  predict_cmd->add_flag("--labeled", labeled, "CSV input carries the label in its first column");

  auto* cv = app.add_subcommand("cv", "Stratified K-fold cross-validation sweep");
  cv_flags.attach(cv);

  double fault = 0.0;
  std::uint64_t verify_seed = verify::VerifyOptions{}.seed;
  auto* verify_cmd = app.add_subcommand("verify", "Run the mathematical self-checks");
  verify_cmd->add_option("--seed", verify_seed, "Random seed for sampled angles");
  verify_cmd->add_option("--inject-fault", fault, "Offset added to the skew-matrix denominator")->group("");

  std::vector<double> theta;
  std::size_t sim_d = 0;
  std::uint64_t sim_seed = 0;
  std::string circuit_out;
  auto* sim = app.add_subcommand("simulate-circuit", "Simulate the qubit circuit for one angle vector");
  sim->add_option("--theta", theta, "Angles theta_1..theta_{d-1}");
  sim->add_option("--d", sim_d, "Dimension for random angles");
  sim->add_option("--seed", sim_seed, "Seed for random angles");
  sim->add_option("--output", circuit_out, "Write the circuit as JSON");

  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "Summarize cv summaries or model files");
  report->add_option("files", report_files, "summary.json or model files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prepare) return cmd_prepare(prepare_flags, save_config_path);
    if (*train) return cmd_train(train_flags);
    if (*predict_cmd) return cmd_predict(model_path, input, output, proba, labeled);
    if (*cv) return cmd_cv(cv_flags);
    if (*verify_cmd) return cmd_verify(fault, verify_seed);
    if (*sim) return cmd_simulate(theta, sim_d, sim_seed, circuit_out);
    if (*report) return cmd_report(report_files);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
