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

// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "quditnet/cross_validation.hpp"
#include "quditnet/dataset.hpp"
#include "quditnet/linear_svm.hpp"
#include "quditnet/poly_features.hpp"
#include "quditnet/run_config.hpp"
#include "quditnet/trainer.hpp"
#include "svm_oracle.hpp"

namespace fs = std::filesystem;
using namespace quditnet;

namespace {

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Fail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("quditnet_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path data_dir() { return data::default_cache_dir(); }

Outcome criterion_verify() {
  const fs::path dir = scratch_dir("verify");
  const auto start = Clock::now();
  const int rc = run_command(std::string(QUDITNET_CLI) + " verify > " + (dir / "verify.txt").string() + " 2>&1");
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const std::string out = read_text(dir / "verify.txt");
  std::size_t passes = 0;
  for (std::size_t pos = out.find("PASS"); pos != std::string::npos; pos = out.find("PASS", pos + 1)) ++passes;
  const bool ok = rc == 0 && out.find("FAIL") == std::string::npos && passes == 7 && seconds < 60.0;

  // The hidden fault hook must make the same command fail.
  const int bad = run_command(std::string(QUDITNET_CLI) + " verify --inject-fault 1e-6 > /dev/null 2>&1");
  return {ok && bad != 0 ? Outcome::Pass : Outcome::Fail,
          std::to_string(passes) + "/7 checks passed in " + fmt("%.2f", seconds) + " s; fault injection exit " +
              std::to_string(bad)};
}

Outcome criterion_weights() {
  struct Row {
    std::size_t p, L, expected;
  };
  const Row rows[] = {{10, 2, 66}, {10, 3, 286}, {20, 3, 1771}, {30, 3, 5456}, {40, 3, 12341}};
  std::string detail;
  bool ok = true;
  for (const Row& r : rows) {
    const std::size_t got = feature_count(FeatureMap{r.p, r.L, FeatureVariant::Multivariable});
    ok = ok && got == r.expected;
    detail += (detail.empty() ? "" : " ") + std::string("(") + std::to_string(r.p) + "," + std::to_string(r.L) +
              ")=" + std::to_string(got);
  }
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

struct CvTarget {
  std::size_t k, L;
  double paper, tolerance;
};

Outcome run_cv_targets(const std::string& name, std::size_t max_samples, const std::vector<CvTarget>& targets) {
  if (!data::locate_dataset(name, data_dir())) {
    return {Outcome::Fail, name + " not found under " + data_dir().string()};
  }
  RunConfig cfg;
  cfg.dataset = name;
  cfg.max_samples = max_samples;
  const LoadedData loaded = load_run_dataset(cfg);
  std::string detail = std::to_string(loaded.dataset.size()) + " samples;";
  bool ok = true;
  for (const CvTarget& t : targets) {
    CvSpec spec;
    spec.dataset_name = name;
    spec.components = {t.k};
    spec.neurons = {t.L};
    spec.trainer = cfg.trainer_config();
    spec.folds = cfg.folds;
    spec.seed = cfg.seed;
    const CvResult r = run_cv(loaded.dataset, spec, [](const FoldRecord& f) {
      std::fprintf(stderr, "  %s k=%zu L=%zu fold %zu: %.4f (%.1f s)\n", f.dataset.c_str(), f.components, f.neurons,
                   f.fold, f.accuracy, f.seconds);
    });
    const CvSummaryRow& row = r.summary.front();
    const double acc = 100.0 * row.mean_accuracy;
    const bool within = std::abs(acc - t.paper) <= t.tolerance;
    ok = ok && within;
    detail += " (k=" + std::to_string(t.k) + ",L=" + std::to_string(t.L) + ") " +
              format_accuracy(row.mean_accuracy, row.std_accuracy) + " vs " + fmt("%.2f", t.paper) + "+-" +
              fmt("%.1f", t.tolerance) + " in " + fmt("%.0f", row.total_seconds) + " s" + (within ? "" : " OUT");
  }
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Outcome criterion_mnist() { return run_cv_targets("mnist", 0, {{10, 2, 90.36, 2.0}, {20, 1, 85.50, 2.0}}); }

Outcome criterion_emnist() {
  if (!data::locate_dataset("emnist-digits", data_dir())) {
    return {Outcome::Skip, "EMNIST Digits not found under " + data_dir().string()};
  }
  return run_cv_targets("emnist-digits", 50000, {{10, 1, 82.13, 2.5}});
}

Outcome criterion_trainer() {
  const auto centers = testing::circle_centers(5, 10.0);
  const data::Dataset ds = testing::gaussian_blobs(centers, 40, 0.3, 5);
  if (testing::nearest_centroid(ds.X, centers) != ds.y) return {Outcome::Fail, "fixture is not separable"};
  TrainingSpec spec;
  spec.components = 2;
  spec.degree = 1;
  const TrainedClassifier opt = train_classifier(ds, spec);
  const auto pred = predict(opt.model, ds.X);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == ds.label_names[static_cast<std::size_t>(ds.y[i])];
  spec.trainer.assignment = AssignmentMode::Fixed;
  const TrainedClassifier fixed = train_classifier(ds, spec);
  const bool ok = opt.report.svm_fits == 14 && correct == pred.size() && fixed.report.svm_fits == 4;
  return {ok ? Outcome::Pass : Outcome::Fail,
          "optimized fits " + std::to_string(opt.report.svm_fits) + ", training accuracy " +
              std::to_string(correct) + "/" + std::to_string(pred.size()) + ", fixed fits " +
              std::to_string(fixed.report.svm_fits)};
}

std::string without_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

Outcome criterion_determinism() {
  const fs::path dir = scratch_dir("determinism");
  std::string source;
  if (data::locate_dataset("mnist", data_dir())) {
    source = "--dataset mnist --max_samples 3000 --components 10";
  } else {
    const data::Dataset ds = testing::gaussian_blobs(testing::circle_centers(4, 3.0), 60, 1.0, 8);
    std::vector<int> labels;
    for (int y : ds.y) labels.push_back(ds.label_names[static_cast<std::size_t>(y)]);
    data::write_labeled_csv(dir / "blobs.csv", ds.X, labels);
    source = "--train_csv " + (dir / "blobs.csv").string() + " --components 2";
  }
  const std::string base = std::string(QUDITNET_CLI) + " cv " + source +
                           " --neurons 2 --folds 3 --seed 7 --save_fold_models true";
  for (const char* run : {"a", "b"}) {
    const int rc = run_command(base + " --output_dir " + (dir / run).string() + " > /dev/null 2>&1");
    if (rc != 0) return {Outcome::Fail, std::string("cv run ") + run + " exited " + std::to_string(rc)};
  }
  const bool csv_same = without_last_column(read_text(dir / "a" / "metrics.csv")) ==
                        without_last_column(read_text(dir / "b" / "metrics.csv"));
  std::size_t models = 0;
  bool models_same = true;
  for (const auto& entry : fs::directory_iterator(dir / "a" / "models")) {
    ++models;
    const fs::path other = dir / "b" / "models" / entry.path().filename();
    models_same = models_same && fs::exists(other) && read_text(entry.path()) == read_text(other);
  }
  const bool ok = csv_same && models_same && models == 3;
  return {ok ? Outcome::Pass : Outcome::Fail, std::string("metrics csv ") + (csv_same ? "identical" : "DIFFER") +
                                                  ", " + std::to_string(models) + " model files " +
                                                  (models_same ? "identical" : "DIFFER")};
}

Outcome criterion_svm() {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd x(30, 5);
    for (Eigen::Index i = 0; i < 30; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) x(i, j) = g(rng);
    }
    Eigen::VectorXd truth(5);
    for (Eigen::Index j = 0; j < 5; ++j) truth(j) = g(rng);
    Eigen::VectorXd y(30);
    std::vector<std::int8_t> labels;
    for (Eigen::Index i = 0; i < 30; ++i) {
      y(i) = x.row(i).dot(truth) + 0.5 * g(rng) >= 0 ? 1.0 : -1.0;
      if (i < 2) y(i) = i == 0 ? 1.0 : -1.0;
      labels.push_back(static_cast<std::int8_t>(y(i)));
    }
    Matrix f(30, 6);
    f.col(0).setOnes();
    f.rightCols(5) = x;
    const svm::SvmFit fit = svm::train(svm::SvmProblem(f, labels));
    const auto oracle = testing::solve_svm_oracle(x, y, 1.0);
    if (oracle.primal - oracle.dual > 1e-7 * oracle.primal) return {Outcome::Fail, "reference solver did not converge"};
    worst = std::max(worst, std::abs(fit.objective - oracle.primal) / oracle.primal);
  }

  Matrix two(2, 2);
  two << 1, -1, 1, 1;
  svm::SolverConfig cfg;
  cfg.C = 10.0;
  const svm::SvmFit kkt = svm::train(svm::SvmProblem(two, {-1, 1}, cfg));
  const double w_err = std::abs(kkt.solution.w[0] - 1.0);
  const double b_err = std::abs(kkt.solution.b);
  const bool ok = worst <= 1e-4 && w_err <= 1e-3 && b_err <= 1e-3;
  return {ok ? Outcome::Pass : Outcome::Fail, "worst relative objective gap " + fmt("%.2e", worst) +
                                                  " over 50 problems; two-point w=" + fmt("%.6f", kkt.solution.w[0]) +
                                                  " b=" + fmt("%.2e", kkt.solution.b)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mathematical identities", criterion_verify},
      {"weight counts", criterion_weights},
      {"MNIST 10-fold reproduction", criterion_mnist},
      {"EMNIST Digits spot check", criterion_emnist},
      {"trainer structure", criterion_trainer},
      {"determinism", criterion_determinism},
      {"SVM solver correctness", criterion_svm},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool failed = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const char* status = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Skip ? "SKIP" : "FAIL";
    failed = failed || o.status == Outcome::Fail;
    std::printf("criterion %d %s: %s [%s] (%.1f s)\n", number, status, criteria[i].first.c_str(), o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
