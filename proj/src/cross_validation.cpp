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

#include "quditnet/cross_validation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "quditnet/error.hpp"
#include "quditnet/kfold.hpp"
#include "quditnet/metrics.hpp"
#include "quditnet/model_io.hpp"
#include "quditnet/pca.hpp"

namespace quditnet {

namespace {

using Clock = std::chrono::steady_clock;

Matrix gather_rows(const Matrix& X, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::vector<FoldRecord> run_fold(const data::Dataset& dataset, const CvSpec& spec, const data::FoldPlan& plan,
                                 std::size_t fold) {
  const std::vector<std::size_t> train = plan.train_indices(fold);
  const std::vector<std::size_t> test = plan.test_indices(fold);
  const std::size_t k_max = *std::max_element(spec.components.begin(), spec.components.end());

  const auto pca_start = Clock::now();
  const data::PcaModel pca = data::pca_fit(dataset.X, k_max, train);
  const double pca_seconds = std::chrono::duration<double>(Clock::now() - pca_start).count();

  const Matrix X_test = gather_rows(dataset.X, test);
  std::vector<int> truth(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) truth[i] = dataset.y[test[i]];

  std::vector<FoldRecord> out;
  for (std::size_t k : spec.components) {
    for (std::size_t L : spec.neurons) {
      const auto start = Clock::now();
      TrainingSpec ts;
      ts.components = k;
      ts.degree = L;
      ts.variant = spec.variant;
      ts.standardize_features = spec.standardize_features;
      ts.trainer = spec.trainer;
      TrainedClassifier trained = train_classifier(dataset, ts, pca, train);
      const std::vector<int> predicted = predict(trained.model, X_test);

      std::vector<int> dense(predicted.size());
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto it = std::lower_bound(dataset.label_names.begin(), dataset.label_names.end(), predicted[i]);
        dense[i] = static_cast<int>(it - dataset.label_names.begin());
      }
      const auto metrics = data::score_predictions(truth, dense, dataset.classes());

      FoldRecord rec;
      rec.dataset = spec.dataset_name;
      rec.components = k;
      rec.neurons = L;
      rec.fold = fold;
      rec.accuracy = metrics.accuracy;
      rec.seconds = std::chrono::duration<double>(Clock::now() - start).count() + pca_seconds;
      rec.train_samples = train.size();
      rec.test_samples = test.size();
      rec.svm_fits = trained.report.svm_fits;
      for (const auto& step : trained.report.steps) {
        for (const auto& c : step.candidates) rec.unconverged_fits += c.converged ? 0 : 1;
      }
      if (!spec.model_dir.empty()) {
        trained.model.metadata["fold"] = std::to_string(fold);
        trained.model.metadata["folds"] = std::to_string(spec.folds);
        save_model(trained.model, spec.model_dir / fold_model_name(spec.dataset_name, k, L, fold));
      }
      out.push_back(rec);
    }
  }
  return out;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

CvResult run_cv(const data::Dataset& dataset, const CvSpec& spec, const CvProgress& progress) {
  if (spec.components.empty() || spec.neurons.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cv sweep needs components and neurons");
  }
  if (spec.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  spec.trainer.validate();
  if (!spec.model_dir.empty()) std::filesystem::create_directories(spec.model_dir);

  const data::FoldPlan plan = data::stratified_kfold(dataset.y, spec.folds, spec.seed);

  std::vector<std::vector<FoldRecord>> per_fold(spec.folds);
  std::vector<std::exception_ptr> errors(spec.folds);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t f = next++; f < spec.folds; f = next++) {
      try {
        per_fold[f] = run_fold(dataset, spec, plan, f);
        if (progress) {
          std::lock_guard lock(progress_mutex);
          for (const auto& r : per_fold[f]) progress(r);
        }
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(spec.jobs, spec.folds);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CvResult result;
  for (std::size_t k : spec.components) {
    for (std::size_t L : spec.neurons) {
      CvSummaryRow row;
      row.components = k;
      row.neurons = L;
      row.weights = feature_count(FeatureMap{k, L, spec.variant});
      std::vector<double> acc;
      for (std::size_t f = 0; f < spec.folds; ++f) {
        for (const auto& r : per_fold[f]) {
          if (r.components == k && r.neurons == L) {
            result.folds.push_back(r);
            acc.push_back(r.accuracy);
            row.total_seconds += r.seconds;
          }
        }
      }
      const data::MeanStd ms = data::mean_std(acc);
      row.mean_accuracy = ms.mean;
      row.std_accuracy = ms.stddev;
      row.mean_seconds = row.total_seconds / static_cast<double>(acc.size());
      result.summary.push_back(row);
    }
  }
  return result;
}

std::string format_accuracy(double mean, double stddev) {
  return fmt("%.2f", 100.0 * mean) + " (" + fmt("%.2f", 100.0 * stddev) + ")";
}

std::string format_paper_row(const CvSummaryRow& row) {
  return std::to_string(row.neurons) + " & " + std::to_string(row.weights) + " & " +
         format_accuracy(row.mean_accuracy, row.std_accuracy) + " & " + fmt("%.2f", row.total_seconds);
}

std::string metrics_csv(const CvResult& result, bool include_timing) {
  std::ostringstream out;
  out << "dataset,components,neurons,fold,accuracy";
  if (include_timing) out << ",seconds";
  out << "\n";
  for (const auto& r : result.folds) {
    out << r.dataset << ',' << r.components << ',' << r.neurons << ',' << r.fold << ',' << fmt("%.17g", r.accuracy);
    if (include_timing) out << ',' << fmt("%.3f", r.seconds);
    out << "\n";
  }
  return out.str();
}

std::string summary_json(const CvResult& result, const std::map<std::string, std::string>& metadata,
                         bool include_timing) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : result.summary) {
    nlohmann::json row{{"components", s.components},
                       {"neurons", s.neurons},
                       {"weights", s.weights},
                       {"mean_accuracy", s.mean_accuracy},
                       {"std_accuracy", s.std_accuracy},
                       {"table_row", include_timing ? format_paper_row(s)
                                                    : std::to_string(s.neurons) + " & " + std::to_string(s.weights) +
                                                          " & " + format_accuracy(s.mean_accuracy, s.std_accuracy)}};
    if (include_timing) {
      row["mean_seconds"] = s.mean_seconds;
      row["total_seconds"] = s.total_seconds;
    }
    std::size_t unconverged = 0;
    std::size_t fits = 0;
    for (const auto& f : result.folds) {
      if (f.components == s.components && f.neurons == s.neurons) {
        unconverged += f.unconverged_fits;
        fits += f.svm_fits;
      }
    }
    row["svm_fits"] = fits;
    row["unconverged_fits"] = unconverged;
    rows.push_back(std::move(row));
  }
  nlohmann::json j{{"metadata", metadata}, {"summary", rows}};
  return j.dump(2) + "\n";
}

std::string fold_model_name(const std::string& dataset, std::size_t k, std::size_t L, std::size_t fold) {
  return dataset + "_k" + std::to_string(k) + "_L" + std::to_string(L) + "_fold" + std::to_string(fold) + ".json";
}

}  // namespace quditnet
