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

#include "quditnet/metrics.hpp"

#include <cmath>
#include <limits>

#include "quditnet/error.hpp"

namespace quditnet::data {

ClassificationMetrics score_predictions(std::span<const int> truth, std::span<const int> predicted,
                                        std::size_t classes) {
  if (truth.empty()) throw Error(ErrorCode::EmptySplit, "cannot score an empty split");
  if (truth.size() != predicted.size()) throw Error(ErrorCode::DimensionMismatch, "prediction count mismatch");

  ClassificationMetrics out;
  out.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (truth[i] < 0 || predicted[i] < 0 || t >= classes || p >= classes) {
      throw Error(ErrorCode::InvalidArgument, "label outside [0, classes)");
    }
    ++out.confusion[t][p];
    correct += t == p ? 1 : 0;
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  out.per_class_accuracy.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t total = 0;
    for (std::size_t v : out.confusion[c]) total += v;
    out.per_class_accuracy[c] = total == 0 ? std::numeric_limits<double>::quiet_NaN()
                                           : static_cast<double>(out.confusion[c][c]) / static_cast<double>(total);
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySplit, "no values to summarize");
  MeanStd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace quditnet::data
