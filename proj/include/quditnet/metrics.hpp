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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quditnet::data {

struct ClassificationMetrics {
  double accuracy = 0.0;
  std::vector<double> per_class_accuracy;         // NaN for classes absent from the split
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
};

/// Labels are dense class indices in [0, classes).
ClassificationMetrics score_predictions(std::span<const int> truth, std::span<const int> predicted,
                                        std::size_t classes);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1); 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

}  // namespace quditnet::data
