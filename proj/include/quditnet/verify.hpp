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
 * Mathematical self-check battery run by `quditnet verify`.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace quditnet::verify {

struct VerifyOptions {
  std::uint64_t seed = 20240229;
  std::size_t normalization_samples = 10000;
  std::size_t max_dimension = 64;
  std::size_t dense_samples_per_dimension = 20;
  std::size_t qubit_max_dimension = 12;
  std::size_t qubit_samples_per_dimension = 100;
  /// Test hook: added to the skew-matrix denominator of the dense path.
  double denominator_offset = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  /// Name of the first failing check, or empty.
  std::string first_failure() const;
};

VerifyReport run_verify(const VerifyOptions& options = {});

std::string format_report(const VerifyReport& report);

}  // namespace quditnet::verify
