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
#include <cstdint>
#include <span>
#include <vector>

namespace quditnet::data {

struct FoldPlan {
  std::size_t K = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // fold index per sample

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
};

/// Stratified K-fold split of dense labels. Within every class the fold
/// sizes differ by at most one; deterministic for a given seed.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t K, std::uint64_t seed);

}  // namespace quditnet::data
