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

#include "quditnet/kfold.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "quditnet/error.hpp"

namespace quditnet::data {

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t K, std::uint64_t seed) {
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "K must be at least 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, members] : by_class) {
    if (members.size() < K) {
      throw Error(ErrorCode::ClassTooSmall, "class " + std::to_string(label) + " has " +
                                                std::to_string(members.size()) + " samples, fewer than K=" +
                                                std::to_string(K));
    }
  }

  FoldPlan plan;
  plan.K = K;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);
  std::mt19937_64 rng(seed);
  // Each class deals its shuffled members round-robin, starting where the
  // previous class stopped so the remainders spread across folds.
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t t = 0; t < members.size(); ++t) plan.assignments[members[t]] = (offset + t) % K;
    offset = (offset + members.size()) % K;
  }
  return plan;
}

}  // namespace quditnet::data
