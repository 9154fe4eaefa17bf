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
 * JSON model files.
 */

#pragma once

#include <filesystem>
#include <string>

#include "quditnet/trainer.hpp"

namespace quditnet {

inline constexpr int kModelSchemaVersion = 1;

std::string serialize_model(const QuditClassifierModel& model);

/// Throws SchemaVersionMismatch for an unknown version and CorruptFile for
/// anything unparseable or inconsistent.
QuditClassifierModel deserialize_model(const std::string& text);

void save_model(const QuditClassifierModel& model, const std::filesystem::path& path);
QuditClassifierModel load_model(const std::filesystem::path& path);

}  // namespace quditnet
