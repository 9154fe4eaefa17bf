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
 * IDX reader/writer for the MNIST family of datasets.
 *
 * Layout: a big-endian magic 0x000008NN where NN is the dimension count
 * (0x03 for images, 0x01 for labels), then NN big-endian u32 sizes, then
 * the unsigned-byte payload. Gzip streams (0x1f 0x8b) are inflated first.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace quditnet::data {

enum class IdxKind { Images, Labels };

struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> values;
};

/// n images of rows x cols pixels plus one label per image. Parsing an
/// images file fills the pixel fields; a labels file fills `labels`.
struct RawImageSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // n * rows * cols, image-major
  std::vector<int> labels;

  std::size_t image_count() const noexcept { return rows * cols == 0 ? 0 : pixels.size() / (rows * cols); }
};

bool is_gzip(std::span<const std::uint8_t> bytes) noexcept;
std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes);

IdxArray parse_idx(std::span<const std::uint8_t> bytes, IdxKind kind);
RawImageSet parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> write_idx_images(const RawImageSet& set);
std::vector<std::uint8_t> write_idx_labels(std::span<const int> labels);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Reads an images file and its labels file and checks the counts agree.
RawImageSet load_image_set(const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace quditnet::data
