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

#include "quditnet/idx.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include <zlib.h>

#include "quditnet/error.hpp"

namespace quditnet::data {

bool is_gzip(std::span<const std::uint8_t> bytes) noexcept {
  return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
  z_stream stream{};
  if (inflateInit2(&stream, 16 + MAX_WBITS) != Z_OK) throw Error(ErrorCode::CorruptFile, "inflateInit2 failed");

  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> chunk(1 << 20);
  stream.next_in = const_cast<Bytef*>(bytes.data());
  stream.avail_in = static_cast<uInt>(bytes.size());
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    stream.next_out = chunk.data();
    stream.avail_out = static_cast<uInt>(chunk.size());
    status = inflate(&stream, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) {
      inflateEnd(&stream);
      throw Error(ErrorCode::TruncatedPayload, "gzip stream is corrupt or truncated");
    }
    out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - stream.avail_out));
    if (status == Z_OK && stream.avail_in == 0 && stream.avail_out != 0) {
      inflateEnd(&stream);
      throw Error(ErrorCode::TruncatedPayload, "gzip stream ended early");
    }
  }
  inflateEnd(&stream);
  return out;
}

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

IdxArray parse_plain(std::span<const std::uint8_t> bytes, IdxKind kind) {
  const std::uint32_t expected_magic = kind == IdxKind::Images ? 0x00000803u : 0x00000801u;
  if (bytes.size() < 4) throw Error(ErrorCode::TruncatedPayload, "IDX header shorter than its magic");
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected_magic) {
    throw Error(ErrorCode::BadMagic, "unexpected IDX magic 0x" + [&] {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%08x", magic);
      return std::string(buf);
    }());
  }
  const std::size_t ndims = magic & 0xffu;
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) throw Error(ErrorCode::TruncatedPayload, "IDX header is truncated");

  IdxArray out;
  std::size_t total = 1;
  for (std::size_t k = 0; k < ndims; ++k) {
    const std::uint32_t dim = read_be32(bytes, 4 + 4 * k);
    out.dims.push_back(dim);
    if (__builtin_mul_overflow(total, std::size_t{dim}, &total)) {
      throw Error(ErrorCode::DimensionOverflow, "IDX dimension product overflows");
    }
  }
  const std::size_t payload = bytes.size() - header;
  if (payload != total) {
    throw Error(ErrorCode::TruncatedPayload, "IDX payload has " + std::to_string(payload) +
                                                 " bytes, header declares " + std::to_string(total));
  }
  out.values.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
  return out;
}

}  // namespace

IdxArray parse_idx(std::span<const std::uint8_t> bytes, IdxKind kind) {
  if (is_gzip(bytes)) {
    const std::vector<std::uint8_t> plain = gunzip(bytes);
    return parse_plain(plain, kind);
  }
  return parse_plain(bytes, kind);
}

RawImageSet parse_idx_images(std::span<const std::uint8_t> bytes) {
  IdxArray arr = parse_idx(bytes, IdxKind::Images);
  RawImageSet set;
  set.rows = arr.dims.at(1);
  set.cols = arr.dims.at(2);
  set.pixels = std::move(arr.values);
  return set;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const IdxArray arr = parse_idx(bytes, IdxKind::Labels);
  return {arr.values.begin(), arr.values.end()};
}

std::vector<std::uint8_t> write_idx_images(const RawImageSet& set) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + set.pixels.size());
  append_be32(out, 0x00000803u);
  append_be32(out, static_cast<std::uint32_t>(set.image_count()));
  append_be32(out, static_cast<std::uint32_t>(set.rows));
  append_be32(out, static_cast<std::uint32_t>(set.cols));
  out.insert(out.end(), set.pixels.begin(), set.pixels.end());
  return out;
}

std::vector<std::uint8_t> write_idx_labels(std::span<const int> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  append_be32(out, 0x00000801u);
  append_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (int v : labels) {
    if (v < 0 || v > 255) throw Error(ErrorCode::InvalidArgument, "IDX labels must fit in one byte");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

RawImageSet load_image_set(const std::filesystem::path& images, const std::filesystem::path& labels) {
  RawImageSet set = parse_idx_images(read_file(images));
  set.labels = parse_idx_labels(read_file(labels));
  if (set.labels.size() != set.image_count()) {
    throw Error(ErrorCode::DimensionMismatch, images.string() + " and " + labels.string() +
                                                  " disagree on the sample count");
  }
  return set;
}

}  // namespace quditnet::data
