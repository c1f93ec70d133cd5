// Copyright 2026 The TIMT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "timt/io/binary.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "timt/error.hpp"

namespace timt::io {

std::string fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) { return fnv1a64(read_bytes(path)); }

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

template <class U>
void append_le(std::vector<std::uint8_t>& out, U bits) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <class U>
U load_le(const std::uint8_t* p) {
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(p[i]) << (8 * i);
  return bits;
}

}  // namespace

void append_f64_le(std::vector<std::uint8_t>& out, double v) { append_le(out, std::bit_cast<std::uint64_t>(v)); }
void append_f32_le(std::vector<std::uint8_t>& out, float v) { append_le(out, std::bit_cast<std::uint32_t>(v)); }
void append_i32_le(std::vector<std::uint8_t>& out, std::int32_t v) { append_le(out, static_cast<std::uint32_t>(v)); }
void append_i64_le(std::vector<std::uint8_t>& out, std::int64_t v) { append_le(out, static_cast<std::uint64_t>(v)); }
double read_f64_le(const std::uint8_t* p) { return std::bit_cast<double>(load_le<std::uint64_t>(p)); }
float read_f32_le(const std::uint8_t* p) { return std::bit_cast<float>(load_le<std::uint32_t>(p)); }
std::int32_t read_i32_le(const std::uint8_t* p) { return static_cast<std::int32_t>(load_le<std::uint32_t>(p)); }
std::int64_t read_i64_le(const std::uint8_t* p) { return static_cast<std::int64_t>(load_le<std::uint64_t>(p)); }

}  // namespace timt::io
