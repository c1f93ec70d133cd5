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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace timt::io {

/// FNV-1a 64-bit digest, rendered as "fnv1a64:<16 hex digits>".
std::string fnv1a64(std::span<const std::uint8_t> bytes);
std::string file_digest(const std::filesystem::path& path);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

void append_f64_le(std::vector<std::uint8_t>& out, double v);
void append_f32_le(std::vector<std::uint8_t>& out, float v);
void append_i32_le(std::vector<std::uint8_t>& out, std::int32_t v);
void append_i64_le(std::vector<std::uint8_t>& out, std::int64_t v);
double read_f64_le(const std::uint8_t* p);
float read_f32_le(const std::uint8_t* p);
std::int32_t read_i32_le(const std::uint8_t* p);
std::int64_t read_i64_le(const std::uint8_t* p);

}  // namespace timt::io
