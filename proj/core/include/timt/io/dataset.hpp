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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "timt/multifield.hpp"
#include "timt/scalar_field.hpp"

namespace timt::io {

inline constexpr int kFormatVersion = 1;

enum class DType { f32, f64 };

struct ChannelDescriptor {
  std::string name;
  std::string unit;
  DType dtype = DType::f64;
  std::string path;  // relative to the manifest directory
  std::uint64_t offset = 0;
  Provenance provenance;
};

/// JSON manifest plus raw payload files. Payloads are x-fastest, little-endian.
struct DatasetManifest {
  int version = kFormatVersion;
  GridSpec grid;
  std::vector<ChannelDescriptor> channels;
  std::optional<FieldMeaning> meaning;  // set for scalar-field files
};

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::json& j);

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);
DatasetManifest read_manifest(const std::filesystem::path& manifest_path);

/// Loads and validates every channel payload. Throws size_mismatch naming the
/// channel, non_finite with channel and vertex index, parse on unknown versions.
MultiField load_dataset(const std::filesystem::path& manifest_path);

/// Writes `<stem>.json` and one f64 payload `<stem>.raw` holding all channels
/// back to back. Returns the manifest path.
std::filesystem::path save_dataset(const MultiField& mf, const std::filesystem::path& manifest_path);

/// A one-channel dataset carrying a field meaning.
std::filesystem::path save_scalar_field(const ScalarField& field, const std::filesystem::path& manifest_path,
                                        const std::string& name = "h");
ScalarField load_scalar_field(const std::filesystem::path& manifest_path);

/// Loads a dataset or scalar-field manifest and overrides its connectivity.
MultiField load_dataset(const std::filesystem::path& manifest_path, std::optional<Connectivity> connectivity);

}  // namespace timt::io
