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

#include "timt/io/dataset.hpp"

#include <cmath>
#include <map>

#include "timt/error.hpp"
#include "timt/io/binary.hpp"

namespace timt::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDatasetFormat = "timt-dataset";

std::string_view to_string(DType d) { return d == DType::f32 ? "f32" : "f64"; }

std::size_t dtype_size(DType d) { return d == DType::f32 ? 4 : 8; }

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::parse, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::parse, where + "." + key + ": wrong type");
  }
}

ProvenanceKind parse_provenance_kind(const std::string& s) {
  if (s == "raw") return ProvenanceKind::raw;
  if (s == "derived") return ProvenanceKind::derived;
  if (s == "normalized") return ProvenanceKind::normalized;
  fail(ErrorCode::parse, "provenance.kind: unknown value '" + s + "'");
}

}  // namespace

json grid_to_json(const GridSpec& grid) {
  return {{"dims", grid.dims()},
          {"spacing", grid.spacing()},
          {"connectivity", std::string(to_string(grid.connectivity()))}};
}

GridSpec grid_from_json(const json& j) {
  const auto dims = get_field<std::array<std::int64_t, 3>>(j, "dims", "grid");
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  if (j.contains("spacing")) spacing = get_field<std::array<double, 3>>(j, "spacing", "grid");
  std::optional<Connectivity> conn;
  if (j.contains("connectivity")) {
    const auto name = get_field<std::string>(j, "connectivity", "grid");
    conn = parse_connectivity(name);
    if (!conn) fail(ErrorCode::parse, "grid.connectivity: unknown value '" + name + "'");
  }
  return GridSpec(dims, spacing, conn);
}

json provenance_to_json(const Provenance& p) {
  return {{"kind", std::string(to_string(p.kind))}, {"detail", p.detail}, {"params", p.params}};
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.kind = parse_provenance_kind(get_field<std::string>(j, "kind", "provenance"));
  if (j.contains("detail")) p.detail = get_field<std::string>(j, "detail", "provenance");
  if (j.contains("params")) p.params = get_field<std::vector<double>>(j, "params", "provenance");
  return p;
}

json manifest_to_json(const DatasetManifest& m) {
  json channels = json::array();
  for (const auto& c : m.channels) {
    channels.push_back({{"name", c.name},
                        {"unit", c.unit},
                        {"dtype", std::string(to_string(c.dtype))},
                        {"path", c.path},
                        {"offset", c.offset},
                        {"provenance", provenance_to_json(c.provenance)}});
  }
  json j = {{"format", kDatasetFormat},
            {"version", m.version},
            {"grid", grid_to_json(m.grid)},
            {"layout", "x-fastest"},
            {"endianness", "little"},
            {"channels", channels}};
  if (m.meaning) j["meaning"] = std::string(to_string(*m.meaning));
  return j;
}

DatasetManifest manifest_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::parse, "manifest: expected an object");
  if (j.contains("format") && j["format"] != kDatasetFormat)
    fail(ErrorCode::parse, "manifest.format: expected '" + std::string(kDatasetFormat) + "'");
  DatasetManifest m;
  m.version = get_field<int>(j, "version", "manifest");
  if (m.version != kFormatVersion)
    fail(ErrorCode::parse, "manifest.version: unknown version " + std::to_string(m.version));
  if (j.contains("layout") && j["layout"] != "x-fastest")
    fail(ErrorCode::parse, "manifest.layout: only 'x-fastest' is supported");
  if (j.contains("endianness") && j["endianness"] != "little")
    fail(ErrorCode::parse, "manifest.endianness: only 'little' is supported");
  if (!j.contains("grid")) fail(ErrorCode::parse, "manifest: missing field 'grid'");
  try {
    m.grid = grid_from_json(j["grid"]);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    fail(ErrorCode::parse, std::string("manifest.grid: ") + e.what());
  }
  if (!j.contains("channels") || !j["channels"].is_array())
    fail(ErrorCode::parse, "manifest: missing array 'channels'");
  for (std::size_t i = 0; i < j["channels"].size(); ++i) {
    const json& c = j["channels"][i];
    const std::string where = "manifest.channels[" + std::to_string(i) + "]";
    ChannelDescriptor d;
    d.name = get_field<std::string>(c, "name", where);
    if (c.contains("unit")) d.unit = get_field<std::string>(c, "unit", where);
    const auto dtype = get_field<std::string>(c, "dtype", where);
    if (dtype == "f32") d.dtype = DType::f32;
    else if (dtype == "f64") d.dtype = DType::f64;
    else fail(ErrorCode::parse, where + ".dtype: unsupported '" + dtype + "'");
    d.path = get_field<std::string>(c, "path", where);
    if (c.contains("offset")) d.offset = get_field<std::uint64_t>(c, "offset", where);
    if (c.contains("provenance")) d.provenance = provenance_from_json(c["provenance"]);
    m.channels.push_back(std::move(d));
  }
  if (j.contains("meaning")) {
    const auto name = get_field<std::string>(j, "meaning", "manifest");
    m.meaning = parse_field_meaning(name);
    if (!m.meaning) fail(ErrorCode::parse, "manifest.meaning: unknown value '" + name + "'");
  }
  return m;
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
  json j;
  try {
    j = json::parse(read_text(manifest_path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, "manifest '" + manifest_path.string() + "': " + e.what());
  }
  return manifest_from_json(j);
}

MultiField load_dataset(const fs::path& manifest_path) {
  const DatasetManifest m = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  const std::size_t n = m.grid.vertex_count();

  std::map<std::string, std::vector<std::uint8_t>> payloads;
  std::map<std::string, std::uint64_t> used;
  for (const auto& c : m.channels) {
    if (!payloads.contains(c.path)) payloads[c.path] = read_bytes(base / c.path);
    const std::uint64_t extent = c.offset + n * dtype_size(c.dtype);
    used[c.path] = std::max(used[c.path], extent);
    if (extent > payloads[c.path].size())
      fail(ErrorCode::size_mismatch,
           "channel '" + c.name + "': payload '" + c.path + "' holds " +
               std::to_string(payloads[c.path].size()) + " bytes, expected at least " + std::to_string(extent));
  }
  for (const auto& [path, bytes] : payloads) {
    if (bytes.size() != used[path]) {
      std::string owner;
      for (const auto& c : m.channels)
        if (c.path == path) owner = c.name;
      fail(ErrorCode::size_mismatch, "channel '" + owner + "': payload '" + path + "' holds " +
                                         std::to_string(bytes.size()) + " bytes, declared " +
                                         std::to_string(used[path]));
    }
  }

  MultiField mf(m.grid);
  for (const auto& c : m.channels) {
    const auto& bytes = payloads[c.path];
    std::vector<double> values(n);
    const std::uint8_t* p = bytes.data() + c.offset;
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = c.dtype == DType::f64 ? read_f64_le(p + 8 * i) : static_cast<double>(read_f32_le(p + 4 * i));
      if (!std::isfinite(values[i]))
        fail(ErrorCode::non_finite, "channel '" + c.name + "': non-finite value at vertex " + std::to_string(i));
    }
    mf.add_channel({c.name, c.unit, std::move(values), c.provenance});
  }
  return mf;
}

MultiField load_dataset(const fs::path& manifest_path, std::optional<Connectivity> connectivity) {
  MultiField mf = load_dataset(manifest_path);
  return connectivity ? mf.with_connectivity(*connectivity) : mf;
}

namespace {

fs::path payload_path_for(const fs::path& manifest_path) {
  fs::path p = manifest_path;
  p.replace_extension(".raw");
  return p;
}

}  // namespace

fs::path save_dataset(const MultiField& mf, const fs::path& manifest_path) {
  DatasetManifest m;
  m.grid = mf.grid();
  const fs::path payload = payload_path_for(manifest_path);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(mf.channel_count() * mf.vertex_count() * 8);
  for (const auto& c : mf.channels()) {
    m.channels.push_back({c.name, c.unit, DType::f64, payload.filename().string(), bytes.size(), c.provenance});
    for (double v : c.values) append_f64_le(bytes, v);
  }
  write_bytes(payload, bytes);
  write_text(manifest_path, manifest_to_json(m).dump(2) + "\n");
  return manifest_path;
}

fs::path save_scalar_field(const ScalarField& field, const fs::path& manifest_path, const std::string& name) {
  DatasetManifest m;
  m.grid = field.grid;
  m.meaning = field.meaning;
  const fs::path payload = payload_path_for(manifest_path);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(field.values.size() * 8);
  for (double v : field.values) append_f64_le(bytes, v);
  m.channels.push_back({name, "", DType::f64, payload.filename().string(), 0, {}});
  write_bytes(payload, bytes);
  write_text(manifest_path, manifest_to_json(m).dump(2) + "\n");
  return manifest_path;
}

ScalarField load_scalar_field(const fs::path& manifest_path) {
  const DatasetManifest m = read_manifest(manifest_path);
  const MultiField mf = load_dataset(manifest_path);
  if (mf.channel_count() != 1)
    fail(ErrorCode::invalid_argument, "scalar field '" + manifest_path.string() + "' must have exactly one channel, found " +
                                          std::to_string(mf.channel_count()));
  ScalarField f{mf.grid(), mf.channel(0).values, m.meaning.value_or(FieldMeaning::generic)};
  validate(f);
  return f;
}

}  // namespace timt::io
