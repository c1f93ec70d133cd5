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
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "timt/dictionary.hpp"
#include "timt/merge_tree.hpp"
#include "timt/queries.hpp"
#include "timt/stability.hpp"
#include "timt/traits.hpp"

namespace timt::io {

// Trait documents. Parse errors carry the JSON path of the offending field;
// coordinates that do not match their subspace raise dimension_mismatch.
nlohmann::json trait_to_json(const TraitExpr& expr);
TraitExpr trait_from_json(const nlohmann::json& j);
/// Compact, key-sorted serialization; equal traits give equal bytes.
std::string canonical_trait_document(const TraitExpr& expr);
TraitExpr parse_trait_document(const std::string& text);
TraitExpr read_trait(const std::filesystem::path& path);

nlohmann::json query_spec_to_json(const QuerySpec& spec);
QuerySpec query_spec_from_json(const nlohmann::json& j);

/// Node, arc, pair and branch tables. With `arc_map_path`, the document
/// references a raw int32 vertex-to-arc file instead of omitting it.
nlohmann::json tree_to_json(const MergeTree& t, const std::optional<std::string>& arc_map_path = std::nullopt);
/// Writes `<stem>.json` and `<stem>.arcs.raw`; returns the JSON path.
std::filesystem::path write_tree(const MergeTree& t, const std::filesystem::path& stem,
                                 const nlohmann::json& simplification = nullptr);

nlohmann::json segmentation_to_json(const Segmentation& s, const std::optional<std::string>& labels_path = std::nullopt);
/// Writes `<stem>.json` and the int32 little-endian label volume `<stem>.labels.raw`.
std::filesystem::path write_segmentation(const Segmentation& s, const std::filesystem::path& stem);
Segmentation read_segmentation(const std::filesystem::path& sidecar);

/// JSON header `<stem>.json`, row-major f64 atoms `<stem>.atoms.raw` and, when
/// given, codes as (i64 column, i64 atom, f64 value) records in `<stem>.codes.raw`.
std::filesystem::path write_dictionary(const Dictionary& d, const SparseCodes* codes,
                                       const std::filesystem::path& stem);
std::pair<Dictionary, std::optional<SparseCodes>> read_dictionary(const std::filesystem::path& header);

nlohmann::json suggestions_to_json(const std::vector<AtomSuggestion>& s);
nlohmann::json stability_report_to_json(const StabilityReport& r);

/// Everything needed to reproduce an artifact. Contains no timestamps, so
/// reruns produce identical bytes.
struct RunRecord {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::map<std::string, std::filesystem::path> inputs;
  std::map<std::string, std::filesystem::path> outputs;
};
nlohmann::json run_record_to_json(const RunRecord& r);
void write_run_record(const RunRecord& r, const std::filesystem::path& path);

}  // namespace timt::io
