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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "timt/dictionary.hpp"
#include "timt/merge_tree.hpp"
#include "timt/multifield.hpp"
#include "timt/queries.hpp"
#include "timt/scalar_field.hpp"
#include "timt/traits.hpp"

namespace timt::tools {

/// How a trait becomes a scalar field: the induced distance, or one minus the
/// cosine similarity to a single Point trait's coordinates.
enum class Measure { distance, similarity };
std::string_view to_string(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view name) noexcept;

ScalarField trait_field(const TraitExpr& trait, const MultiField& mf, Measure measure);

struct TreeOptions {
  bool superlevel = false;
  std::optional<SimplifyMetric> simplify_metric;
  double simplify_threshold = 0;
};

MergeTree build_tree(const ScalarField& field, const TreeOptions& options);
nlohmann::json simplification_json(const TreeOptions& options);

/// Sub-level merge tree of `field` followed by the query.
Segmentation segment_field(const ScalarField& field, const QuerySpec& spec);

struct LearnOptions {
  std::vector<std::string> channels;  // empty selects every attribute channel
  KsvdOptions ksvd;
};

struct LearnedDictionary {
  Dictionary dictionary;
  SparseCodes codes;
  MultiField space;
};

LearnedDictionary learn_dictionary(const MultiField& mf, const LearnOptions& options);

/// Per-channel min, max, mean and standard deviation.
nlohmann::json channel_stats(const MultiField& mf);

/// Binned vertex density of two channels; counts are row-major with x fastest.
nlohmann::json density_scatterplot(const MultiField& mf, const std::string& x, const std::string& y, int bins);

/// One axis-aligned slice, first in-plane axis fastest. `axis` is x, y or z.
struct SliceShape {
  std::int64_t width = 0, height = 0;
  std::vector<VertexId> vertices;
};
SliceShape slice_vertices(const GridSpec& grid, std::string_view axis, std::int64_t index);

}  // namespace timt::tools
