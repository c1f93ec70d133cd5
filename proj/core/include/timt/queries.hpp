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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "timt/merge_tree.hpp"
#include "timt/scalar_field.hpp"

namespace timt {

inline constexpr std::int32_t kBackground = -1;

enum class QueryMethod { branch_decomposition, leaf_arcs, subtrees, crown };

std::string_view to_string(QueryMethod m) noexcept;
std::optional<QueryMethod> parse_query_method(std::string_view name) noexcept;

struct QuerySpec {
  QueryMethod method = QueryMethod::branch_decomposition;
  SimplifyMetric metric = SimplifyMetric::persistence;
  double threshold = 0;
  std::optional<double> cut_level;  // subtrees
  std::optional<double> delta;      // crown height

  /// Throws ErrorCode::invalid_argument when a required parameter is missing
  /// or negative.
  void validate() const;
};

struct SegmentInfo {
  std::int32_t id = 0;
  VertexId minimum_vertex = 0;
  double minimum_value = 0;
  std::size_t vertex_count = 0;
  double metric = 0;  // persistence or hypervolume of the segment's pair
};

struct Segmentation {
  GridSpec grid;
  std::vector<std::int32_t> labels;  // segment id or kBackground
  std::vector<SegmentInfo> segments;
  QuerySpec spec;
  std::vector<std::string> notes;
};

/// Every surviving branch of the simplified tree becomes a segment; no
/// background. Vertices are assigned in sweep order to the branch of an
/// already-labelled neighbor (preferring the branch their arc lies on), so
/// every segment is connected.
Segmentation segment_branch_decomposition(const MergeTree& t, const QuerySpec& spec);

/// One segment per remaining leaf: the members of its incident arc.
Segmentation segment_leaf_arcs(const MergeTree& t, const QuerySpec& spec);

/// Connected sub-trees strictly below spec.cut_level.
Segmentation segment_subtrees(const MergeTree& t, const QuerySpec& spec);

/// Crown features: for each minimum with persistence >= delta, the component
/// of {h <= h(a) + delta} containing it; overlapping or touching crowns merge.
Segmentation segment_crowns(const ScalarField& field, const MergeTree& t, const QuerySpec& spec);

/// Dispatches on spec.method.
Segmentation run_query(const ScalarField& field, const MergeTree& t, const QuerySpec& spec);

struct ReportRow {
  std::int32_t id = 0;
  double minimum_value = 0;
  std::size_t size = 0;
  double metric = 0;
};

/// Rows ordered by (minimum value, id).
std::vector<ReportRow> segmentation_report(const Segmentation& s);

}  // namespace timt
