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
#include <span>
#include <string_view>
#include <vector>

#include "timt/grid.hpp"
#include "timt/scalar_field.hpp"

namespace timt {

enum class NodeKind { leaf, saddle, root };

std::string_view to_string(NodeKind k) noexcept;

struct TreeNode {
  VertexId vertex = 0;
  double value = 0;
  NodeKind kind = NodeKind::leaf;
};

/// An arc owns the vertices that joined its component strictly after its
/// lower node and up to (excluding) its upper node. Node vertices belong to
/// the arc leaving them upwards; the root vertex belongs to the final arc.
struct TreeArc {
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::vector<VertexId> members;
};

inline constexpr std::size_t kNoArc = static_cast<std::size_t>(-1);

/// Sub-level merge tree of a scalar field over the grid neighborhood graph.
/// Ties are broken by vertex index (simulation of simplicity). Nodes are
/// stored in sweep order, so the root is always last.
struct MergeTree {
  GridSpec grid;
  std::vector<double> values;  // swept values (negated for super-level trees)
  std::vector<double> levels;  // equal to values, except flattened vertices after simplify
  std::vector<TreeNode> nodes;
  std::vector<TreeArc> arcs;
  bool superlevel = false;
  bool simplified = false;

  // Derived adjacency, rebuilt by index().
  std::vector<std::size_t> up_arc;                  // per node, kNoArc for the root
  std::vector<std::vector<std::size_t>> down_arcs;  // per node, ascending
  std::vector<std::int32_t> vertex_arc;             // per vertex

  void index();
  std::size_t root() const noexcept { return nodes.size() - 1; }
  std::size_t leaf_count() const noexcept;

  /// Sweep order on vertices: (value, vertex index).
  bool precedes(VertexId a, VertexId b) const noexcept {
    const double va = values[static_cast<std::size_t>(a)];
    const double vb = values[static_cast<std::size_t>(b)];
    return va < vb || (va == vb && a < b);
  }
};

/// Union-find sweep in ascending (value, index) order. With `superlevel` the
/// tree of the negated field is built. Throws ErrorCode::non_finite naming
/// the offending vertex.
MergeTree compute_merge_tree(const ScalarField& field, bool superlevel = false);
MergeTree compute_merge_tree(const ScalarField& field, const GridSpec& grid,
                             bool superlevel = false);

/// Throws ErrorCode::invalid_argument describing the first violated invariant.
void check_invariants(const MergeTree& t);

struct PersistencePair {
  std::size_t minimum = 0;  // leaf node
  std::size_t death = 0;    // saddle node, or the root for the global minimum
  double persistence = 0;
};

/// Elder rule. Pairs are ordered by minimum node, so the global-minimum pair
/// comes first.
std::vector<PersistencePair> persistence_pairs(const MergeTree& t);

/// For every node, the leaf node of the oldest minimum in its subtree.
std::vector<std::size_t> elder_leaves(const MergeTree& t);

/// (count of vertices on the branch's own arcs) * persistence, per pair.
std::vector<double> hypervolume_per_pair(const MergeTree& t,
                                         std::span<const PersistencePair> pairs);

enum class SimplifyMetric { persistence, hypervolume };

std::string_view to_string(SimplifyMetric m) noexcept;
std::optional<SimplifyMetric> parse_simplify_metric(std::string_view name) noexcept;

/// Cancels leaf branches in ascending metric order while the metric is below
/// `threshold`. The global-minimum branch is never cancelled.
MergeTree simplify(const MergeTree& t, SimplifyMetric metric, double threshold);

struct Branch {
  std::size_t minimum = 0;
  std::size_t death = 0;
  double persistence = 0;
  std::vector<std::size_t> arcs;  // bottom-up
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

struct BranchDecomposition {
  std::vector<Branch> branches;  // ordered like persistence_pairs; [0] is the root branch
  std::vector<std::size_t> arc_branch;
};

BranchDecomposition branch_decomposition(const MergeTree& t);

}  // namespace timt
