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
#include <vector>

#include "timt/merge_tree.hpp"

namespace timt {

struct DiagramPoint {
  double birth = 0;
  double death = 0;

  double persistence() const noexcept { return death - birth; }
  bool operator==(const DiagramPoint&) const = default;
};

using PersistenceDiagram = std::vector<DiagramPoint>;

/// One point per persistence pair; the essential pair dies at the global max.
PersistenceDiagram persistence_diagram(const MergeTree& t);

inline constexpr std::size_t kBottleneckPointLimit = 2048;

/// Exact bottleneck distance under the L-infinity ground metric, with
/// diagonal projections. Throws ErrorCode::limit_exceeded above
/// kBottleneckPointLimit points per diagram.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace timt
