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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace timt {

using VertexId = std::int64_t;

/// Vertex neighborhood used by every topological computation. 2D grids
/// (nz == 1) use edge4/vertex8; face6/vertex26 are accepted there and
/// normalized to their 2D counterparts.
enum class Connectivity { face6, vertex26, edge4, vertex8 };

std::string_view to_string(Connectivity c) noexcept;
std::optional<Connectivity> parse_connectivity(std::string_view name) noexcept;

struct Offset {
  int dx, dy, dz;
};

/// Structured grid of nx*ny*nz vertices, x fastest.
class GridSpec {
 public:
  GridSpec() : GridSpec({1, 1, 1}) {}
  explicit GridSpec(std::array<std::int64_t, 3> dims,
                    std::array<double, 3> spacing = {1.0, 1.0, 1.0},
                    std::optional<Connectivity> connectivity = std::nullopt);

  const std::array<std::int64_t, 3>& dims() const noexcept { return dims_; }
  const std::array<double, 3>& spacing() const noexcept { return spacing_; }
  Connectivity connectivity() const noexcept { return connectivity_; }
  bool is_2d() const noexcept { return dims_[2] == 1; }

  std::int64_t nx() const noexcept { return dims_[0]; }
  std::int64_t ny() const noexcept { return dims_[1]; }
  std::int64_t nz() const noexcept { return dims_[2]; }
  std::size_t vertex_count() const noexcept {
    return static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
  }

  VertexId index(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return x + dims_[0] * (y + dims_[1] * z);
  }
  std::array<std::int64_t, 3> coords(VertexId v) const noexcept {
    const std::int64_t x = v % dims_[0];
    const std::int64_t yz = v / dims_[0];
    return {x, yz % dims_[1], yz / dims_[1]};
  }

  /// Same grid with a different neighborhood (normalized for 2D).
  GridSpec with_connectivity(Connectivity c) const;

  std::span<const Offset> neighbor_offsets() const noexcept { return offsets_; }

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    const auto [x, y, z] = coords(v);
    for (const Offset& o : offsets_) {
      const std::int64_t xx = x + o.dx, yy = y + o.dy, zz = z + o.dz;
      if (xx < 0 || yy < 0 || zz < 0 || xx >= dims_[0] || yy >= dims_[1] ||
          zz >= dims_[2])
        continue;
      f(index(xx, yy, zz));
    }
  }

  /// Dimensions and spacing agree; connectivity is compared separately.
  bool same_shape(const GridSpec& other) const noexcept {
    return dims_ == other.dims_ && spacing_ == other.spacing_;
  }
  bool operator==(const GridSpec& other) const noexcept {
    return same_shape(other) && connectivity_ == other.connectivity_;
  }

 private:
  std::array<std::int64_t, 3> dims_;
  std::array<double, 3> spacing_;
  Connectivity connectivity_;
  std::vector<Offset> offsets_;
};

Connectivity default_connectivity(const std::array<std::int64_t, 3>& dims) noexcept;

}  // namespace timt
