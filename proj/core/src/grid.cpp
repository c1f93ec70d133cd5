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

#include "timt/grid.hpp"

#include <cmath>
#include <cstdlib>

#include "timt/error.hpp"

namespace timt {

std::string_view to_string(Connectivity c) noexcept {
  switch (c) {
    case Connectivity::face6: return "face6";
    case Connectivity::vertex26: return "vertex26";
    case Connectivity::edge4: return "edge4";
    case Connectivity::vertex8: return "vertex8";
  }
  return "face6";
}

std::optional<Connectivity> parse_connectivity(std::string_view name) noexcept {
  if (name == "face6") return Connectivity::face6;
  if (name == "vertex26") return Connectivity::vertex26;
  if (name == "edge4") return Connectivity::edge4;
  if (name == "vertex8") return Connectivity::vertex8;
  return std::nullopt;
}

Connectivity default_connectivity(const std::array<std::int64_t, 3>& dims) noexcept {
  return dims[2] == 1 ? Connectivity::edge4 : Connectivity::face6;
}

namespace {

Connectivity normalize(Connectivity c, bool is_2d) {
  if (is_2d) {
    if (c == Connectivity::face6) return Connectivity::edge4;
    if (c == Connectivity::vertex26) return Connectivity::vertex8;
    return c;
  }
  if (c == Connectivity::edge4 || c == Connectivity::vertex8)
    fail(ErrorCode::invalid_argument,
         std::string("connectivity ") + std::string(to_string(c)) +
             " requires a 2D grid (nz == 1)");
  return c;
}

std::vector<Offset> make_offsets(Connectivity c) {
  std::vector<Offset> out;
  const int zr = (c == Connectivity::edge4 || c == Connectivity::vertex8) ? 0 : 1;
  const bool full = (c == Connectivity::vertex26 || c == Connectivity::vertex8);
  for (int dz = -zr; dz <= zr; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (manhattan == 0) continue;
        if (!full && manhattan != 1) continue;
        out.push_back({dx, dy, dz});
      }
  return out;
}

}  // namespace

GridSpec::GridSpec(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                   std::optional<Connectivity> connectivity)
    : dims_(dims), spacing_(spacing) {
  for (int a = 0; a < 3; ++a) {
    if (dims_[a] < 1)
      fail(ErrorCode::invalid_argument, "grid dimensions must be positive");
    if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
      fail(ErrorCode::invalid_argument, "grid spacing must be finite and positive");
  }
  connectivity_ = normalize(connectivity.value_or(default_connectivity(dims_)), is_2d());
  offsets_ = make_offsets(connectivity_);
}

GridSpec GridSpec::with_connectivity(Connectivity c) const {
  return GridSpec(dims_, spacing_, c);
}

}  // namespace timt
