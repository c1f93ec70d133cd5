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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "timt/grid.hpp"

namespace timt {

enum class ProvenanceKind { raw, derived, normalized };

/// Where a channel came from. `detail` names the derived kind or the scaling
/// method; `params` holds the scaling constants ({min, max} or {mean, sd}).
struct Provenance {
  ProvenanceKind kind = ProvenanceKind::raw;
  std::string detail;
  std::vector<double> params;

  bool operator==(const Provenance&) const = default;
};

std::string_view to_string(ProvenanceKind k) noexcept;

struct Channel {
  std::string name;
  std::string unit;
  std::vector<double> values;
  Provenance provenance;
};

/// The sampled map f: X -> A. Channel-major storage; the attribute vector of
/// vertex i is the column of the M x N matrix F at i.
class MultiField {
 public:
  explicit MultiField(GridSpec grid) : grid_(std::move(grid)) {}

  /// Validates size, finiteness and name uniqueness.
  void add_channel(Channel channel);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t vertex_count() const noexcept { return grid_.vertex_count(); }
  std::size_t channel_count() const noexcept { return channels_.size(); }
  std::span<const Channel> channels() const noexcept { return channels_; }
  const Channel& channel(std::size_t i) const { return channels_.at(i); }
  const Channel& channel(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const noexcept;
  std::size_t require(std::string_view name) const;
  std::vector<std::string> channel_names() const;

  std::vector<double> attribute_vector(VertexId v) const;
  MultiField with_connectivity(Connectivity c) const;

 private:
  GridSpec grid_;
  std::vector<Channel> channels_;
};

enum class Scaling { none, minmax, zscore };

std::string_view to_string(Scaling s) noexcept;
std::optional<Scaling> parse_scaling(std::string_view name) noexcept;

/// Selects and optionally rescales channels. `scaling` is either empty (all
/// none), a single entry (applied to every channel) or one entry per name.
MultiField assemble_attribute_space(const MultiField& mf,
                                    std::span<const std::string> selection,
                                    std::span<const Scaling> scaling = {});

enum class DerivedKind { eig1, eig2, eig3, c_l, c_p, c_s, max_shear, vec_magnitude };

std::string_view to_string(DerivedKind k) noexcept;
std::optional<DerivedKind> parse_derived_kind(std::string_view name) noexcept;

/// Appends one derived channel. Tensor kinds take six channel names in the
/// order xx, yy, zz, xy, xz, yz; vec_magnitude takes three.
MultiField derive_channel(const MultiField& mf, DerivedKind kind,
                          std::span<const std::string> inputs,
                          std::string output_name = {});

}  // namespace timt
