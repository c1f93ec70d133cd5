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
#include <string_view>

#include "timt/multifield.hpp"

namespace timt::io {

enum class FixtureKind { crossing_stripes_2d, two_blob_3d, tensor_block };
std::string_view to_string(FixtureKind k) noexcept;
std::optional<FixtureKind> parse_fixture_kind(std::string_view name) noexcept;

/// Unset fields take the kind's defaults:
///   crossing_stripes_2d  64x64, 8 channels, noise 0.02, stripe width ny/4
///   two_blob_3d          24x24x16, noise 0
///   tensor_block         20x20x12, noise 0
struct FixtureParams {
  std::optional<std::array<std::int64_t, 3>> dims;
  std::optional<std::size_t> channels;
  std::optional<double> noise;
  std::optional<double> width;
};

/// Ground-truth labels of crossing_stripes_2d.
inline constexpr int kBackgroundClass = 0;
inline constexpr int kStripeA = 1;
inline constexpr int kStripeB = 2;

/// crossing_stripes_2d: channels c0..c{M-1} hold a direction profile peaked
/// along x in the horizontal stripe A and along y in the vertical stripe B
/// (A wins where they cross), flat in the background; channel "label" holds
/// the class with provenance detail "ground_truth".
/// two_blob_3d: channel "a" = min of two offset quadratic bowls, channel "b"
/// a smooth wave.
/// tensor_block: stress tensor (compression positive) of two surface point
/// loads on an elastic half-space, channels sxx syy szz sxy sxz syz.
MultiField generate_fixture(FixtureKind kind, const FixtureParams& params, std::uint64_t seed);

/// Sum of a few random low-frequency sinusoids per channel.
MultiField smooth_random_multifield(std::array<std::int64_t, 3> dims, std::size_t channels, std::uint64_t seed);

/// Channels that are not ground truth, in order.
std::vector<std::string> attribute_channels(const MultiField& mf);

}  // namespace timt::io
