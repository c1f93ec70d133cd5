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

#include "timt/io/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "timt/error.hpp"

namespace timt::io {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoisson = 0.3;

void check_dims(const std::array<std::int64_t, 3>& d, std::int64_t min_xy, bool flat, std::string_view kind) {
  if (d[0] < min_xy || d[1] < min_xy || (flat ? d[2] != 1 : d[2] < 2))
    fail(ErrorCode::invalid_argument, std::string(kind) + ": invalid dims " + std::to_string(d[0]) + "x" +
                                          std::to_string(d[1]) + "x" + std::to_string(d[2]));
}

double noise_of(const FixtureParams& p, double fallback) {
  const double n = p.noise.value_or(fallback);
  if (!(n >= 0) || !std::isfinite(n)) fail(ErrorCode::invalid_argument, "noise must be finite and >= 0");
  return n;
}

/// Direction profile over M angular bins, peaked at `peak` (radians, mod pi).
std::vector<double> profile(std::size_t m, double peak) {
  const double sigma = kPi / 8;
  std::vector<double> out(m);
  for (std::size_t c = 0; c < m; ++c) {
    double d = std::fmod(std::abs(kPi * static_cast<double>(c) / static_cast<double>(m) - peak), kPi);
    d = std::min(d, kPi - d);
    out[c] = 0.05 + std::exp(-d * d / (2 * sigma * sigma));
  }
  return out;
}

MultiField crossing_stripes(const FixtureParams& p, std::uint64_t seed) {
  const auto dims = p.dims.value_or(std::array<std::int64_t, 3>{64, 64, 1});
  check_dims(dims, 8, true, "crossing_stripes_2d");
  const std::size_t m = p.channels.value_or(8);
  if (m < 3) fail(ErrorCode::invalid_argument, "crossing_stripes_2d: channels must be >= 3");
  const double noise = noise_of(p, 0.02);
  const double width = p.width.value_or(static_cast<double>(dims[1]) / 4);
  if (!(width >= 1) || width * 2 > static_cast<double>(std::min(dims[0], dims[1])))
    fail(ErrorCode::invalid_argument, "crossing_stripes_2d: width must lie in [1, min(nx, ny) / 2]");

  const GridSpec grid(dims);
  const std::size_t n = grid.vertex_count();
  const auto a = profile(m, 0.0);
  const auto b = profile(m, kPi / 2);
  const std::vector<double> flat(m, 0.5);
  const double cx = static_cast<double>(dims[0] - 1) / 2, cy = static_cast<double>(dims[1] - 1) / 2;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  std::vector<std::vector<double>> values(m, std::vector<double>(n));
  std::vector<double> label(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto [x, y, z] = grid.coords(static_cast<VertexId>(v));
    int cls = kBackgroundClass;
    if (std::abs(static_cast<double>(y) - cy) < width / 2) cls = kStripeA;
    else if (std::abs(static_cast<double>(x) - cx) < width / 2) cls = kStripeB;
    const auto& sig = cls == kStripeA ? a : cls == kStripeB ? b : flat;
    for (std::size_t c = 0; c < m; ++c) values[c][v] = sig[c] + (noise > 0 ? gauss(rng) : 0.0);
    label[v] = cls;
  }
  MultiField mf(grid);
  for (std::size_t c = 0; c < m; ++c) mf.add_channel({"c" + std::to_string(c), "", std::move(values[c]), {}});
  mf.add_channel({"label", "", std::move(label), {ProvenanceKind::raw, "ground_truth", {}}});
  return mf;
}

MultiField two_blob(const FixtureParams& p, std::uint64_t seed) {
  const auto dims = p.dims.value_or(std::array<std::int64_t, 3>{24, 24, 16});
  check_dims(dims, 8, false, "two_blob_3d");
  if (dims[2] < 8) fail(ErrorCode::invalid_argument, "two_blob_3d: nz must be >= 8");
  const double noise = noise_of(p, 0.0);
  const GridSpec grid(dims);
  const double nx = static_cast<double>(dims[0]), ny = static_cast<double>(dims[1]), nz = static_cast<double>(dims[2]);
  const std::array<double, 3> c1{0.3 * nx + 0.17, 0.35 * ny + 0.21, 0.5 * nz + 0.13};
  const std::array<double, 3> c2{0.7 * nx - 0.09, 0.65 * ny + 0.07, 0.45 * nz + 0.31};
  const double s2 = std::pow(std::max({nx, ny, nz}) / 4, 2);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  const std::size_t n = grid.vertex_count();
  std::vector<double> a(n), b(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto [x, y, z] = grid.coords(static_cast<VertexId>(v));
    const std::array<double, 3> q{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    double q1 = 0, q2 = 0;
    for (int k = 0; k < 3; ++k) {
      q1 += (q[k] - c1[k]) * (q[k] - c1[k]);
      q2 += (q[k] - c2[k]) * (q[k] - c2[k]);
    }
    a[v] = std::min(q1 / s2, q2 / s2 + 0.25);
    b[v] = std::sin(2 * kPi * q[0] / nx) * std::cos(2 * kPi * q[1] / ny) + q[2] / nz;
    if (noise > 0) {
      a[v] += gauss(rng);
      b[v] += gauss(rng);
    }
  }
  MultiField mf(grid);
  mf.add_channel({"a", "", std::move(a), {}});
  mf.add_channel({"b", "", std::move(b), {}});
  return mf;
}

/// Stress of a unit point load at the origin of an elastic half-space,
/// depth z > 0, tension positive: xx yy zz xy xz yz.
std::array<double, 6> boussinesq(double x, double y, double z) {
  const double r2 = x * x + y * y;
  const double rr = std::sqrt(r2 + z * z);
  const double r3 = rr * rr * rr, r5 = r3 * rr * rr;
  const double k = 1 / (2 * kPi), g = 1 - 2 * kPoisson;
  const double w = (1 - z / rr) / r2;
  return {k * (g * (w * (x * x - y * y) / r2 + z * y * y / (r3 * r2)) - 3 * z * x * x / r5),
          k * (g * (w * (y * y - x * x) / r2 + z * x * x / (r3 * r2)) - 3 * z * y * y / r5),
          -3 * k * z * z * z / r5,
          k * (g * (w * x * y / r2 - x * y * z / (r3 * r2)) - 3 * x * y * z / r5),
          -3 * k * x * z * z / r5,
          -3 * k * y * z * z / r5};
}

MultiField tensor_block(const FixtureParams& p, std::uint64_t seed) {
  const auto dims = p.dims.value_or(std::array<std::int64_t, 3>{20, 20, 12});
  check_dims(dims, 4, false, "tensor_block");
  const double noise = noise_of(p, 0.0);
  const GridSpec grid(dims);
  const double nx = static_cast<double>(dims[0]), ny = static_cast<double>(dims[1]);
  const std::array<std::array<double, 2>, 2> loads{{{0.3 * nx + 0.37, 0.5 * ny + 0.29}, {0.7 * nx - 0.41, 0.5 * ny - 0.23}}};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  const std::size_t n = grid.vertex_count();
  std::array<std::vector<double>, 6> t;
  for (auto& c : t) c.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto [x, y, z] = grid.coords(static_cast<VertexId>(v));
    std::array<double, 6> s{};
    for (const auto& l : loads) {
      const auto one = boussinesq(static_cast<double>(x) - l[0], static_cast<double>(y) - l[1], static_cast<double>(z) + 1);
      for (int c = 0; c < 6; ++c) s[c] -= one[c];
    }
    for (int c = 0; c < 6; ++c) t[c][v] = s[c] + (noise > 0 ? gauss(rng) : 0.0);
  }
  MultiField mf(grid);
  const char* names[6] = {"sxx", "syy", "szz", "sxy", "sxz", "syz"};
  for (int c = 0; c < 6; ++c) mf.add_channel({names[c], "", std::move(t[c]), {}});
  return mf;
}

}  // namespace

std::string_view to_string(FixtureKind k) noexcept {
  switch (k) {
    case FixtureKind::crossing_stripes_2d: return "crossing_stripes_2d";
    case FixtureKind::two_blob_3d: return "two_blob_3d";
    case FixtureKind::tensor_block: return "tensor_block";
  }
  return "crossing_stripes_2d";
}

std::optional<FixtureKind> parse_fixture_kind(std::string_view name) noexcept {
  for (auto k : {FixtureKind::crossing_stripes_2d, FixtureKind::two_blob_3d, FixtureKind::tensor_block})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

MultiField generate_fixture(FixtureKind kind, const FixtureParams& params, std::uint64_t seed) {
  if (params.channels && kind != FixtureKind::crossing_stripes_2d)
    fail(ErrorCode::invalid_argument, std::string(to_string(kind)) + ": channel count is fixed");
  if (params.width && kind != FixtureKind::crossing_stripes_2d)
    fail(ErrorCode::invalid_argument, std::string(to_string(kind)) + ": width is not a parameter");
  switch (kind) {
    case FixtureKind::crossing_stripes_2d: return crossing_stripes(params, seed);
    case FixtureKind::two_blob_3d: return two_blob(params, seed);
    case FixtureKind::tensor_block: return tensor_block(params, seed);
  }
  fail(ErrorCode::invalid_argument, "unknown fixture kind");
}

MultiField smooth_random_multifield(std::array<std::int64_t, 3> dims, std::size_t channels, std::uint64_t seed) {
  const GridSpec grid(dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MultiField mf(grid);
  const std::size_t n = grid.vertex_count();
  for (std::size_t c = 0; c < channels; ++c) {
    struct Wave {
      double amp, kx, ky, kz, phase;
    };
    std::vector<Wave> waves(4);
    for (auto& w : waves) {
      w.amp = 0.5 + unit(rng);
      w.kx = 2 * kPi * (0.5 + 1.5 * unit(rng)) / static_cast<double>(dims[0]);
      w.ky = 2 * kPi * (0.5 + 1.5 * unit(rng)) / static_cast<double>(dims[1]);
      w.kz = dims[2] > 1 ? 2 * kPi * (0.5 + 1.5 * unit(rng)) / static_cast<double>(dims[2]) : 0.0;
      w.phase = 2 * kPi * unit(rng);
    }
    std::vector<double> values(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto [x, y, z] = grid.coords(static_cast<VertexId>(v));
      double s = 0;
      for (const auto& w : waves)
        s += w.amp * std::sin(w.kx * static_cast<double>(x) + w.ky * static_cast<double>(y) +
                              w.kz * static_cast<double>(z) + w.phase);
      values[v] = s;
    }
    mf.add_channel({"f" + std::to_string(c), "", std::move(values), {}});
  }
  return mf;
}

std::vector<std::string> attribute_channels(const MultiField& mf) {
  std::vector<std::string> out;
  for (const auto& c : mf.channels())
    if (c.provenance.detail != "ground_truth") out.push_back(c.name);
  return out;
}

}  // namespace timt::io
