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

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "timt/error.hpp"
#include "timt/io/fixtures.hpp"

namespace timt::tools {

std::string_view to_string(Measure m) noexcept {
  return m == Measure::similarity ? "similarity" : "distance";
}

std::optional<Measure> parse_measure(std::string_view name) noexcept {
  if (name == "distance") return Measure::distance;
  if (name == "similarity") return Measure::similarity;
  return std::nullopt;
}

ScalarField trait_field(const TraitExpr& trait, const MultiField& mf, Measure measure) {
  if (measure == Measure::distance) return induced_distance_field(trait, mf);
  validate(trait, &mf);
  const auto* point = trait.root.op == TraitOp::leaf ? std::get_if<PointTrait>(&*trait.root.primitive) : nullptr;
  if (!point) fail(ErrorCode::invalid_argument, "similarity measure needs a single point trait");
  const MultiField space = assemble_attribute_space(mf, point->channels);
  return similarity_to_distance(similarity_field(point->coords, space).field);
}

MergeTree build_tree(const ScalarField& field, const TreeOptions& options) {
  MergeTree t = compute_merge_tree(field, options.superlevel);
  if (options.simplify_metric) t = simplify(t, *options.simplify_metric, options.simplify_threshold);
  return t;
}

nlohmann::json simplification_json(const TreeOptions& options) {
  if (!options.simplify_metric) return nullptr;
  const double th = options.simplify_threshold;
  return {{"metric", std::string(to_string(*options.simplify_metric))},
          {"threshold", std::isinf(th) ? nlohmann::json("inf") : nlohmann::json(th)}};
}

Segmentation segment_field(const ScalarField& field, const QuerySpec& spec) {
  spec.validate();
  return run_query(field, compute_merge_tree(field), spec);
}

LearnedDictionary learn_dictionary(const MultiField& mf, const LearnOptions& options) {
  const std::vector<std::string> channels = options.channels.empty() ? io::attribute_channels(mf) : options.channels;
  MultiField space = assemble_attribute_space(mf, channels);
  KsvdResult r = ksvd_learn(attribute_matrix(space), options.ksvd);
  r.dictionary.channels = space.channel_names();
  for (const auto& c : space.channels()) r.dictionary.provenance.push_back(c.provenance);
  return {std::move(r.dictionary), std::move(r.codes), std::move(space)};
}

nlohmann::json channel_stats(const MultiField& mf) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : mf.channels()) {
    const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
    double mean = 0;
    for (double v : c.values) mean += v;
    mean /= static_cast<double>(c.values.size());
    double var = 0;
    for (double v : c.values) var += (v - mean) * (v - mean);
    out.push_back({{"name", c.name},
                   {"unit", c.unit},
                   {"min", *lo},
                   {"max", *hi},
                   {"mean", mean},
                   {"sd", std::sqrt(var / static_cast<double>(c.values.size()))}});
  }
  return out;
}

nlohmann::json density_scatterplot(const MultiField& mf, const std::string& x, const std::string& y, int bins) {
  if (bins < 1 || bins > 4096) fail(ErrorCode::invalid_argument, "bins must lie in [1, 4096]");
  const auto& cx = mf.channel(mf.require(x)).values;
  const auto& cy = mf.channel(mf.require(y)).values;
  const auto [xlo, xhi] = std::minmax_element(cx.begin(), cx.end());
  const auto [ylo, yhi] = std::minmax_element(cy.begin(), cy.end());
  const auto bin = [bins](double v, double lo, double hi) {
    if (hi <= lo) return 0;
    return std::clamp(static_cast<int>((v - lo) / (hi - lo) * bins), 0, bins - 1);
  };
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < cx.size(); ++i)
    ++counts[static_cast<std::size_t>(bin(cy[i], *ylo, *yhi)) * static_cast<std::size_t>(bins) +
             static_cast<std::size_t>(bin(cx[i], *xlo, *xhi))];
  return {{"kind", "sampled_density"},
          {"x", {{"channel", x}, {"min", *xlo}, {"max", *xhi}}},
          {"y", {{"channel", y}, {"min", *ylo}, {"max", *yhi}}},
          {"bins", {bins, bins}},
          {"dtype", "u32"},
          {"order", "row-major, x bin fastest"},
          {"samples", cx.size()},
          {"counts", counts}};
}

SliceShape slice_vertices(const GridSpec& grid, std::string_view axis, std::int64_t index) {
  int a = axis == "x" ? 0 : axis == "y" ? 1 : axis == "z" ? 2 : -1;
  if (a < 0) fail(ErrorCode::invalid_argument, "axis must be x, y or z");
  const auto& d = grid.dims();
  if (index < 0 || index >= d[a])
    fail(ErrorCode::invalid_argument, "slice index " + std::to_string(index) + " outside [0, " +
                                          std::to_string(d[a]) + ")");
  const int u = a == 0 ? 1 : 0, v = a == 2 ? 1 : 2;
  SliceShape s{d[u], d[v], {}};
  s.vertices.reserve(static_cast<std::size_t>(s.width * s.height));
  std::array<std::int64_t, 3> c{};
  c[a] = index;
  for (std::int64_t j = 0; j < s.height; ++j)
    for (std::int64_t i = 0; i < s.width; ++i) {
      c[u] = i;
      c[v] = j;
      s.vertices.push_back(grid.index(c[0], c[1], c[2]));
    }
  return s;
}

}  // namespace timt::tools
