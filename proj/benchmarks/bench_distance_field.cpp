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

#include <benchmark/benchmark.h>

#include "timt/io/fixtures.hpp"
#include "timt/traits.hpp"

namespace {

const timt::MultiField& field() {
  static const timt::MultiField mf = timt::io::smooth_random_multifield({64, 64, 32}, 4, 3);
  return mf;
}

void BM_PointTrait(benchmark::State& state) {
  const auto trait = timt::make_trait(timt::PointTrait{{"f0", "f1", "f2", "f3"}, {0.1, -0.2, 0.3, 0.0}});
  for (auto _ : state) benchmark::DoNotOptimize(timt::induced_distance_field(trait, field()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field().vertex_count()));
}
BENCHMARK(BM_PointTrait)->Unit(benchmark::kMillisecond);

void BM_PolygonTrait(benchmark::State& state) {
  const auto trait = timt::make_trait(timt::PolygonTrait{{"f0", "f1"}, {{-0.5, -0.5}, {0.5, -0.4}, {0.6, 0.5}, {-0.4, 0.6}}});
  for (auto _ : state) benchmark::DoNotOptimize(timt::induced_distance_field(trait, field()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field().vertex_count()));
}
BENCHMARK(BM_PolygonTrait)->Unit(benchmark::kMillisecond);

void BM_CombinedTrait(benchmark::State& state) {
  timt::TraitExpr t;
  t.root = timt::TraitNode::all_of({timt::TraitNode::leaf(timt::BoxTrait{{"f0", "f1"}, {-0.5, -0.5}, {0.5, 0.5}}),
                                    timt::TraitNode::complement(timt::TraitNode::leaf(
                                        timt::SegmentTrait{{"f2", "f3"}, {-1, 0}, {1, 0}}))});
  for (auto _ : state) benchmark::DoNotOptimize(timt::induced_distance_field(t, field()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field().vertex_count()));
}
BENCHMARK(BM_CombinedTrait)->Unit(benchmark::kMillisecond);

}  // namespace
