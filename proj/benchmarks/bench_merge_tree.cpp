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
#include "timt/merge_tree.hpp"
#include "timt/queries.hpp"

namespace {

timt::ScalarField smooth_field(std::int64_t n) {
  const timt::MultiField mf = timt::io::smooth_random_multifield({n, n, n}, 1, 7);
  return {mf.grid(), mf.channel(0).values};
}

void BM_MergeTree(benchmark::State& state) {
  const timt::ScalarField h = smooth_field(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(timt::compute_merge_tree(h));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.size()));
}
BENCHMARK(BM_MergeTree)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BranchSegmentation(benchmark::State& state) {
  const timt::ScalarField h = smooth_field(state.range(0));
  const timt::MergeTree t = timt::compute_merge_tree(h);
  timt::QuerySpec spec;
  spec.threshold = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(timt::run_query(h, t, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.size()));
}
BENCHMARK(BM_BranchSegmentation)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
