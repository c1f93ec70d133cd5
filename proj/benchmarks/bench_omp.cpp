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

#include <random>

#include "timt/dictionary.hpp"

namespace {

Eigen::MatrixXd random_atoms(Eigen::Index m, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Eigen::MatrixXd d(m, k);
  for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = n01(rng);
  d.colwise().normalize();
  return d;
}

void BM_Omp(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const int sparsity = static_cast<int>(state.range(1));
  const Eigen::MatrixXd d = random_atoms(m, 2 * m, 1);
  const Eigen::MatrixXd signals = random_atoms(m, 256, 2);
  Eigen::Index col = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(timt::omp_sparse_code(d, signals.col(col), sparsity));
    col = (col + 1) % signals.cols();
  }
}
BENCHMARK(BM_Omp)->Args({8, 1})->Args({8, 3})->Args({32, 4})->Args({64, 8});

void BM_Ksvd(benchmark::State& state) {
  const Eigen::MatrixXd data = random_atoms(8, static_cast<Eigen::Index>(state.range(0)), 3);
  timt::KsvdOptions opt;
  opt.atoms = 12;
  opt.sparsity = 2;
  opt.iterations = 5;
  opt.early_stop = false;
  for (auto _ : state) benchmark::DoNotOptimize(timt::ksvd_learn(data, opt));
}
BENCHMARK(BM_Ksvd)->Arg(1000)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace
