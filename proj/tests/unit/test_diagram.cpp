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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "timt/diagram.hpp"
#include "timt/error.hpp"

using namespace timt;

TEST_CASE("diagram of the hand-traced path") {
  const ScalarField f{GridSpec({4, 1, 1}), {0, 2, 1, 3}, FieldMeaning::generic};
  PersistenceDiagram d = persistence_diagram(compute_merge_tree(f));
  std::sort(d.begin(), d.end(), [](auto a, auto b) { return a.birth < b.birth; });
  CHECK(d == PersistenceDiagram{{0, 3}, {1, 2}});
}

TEST_CASE("bottleneck distance: trivial cases") {
  const PersistenceDiagram a{{0, 1}, {2, 5}};
  CHECK(bottleneck_distance(a, a) == 0.0);
  CHECK(bottleneck_distance({{0, 1}}, {}) == 0.5);
  CHECK(bottleneck_distance({}, {}) == 0.0);
  CHECK(bottleneck_distance({{0, 4}}, {{1, 4}}) == 1.0);
}

TEST_CASE("bottleneck distance equals brute force over all matchings") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 10), len(0, 4);
  std::uniform_int_distribution<int> size(0, 4);
  for (int trial = 0; trial < 60; ++trial) {
    auto make = [&](int n) {
      PersistenceDiagram d;
      for (int i = 0; i < n; ++i) {
        const double b = u(rng);
        d.push_back({b, b + len(rng)});
      }
      return d;
    };
    const PersistenceDiagram a = make(trial < 30 ? 4 : size(rng));
    const PersistenceDiagram b = make(trial < 30 ? 4 : size(rng));
    CHECK(bottleneck_distance(a, b) == doctest::Approx(oracle::bottleneck_bruteforce(a, b)).epsilon(1e-12));
    CHECK(bottleneck_distance(a, b) == bottleneck_distance(b, a));
  }
}

TEST_CASE("bottleneck distance is bounded by the sup-norm difference") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1), eps(-0.2, 0.2);
  const GridSpec g({5, 4, 3});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> h1(g.vertex_count()), h2(g.vertex_count());
    double sup = 0;
    for (std::size_t i = 0; i < h1.size(); ++i) {
      h1[i] = u(rng);
      h2[i] = h1[i] + eps(rng);
      sup = std::max(sup, std::abs(h1[i] - h2[i]));
    }
    const auto d1 = persistence_diagram(compute_merge_tree(ScalarField{g, h1, FieldMeaning::generic}));
    const auto d2 = persistence_diagram(compute_merge_tree(ScalarField{g, h2, FieldMeaning::generic}));
    CHECK(bottleneck_distance(d1, d2) <= sup + 1e-9);
  }
}

TEST_CASE("bottleneck input size is limited") {
  PersistenceDiagram big(kBottleneckPointLimit + 1, DiagramPoint{0, 1});
  try {
    bottleneck_distance(big, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::limit_exceeded);
  }
}
