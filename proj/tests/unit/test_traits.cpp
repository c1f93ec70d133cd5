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
#include <limits>
#include <numeric>
#include <random>

#include "timt/error.hpp"
#include "timt/io/fixtures.hpp"
#include "timt/traits.hpp"

using namespace timt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Distance from a 2D point to the boundary of a rectangle by dense sampling.
double box_distance_sampled(double lo0, double hi0, double lo1, double hi1, double x, double y) {
  if (x >= lo0 && x <= hi0 && y >= lo1 && y <= hi1) return 0;
  const int n = 20000;
  double best = kInf;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double px = lo0 + t * (hi0 - lo0), py = lo1 + t * (hi1 - lo1);
    for (auto [qx, qy] : {std::pair{px, lo1}, std::pair{px, hi1}, std::pair{lo0, py}, std::pair{hi0, py}})
      best = std::min(best, std::hypot(x - qx, y - qy));
  }
  return best;
}

MultiField random_mf(std::array<std::int64_t, 3> dims, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  MultiField mf{GridSpec(dims)};
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> v(mf.vertex_count());
    for (auto& x : v) x = u(rng);
    mf.add_channel({"f" + std::to_string(c), "", v, {}});
  }
  return mf;
}

const TraitPrimitive unit_square = PolygonTrait{{"f0", "f1"}, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

}  // namespace

TEST_CASE("primitive distances") {
  const double origin[] = {0, 0};
  CHECK(primitive_distance(PointTrait{{"x", "y"}, {3, 4}}, origin) == 5.0);
  const double mid[] = {0.5, 0.5};
  CHECK(primitive_distance(unit_square, mid) == 0.0);
  const double far[] = {2, 2};
  CHECK(primitive_distance(BoxTrait{{"x", "y"}, {0, 0}, {1, 1}}, far) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const double seg_probe[] = {1, 1};
  CHECK(primitive_distance(SegmentTrait{{"x", "y"}, {0, 0}, {2, 0}}, seg_probe) == 1.0);
  const double poly_probe[] = {2, 0.5};
  CHECK(primitive_distance(unit_square, poly_probe) == 1.0);
}

TEST_CASE("box distance agrees with dense boundary sampling") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const double p[] = {u(rng), u(rng)};
    const double got = primitive_distance(BoxTrait{{"x", "y"}, {a, c}, {b, d}}, p);
    CHECK(std::abs(got - box_distance_sampled(a, b, c, d, p[0], p[1])) <= 1e-6);
  }
}

TEST_CASE("primitive validation") {
  CHECK_THROWS_AS(validate(TraitPrimitive{PolygonTrait{{"x", "y"}, {{0, 0}, {0, 1}, {1, 1}, {1, 0}}}}), Error);
  CHECK_THROWS_AS(validate(TraitPrimitive{PolygonTrait{{"x", "y"}, {{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}}}), Error);
  CHECK_THROWS_AS(validate(TraitPrimitive{PolygonTrait{{"x", "y"}, {{0, 0}, {1, 0}, {2, 0}}}}), Error);
  CHECK_THROWS_AS(validate(TraitPrimitive{BoxTrait{{"x"}, {2}, {1}}}), Error);
  CHECK_THROWS_AS(validate(TraitPrimitive{PointTrait{{"x", "y"}, {1}}}), Error);
  CHECK_THROWS_AS(validate(TraitPrimitive{PointTrait{{"x"}, {NAN}}}), Error);
  CHECK_NOTHROW(validate(unit_square));
  const MultiField mf = random_mf({2, 2, 1}, 1, 1);
  try {
    validate(make_trait(PointTrait{{"nope"}, {0}}), &mf);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_channel);
  }
}

TEST_CASE("induced distance field: preimage and full-range box") {
  const MultiField mf = random_mf({4, 4, 2}, 3, 8);
  for (VertexId k : {0, 7, 31}) {
    const auto a = mf.attribute_vector(k);
    const ScalarField h = induced_distance_field(make_trait(PointTrait{{"f0", "f1", "f2"}, a}), mf);
    CHECK(h.meaning == FieldMeaning::distance);
    CHECK(h.values[static_cast<std::size_t>(k)] == 0.0);
    for (std::size_t v = 0; v < h.size(); ++v)
      if (static_cast<VertexId>(v) != k) CHECK(h.values[v] > 0.0);
  }
  const ScalarField full = induced_distance_field(make_trait(BoxTrait{{"f0", "f1"}, {-1, -1}, {1, 1}}), mf);
  CHECK(std::all_of(full.values.begin(), full.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("open box sides are capped to the data range") {
  const MultiField mf = random_mf({4, 4, 1}, 2, 2);
  const TraitEvaluation e = evaluate_trait(make_trait(BoxTrait{{"f0", "f1"}, {0.0, -kInf}, {kInf, 0.0}}), mf);
  CHECK(e.caps.size() == 2);
  for (std::size_t v = 0; v < mf.vertex_count(); ++v) {
    const bool inside = mf.channel(0).values[v] >= 0 && mf.channel(1).values[v] <= 0;
    CHECK((e.field.values[v] == 0.0) == inside);
  }
}

TEST_CASE("induced field equals per-vertex evaluation for random traits") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  const MultiField mf = random_mf({4, 4, 2}, 3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TraitPrimitive> prims = {
        PointTrait{{"f0", "f2"}, {u(rng), u(rng)}},
        SegmentTrait{{"f1", "f2", "f0"}, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}},
        BoxTrait{{"f2"}, {-0.2}, {0.3}},
        PolygonTrait{{"f0", "f1"}, {{-0.5, -0.5}, {0.5, -0.4}, {0.1, 0.6}}},
    };
    for (const auto& p : prims) {
      const ScalarField h = induced_distance_field(make_trait(p), mf);
      for (std::size_t v = 0; v < mf.vertex_count(); ++v) {
        std::vector<double> a;
        for (const auto& ch : subspace(p)) a.push_back(mf.channel(ch).values[v]);
        CHECK(h.values[v] == primitive_distance(p, a));
      }
    }
  }
}

TEST_CASE("boolean composition under both semantics") {
  const GridSpec g({2, 1, 1});
  const ScalarField h1{g, {0, 2}, FieldMeaning::distance};
  const ScalarField h2{g, {1, 0}, FieldMeaning::distance};
  const ScalarField same[] = {h1, h1};
  CHECK(combine_fields(CombineOp::any_of, same).field.values == h1.values);
  const ScalarField both[] = {h1, h2};
  CHECK(combine_fields(CombineOp::all_of, both).field.values == std::vector<double>{1, 2});
  CHECK(combine_fields(CombineOp::all_of, both, CombineSemantics::paper_literal).field.values ==
        std::vector<double>{0, 0});
  CHECK(combine_fields(CombineOp::any_of, both, CombineSemantics::paper_literal).field.values ==
        std::vector<double>{1, 2});
  const ScalarField one[] = {h1};
  CHECK(combine_fields(CombineOp::complement, one).field.values == std::vector<double>{2, 0});
  const ScalarField l2 = combine_fields(CombineOp::product_l2, both).field;
  CHECK(l2.values[0] == 1.0);
  CHECK(l2.values[1] == 2.0);

  const ScalarField other{GridSpec({3, 1, 1}), {0, 0, 0}, FieldMeaning::distance};
  const ScalarField mixed[] = {h1, other};
  CHECK_THROWS_AS(combine_fields(CombineOp::any_of, mixed), Error);
}

TEST_CASE("expression evaluation matches manual composition") {
  const MultiField mf = random_mf({5, 4, 1}, 2, 5);
  const TraitNode a = TraitNode::leaf(PointTrait{{"f0"}, {0.2}});
  const TraitNode b = TraitNode::leaf(BoxTrait{{"f1"}, {-0.1}, {0.4}});
  const TraitExpr expr{TraitNode::any_of({TraitNode::all_of({a, b}), TraitNode::complement(a)}), CombineSemantics::csg};
  const ScalarField h = induced_distance_field(expr, mf);
  const ScalarField ha = induced_distance_field(TraitExpr{a, CombineSemantics::csg}, mf);
  const ScalarField hb = induced_distance_field(TraitExpr{b, CombineSemantics::csg}, mf);
  const double amax = *std::max_element(ha.values.begin(), ha.values.end());
  for (std::size_t v = 0; v < h.size(); ++v)
    CHECK(h.values[v] == std::min(std::max(ha.values[v], hb.values[v]), amax - ha.values[v]));
}

TEST_CASE("cosine similarity and its distance") {
  MultiField mf(GridSpec({4, 1, 1}));
  mf.add_channel({"x", "", {2, 0, -1, 0}, {}});
  mf.add_channel({"y", "", {4, 1, -2, 0}, {}});
  const double atom[] = {1, 2};
  const SimilarityResult s = similarity_field(atom, mf);
  CHECK(s.field.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.field.values[2] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(s.zero_norm == 1);

  MultiField perp(GridSpec({1, 1, 1}));
  perp.add_channel({"x", "", {-2}, {}});
  perp.add_channel({"y", "", {1}, {}});
  CHECK(similarity_field(atom, perp).field.values[0] == 0.0);

  const ScalarField d = similarity_to_distance(ScalarField{GridSpec({2, 1, 1}), {1, -1}, FieldMeaning::similarity});
  CHECK(d.values == std::vector<double>{0, 2});
  CHECK(d.meaning == FieldMeaning::distance);
  const double zero[] = {0, 0};
  CHECK_THROWS_AS(similarity_field(zero, mf), Error);
}

TEST_CASE("similarity to distance reverses the vertex order") {
  const MultiField mf = random_mf({6, 6, 1}, 4, 9);
  const double atom[] = {0.3, -0.2, 0.9, 0.1};
  const ScalarField s = similarity_field(atom, mf).field;
  const ScalarField d = similarity_to_distance(s);
  std::vector<std::size_t> by_s(s.size()), by_d(s.size());
  std::iota(by_s.begin(), by_s.end(), 0);
  std::iota(by_d.begin(), by_d.end(), 0);
  std::sort(by_s.begin(), by_s.end(), [&](auto a, auto b) { return s.values[a] > s.values[b]; });
  std::sort(by_d.begin(), by_d.end(), [&](auto a, auto b) { return d.values[a] < d.values[b]; });
  CHECK(by_s == by_d);
}

TEST_CASE("Hausdorff distance between traits") {
  const TraitExpr p0 = make_trait(PointTrait{{"x", "y"}, {0, 0}});
  const TraitExpr p1 = make_trait(PointTrait{{"x", "y"}, {3, 4}});
  const HausdorffEstimate e = hausdorff_distance(p0, p1, 0.1);
  CHECK(e.exact);
  CHECK(e.distance == 5.0);
  CHECK(hausdorff_distance(p1, p1, 0.1).distance == 0.0);

  const double step = 0.01;
  const TraitExpr s0 = make_trait(SegmentTrait{{"x", "y"}, {0, 0}, {1, 2}});
  const TraitExpr s1 = make_trait(SegmentTrait{{"x", "y"}, {0.3, -0.4}, {1.3, 1.6}});
  const HausdorffEstimate hs = hausdorff_distance(s0, s1, step);
  CHECK(std::abs(hs.distance - 0.5) <= 2 * step);
  CHECK(hausdorff_distance(s0, s0, step).distance <= 2 * step);

  const TraitExpr b = make_trait(BoxTrait{{"x", "y"}, {0, 0}, {1, 1}});
  const TraitExpr pt = make_trait(PointTrait{{"x", "y"}, {3, 1}});
  CHECK(std::abs(hausdorff_distance(b, pt, step).distance - std::hypot(3.0, 1.0)) <= 2 * step);

  const TraitExpr other = make_trait(PointTrait{{"x", "z"}, {0, 0}});
  CHECK_THROWS_AS(hausdorff_distance(p0, other, step), Error);
  const TraitExpr neg{TraitNode::complement(TraitNode::leaf(PointTrait{{"x", "y"}, {0, 0}})), CombineSemantics::csg};
  CHECK_THROWS_AS(hausdorff_distance(neg, p0, step), Error);
}

TEST_CASE("distance fields are non-negative on fixtures") {
  const MultiField mf = io::smooth_random_multifield({8, 8, 4}, 3, 5);
  const TraitExpr t{TraitNode::all_of({TraitNode::leaf(PointTrait{{"f0"}, {0.1}}),
                                       TraitNode::complement(TraitNode::leaf(BoxTrait{{"f1", "f2"}, {-1, -1}, {1, 1}}))}),
                    CombineSemantics::paper_literal};
  const ScalarField h = induced_distance_field(t, mf);
  CHECK(std::all_of(h.values.begin(), h.values.end(), [](double v) { return v >= 0; }));
}
