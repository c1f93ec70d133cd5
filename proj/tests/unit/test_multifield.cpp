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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "timt/error.hpp"
#include "timt/multifield.hpp"
#include "timt/tensor.hpp"

using namespace timt;

namespace {

MultiField line(std::vector<double> v, const std::string& name = "v") {
  MultiField mf(GridSpec({static_cast<std::int64_t>(v.size()), 1, 1}));
  mf.add_channel({name, "", std::move(v), {}});
  return mf;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("channel validation") {
  MultiField mf(GridSpec({2, 2, 1}));
  mf.add_channel({"a", "m", {1, 2, 3, 4}, {}});
  CHECK(mf.vertex_count() == 4);
  CHECK(code_of([&] { mf.add_channel({"a", "", {1, 2, 3, 4}, {}}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { mf.add_channel({"b", "", {1, 2, 3}, {}}); }) == ErrorCode::size_mismatch);
  CHECK(code_of([&] { mf.add_channel({"c", "", {1, NAN, 3, 4}, {}}); }) == ErrorCode::non_finite);
  CHECK(code_of([&] { (void)mf.require("zz"); }) == ErrorCode::unknown_channel);
  CHECK(mf.attribute_vector(2) == std::vector<double>{3});
}

TEST_CASE("scaling: minmax endpoints, identity, zscore") {
  const MultiField mf = line({0, 5, 10});
  const std::vector<std::string> sel{"v"};
  const Scaling mm[] = {Scaling::minmax};
  const MultiField a = assemble_attribute_space(mf, sel, mm);
  CHECK(a.channel(0).values == std::vector<double>{0, 0.5, 1});
  CHECK(a.channel(0).provenance.kind == ProvenanceKind::normalized);
  CHECK(a.channel(0).provenance.params == std::vector<double>{0, 10});

  const MultiField id = assemble_attribute_space(mf, sel);
  CHECK(id.channel(0).values == mf.channel(0).values);

  const Scaling zs[] = {Scaling::zscore};
  const MultiField z = assemble_attribute_space(line({1, 2, 3}), sel, zs);
  const auto& v = z.channel(0).values;
  const double mean = (v[0] + v[1] + v[2]) / 3;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  CHECK(std::abs(mean) <= 1e-15);
  CHECK(std::sqrt(ss / 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("degenerate and unknown channels") {
  const std::vector<std::string> sel{"v"};
  const Scaling zs[] = {Scaling::zscore};
  CHECK(code_of([&] { assemble_attribute_space(line({2, 2, 2}), sel, zs); }) == ErrorCode::degenerate_channel);
  const Scaling mm[] = {Scaling::minmax};
  CHECK(code_of([&] { assemble_attribute_space(line({2, 2, 2}), sel, mm); }) == ErrorCode::degenerate_channel);
  const std::vector<std::string> bad{"w"};
  CHECK(code_of([&] { assemble_attribute_space(line({1, 2}), bad); }) == ErrorCode::unknown_channel);
}

TEST_CASE("selection with scaling none is idempotent") {
  MultiField mf(GridSpec({3, 1, 1}));
  mf.add_channel({"a", "", {1, 2, 3}, {}});
  mf.add_channel({"b", "", {4, 5, 6}, {}});
  mf.add_channel({"c", "", {7, 8, 9}, {}});
  const std::vector<std::string> sel{"c", "a"};
  const MultiField once = assemble_attribute_space(mf, sel);
  const MultiField twice = assemble_attribute_space(once, sel);
  CHECK(once.channel_names() == sel);
  for (std::size_t i = 0; i < 2; ++i) CHECK(once.channel(i).values == twice.channel(i).values);
}

namespace {

MultiField tensor_field(const std::vector<Sym3Tensor>& ts) {
  MultiField mf(GridSpec({static_cast<std::int64_t>(ts.size()), 1, 1}));
  std::vector<double> c[6];
  for (const auto& t : ts) {
    c[0].push_back(t.xx);
    c[1].push_back(t.yy);
    c[2].push_back(t.zz);
    c[3].push_back(t.xy);
    c[4].push_back(t.xz);
    c[5].push_back(t.yz);
  }
  const char* names[] = {"xx", "yy", "zz", "xy", "xz", "yz"};
  for (int i = 0; i < 6; ++i) mf.add_channel({names[i], "", c[i], {}});
  return mf;
}

const std::vector<std::string> kTensor{"xx", "yy", "zz", "xy", "xz", "yz"};

}  // namespace

TEST_CASE("derived channels on constant fields") {
  const MultiField t = tensor_field(std::vector<Sym3Tensor>(5, Sym3Tensor{3, 2, 1, 0, 0, 0}));
  const MultiField cl = derive_channel(t, DerivedKind::c_l, kTensor);
  for (double v : cl.channel("c_l").values) CHECK(v == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(cl.channel("c_l").provenance.kind == ProvenanceKind::derived);

  MultiField vec(GridSpec({4, 1, 1}));
  vec.add_channel({"u", "", {3, 3, 3, 3}, {}});
  vec.add_channel({"v", "", {4, 4, 4, 4}, {}});
  vec.add_channel({"w", "", {0, 0, 0, 0}, {}});
  const MultiField mag = derive_channel(vec, DerivedKind::vec_magnitude, std::vector<std::string>{"u", "v", "w"}, "speed");
  CHECK(mag.channel("speed").values == std::vector<double>{5, 5, 5, 5});
}

TEST_CASE("derived channels match pointwise scalar ops") {
  std::mt19937_64 rng(12);
  std::vector<Sym3Tensor> ts;
  for (int i = 0; i < 1000; ++i) ts.push_back(oracle::random_spd(rng));
  MultiField mf = tensor_field(ts);
  for (auto k : {DerivedKind::eig1, DerivedKind::eig2, DerivedKind::eig3, DerivedKind::c_l, DerivedKind::c_p,
                 DerivedKind::c_s, DerivedKind::max_shear})
    mf = derive_channel(mf, k, kTensor);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const EigenTriple e = sym3_eigenvalues(ts[i]);
    const WestinMeasures w = westin_measures(e);
    CHECK(mf.channel("eig1").values[i] == e.l1);
    CHECK(mf.channel("eig2").values[i] == e.l2);
    CHECK(mf.channel("eig3").values[i] == e.l3);
    CHECK(mf.channel("eig1").values[i] >= mf.channel("eig2").values[i]);
    CHECK(mf.channel("eig2").values[i] >= mf.channel("eig3").values[i]);
    CHECK(mf.channel("c_l").values[i] == w.linear);
    CHECK(mf.channel("c_p").values[i] == w.planar);
    CHECK(mf.channel("c_s").values[i] == w.spherical);
    CHECK(mf.channel("max_shear").values[i] == e.l1 - e.l3);
  }
}

TEST_CASE("derive_channel errors") {
  const MultiField t = tensor_field({{1, 0, -1, 0, 0, 0}, {1, 1, 1, 0, 0, 0}});
  CHECK(code_of([&] { derive_channel(t, DerivedKind::eig1, std::vector<std::string>{"xx"}); }) ==
        ErrorCode::invalid_argument);
  try {
    derive_channel(t, DerivedKind::c_s, kTensor);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_trace);
    CHECK(std::string(e.what()).find('0') != std::string::npos);
  }
  CHECK(parse_derived_kind("max_shear") == DerivedKind::max_shear);
}
