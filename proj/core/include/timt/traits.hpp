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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "timt/multifield.hpp"
#include "timt/scalar_field.hpp"

namespace timt {

/// Single attribute-space location; `coords` follow `channels`.
struct PointTrait {
  std::vector<std::string> channels;
  std::vector<double> coords;
};

struct SegmentTrait {
  std::vector<std::string> channels;
  std::vector<double> a, b;
};

/// Closed per-channel intervals. Infinite bounds denote open sides and are
/// capped to the channel data range when bound to a MultiField.
struct BoxTrait {
  std::vector<std::string> channels;
  std::vector<double> lo, hi;
};

/// Strictly convex polygon in a bivariate subspace, counter-clockwise.
struct PolygonTrait {
  std::array<std::string, 2> channels;
  std::vector<std::array<double, 2>> vertices;
};

using TraitPrimitive = std::variant<PointTrait, SegmentTrait, BoxTrait, PolygonTrait>;

/// Channel names of the subspace the primitive lives in.
std::vector<std::string> subspace(const TraitPrimitive& p);

/// Throws ErrorCode::invalid_argument on malformed primitives.
void validate(const TraitPrimitive& p);

/// Euclidean distance from `a` (given in the primitive's channel order) to
/// the primitive. Zero exactly on the primitive.
double primitive_distance(const TraitPrimitive& p, std::span<const double> a);

enum class TraitOp { leaf, all_of, any_of, complement, product_l2 };

std::string_view to_string(TraitOp op) noexcept;

/// How And/Or/Not map onto distance fields.
///   csg:           And -> max, Or -> min (set intersection/union)
///   paper_literal: And -> min, Or -> max
/// Both use Not(h) = max(h) - h.
enum class CombineSemantics { csg, paper_literal };

std::string_view to_string(CombineSemantics s) noexcept;
std::optional<CombineSemantics> parse_semantics(std::string_view name) noexcept;

struct TraitNode {
  TraitOp op = TraitOp::leaf;
  std::optional<TraitPrimitive> primitive;
  std::vector<TraitNode> children;

  static TraitNode leaf(TraitPrimitive p);
  static TraitNode all_of(std::vector<TraitNode> children);
  static TraitNode any_of(std::vector<TraitNode> children);
  static TraitNode complement(TraitNode child);
  static TraitNode product_l2(std::vector<TraitNode> children);
};

struct TraitExpr {
  TraitNode root;
  CombineSemantics semantics = CombineSemantics::csg;
};

TraitExpr make_trait(TraitPrimitive p, CombineSemantics s = CombineSemantics::csg);

/// Structural validation; with `mf`, also checks that every channel exists.
void validate(const TraitExpr& expr, const MultiField* mf = nullptr);

/// An open Box side replaced by the channel's data range.
struct BoxCap {
  std::string channel;
  bool upper = false;
  double value = 0;
};

struct TraitEvaluation {
  ScalarField field;
  std::size_t clamped = 0;
  std::vector<BoxCap> caps;
};

/// h_T = d_T o f evaluated at every vertex.
TraitEvaluation evaluate_trait(const TraitExpr& expr, const MultiField& mf);
ScalarField induced_distance_field(const TraitExpr& expr, const MultiField& mf);

enum class CombineOp { all_of, any_of, complement, product_l2 };

struct CombineResult {
  ScalarField field;
  std::size_t clamped = 0;  // values pulled back to >= 0
};

CombineResult combine_fields(CombineOp op, std::span<const ScalarField> fields,
                             CombineSemantics semantics = CombineSemantics::csg);

struct SimilarityResult {
  ScalarField field;
  std::size_t zero_norm = 0;  // vertices with f(x) = 0, mapped to 0
};

/// Cosine similarity of every attribute vector (all channels of `mf`) to `atom`.
SimilarityResult similarity_field(std::span<const double> atom, const MultiField& mf);

/// 1 - s, so sub-level sweeps visit similarity maxima first.
ScalarField similarity_to_distance(const ScalarField& similarity);

struct HausdorffEstimate {
  double distance = 0;
  bool exact = false;
  double step = 0;         // sampling step used (0 when exact)
  double error_bound = 0;  // |estimate - true| <= error_bound
};

/// Symmetric Hausdorff distance between two traits over the same channel
/// set. Supported: leaves and (nested) unions of leaves. Pure point traits
/// are exact; anything else is sampled at `step`.
HausdorffEstimate hausdorff_distance(const TraitExpr& t1, const TraitExpr& t2, double step);

}  // namespace timt
