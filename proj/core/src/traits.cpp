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

#include "timt/traits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "timt/error.hpp"

namespace timt {

std::string_view to_string(TraitOp op) noexcept {
  switch (op) {
    case TraitOp::leaf: return "leaf";
    case TraitOp::all_of: return "and";
    case TraitOp::any_of: return "or";
    case TraitOp::complement: return "not";
    case TraitOp::product_l2: return "product_l2";
  }
  return "leaf";
}

std::string_view to_string(CombineSemantics s) noexcept {
  return s == CombineSemantics::csg ? "csg" : "paper_literal";
}

std::optional<CombineSemantics> parse_semantics(std::string_view name) noexcept {
  if (name == "csg") return CombineSemantics::csg;
  if (name == "paper_literal") return CombineSemantics::paper_literal;
  return std::nullopt;
}

TraitNode TraitNode::leaf(TraitPrimitive p) {
  TraitNode n;
  n.op = TraitOp::leaf;
  n.primitive = std::move(p);
  return n;
}

namespace {

TraitNode inner(TraitOp op, std::vector<TraitNode> children) {
  TraitNode n;
  n.op = op;
  n.children = std::move(children);
  return n;
}

}  // namespace

TraitNode TraitNode::all_of(std::vector<TraitNode> c) { return inner(TraitOp::all_of, std::move(c)); }
TraitNode TraitNode::any_of(std::vector<TraitNode> c) { return inner(TraitOp::any_of, std::move(c)); }
TraitNode TraitNode::product_l2(std::vector<TraitNode> c) {
  return inner(TraitOp::product_l2, std::move(c));
}
TraitNode TraitNode::complement(TraitNode child) {
  std::vector<TraitNode> c;
  c.push_back(std::move(child));
  return inner(TraitOp::complement, std::move(c));
}

TraitExpr make_trait(TraitPrimitive p, CombineSemantics s) {
  return TraitExpr{TraitNode::leaf(std::move(p)), s};
}

std::vector<std::string> subspace(const TraitPrimitive& p) {
  return std::visit(
      [](const auto& t) -> std::vector<std::string> {
        return {t.channels.begin(), t.channels.end()};
      },
      p);
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

double cross(std::array<double, 2> o, std::array<double, 2> a, std::array<double, 2> b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Scaled 2-norm: zero iff every residual is zero, no under/overflow.
template <class F>
double scaled_norm(std::size_t n, F&& residual) {
  double scale = 0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(residual(i)));
  if (scale == 0) return 0;
  if (!std::isfinite(scale)) return scale;
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = residual(i) / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double point_segment(std::span<const double> a, std::span<const double> p,
                     std::span<const double> q) {
  const std::size_t n = a.size();
  double len2 = 0, dot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = q[i] - p[i];
    len2 += d * d;
    dot += (a[i] - p[i]) * d;
  }
  double t = len2 > 0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
  return scaled_norm(n, [&](std::size_t i) {
    if (t == 0.0) return a[i] - p[i];
    if (t == 1.0) return a[i] - q[i];
    return a[i] - (p[i] + t * (q[i] - p[i]));
  });
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) fail(ErrorCode::invalid_argument, std::string(what) + " must be finite");
}

void require_channels(const std::vector<std::string>& ch, std::size_t dims) {
  if (ch.empty()) fail(ErrorCode::invalid_argument, "trait subspace is empty");
  if (std::set<std::string>(ch.begin(), ch.end()).size() != ch.size())
    fail(ErrorCode::invalid_argument, "trait subspace repeats a channel");
  if (dims != ch.size())
    fail(ErrorCode::dimension_mismatch, "trait coordinates do not match its subspace (" +
                                            std::to_string(dims) + " vs " +
                                            std::to_string(ch.size()) + ")");
}

}  // namespace

void validate(const TraitPrimitive& p) {
  struct V {
    void operator()(const PointTrait& t) const {
      require_channels(t.channels, t.coords.size());
      require_finite(t.coords, "point coordinates");
    }
    void operator()(const SegmentTrait& t) const {
      require_channels(t.channels, t.a.size());
      require_channels(t.channels, t.b.size());
      require_finite(t.a, "segment endpoints");
      require_finite(t.b, "segment endpoints");
    }
    void operator()(const BoxTrait& t) const {
      require_channels(t.channels, t.lo.size());
      require_channels(t.channels, t.hi.size());
      for (std::size_t i = 0; i < t.lo.size(); ++i) {
        if (std::isnan(t.lo[i]) || std::isnan(t.hi[i]) || t.lo[i] == INFINITY ||
            t.hi[i] == -INFINITY)
          fail(ErrorCode::invalid_argument, "box bounds must be numbers (open sides: -inf/+inf)");
        if (!(t.lo[i] <= t.hi[i]))
          fail(ErrorCode::invalid_argument, "box interval for '" + t.channels[i] + "' has lo > hi");
      }
    }
    void operator()(const PolygonTrait& t) const {
      require_channels({t.channels[0], t.channels[1]}, 2);
      const auto& v = t.vertices;
      if (v.size() < 3) fail(ErrorCode::invalid_argument, "polygon needs at least 3 vertices");
      for (const auto& p : v) require_finite(p, "polygon vertices");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const auto& c = v[(i + 2) % v.size()];
        if (!(cross(a, b, c) > 0))
          fail(ErrorCode::invalid_argument,
               "polygon must be strictly convex and counter-clockwise (vertex " +
                   std::to_string((i + 1) % v.size()) + ")");
      }
      // A strictly-left-turning closed chain can still wind more than once.
      double winding = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const auto& c = v[(i + 2) % v.size()];
        winding += std::atan2(cross(a, b, c), (b[0] - a[0]) * (c[0] - b[0]) +
                                                  (b[1] - a[1]) * (c[1] - b[1]));
      }
      if (std::abs(winding - 2 * std::numbers::pi) > 1e-6)
        fail(ErrorCode::invalid_argument, "polygon is self-overlapping");
    }
  };
  std::visit(V{}, p);
}

double primitive_distance(const TraitPrimitive& p, std::span<const double> a) {
  struct D {
    std::span<const double> a;
    double operator()(const PointTrait& t) const {
      return scaled_norm(a.size(), [&](std::size_t i) { return a[i] - t.coords[i]; });
    }
    double operator()(const SegmentTrait& t) const { return point_segment(a, t.a, t.b); }
    double operator()(const BoxTrait& t) const {
      return scaled_norm(a.size(),
                         [&](std::size_t i) { return a[i] - std::clamp(a[i], t.lo[i], t.hi[i]); });
    }
    double operator()(const PolygonTrait& t) const {
      const std::array<double, 2> q{a[0], a[1]};
      const auto& v = t.vertices;
      bool inside = true;
      for (std::size_t i = 0; i < v.size() && inside; ++i)
        if (cross(v[i], v[(i + 1) % v.size()], q) < 0) inside = false;
      if (inside) return 0.0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& s = v[i];
        const auto& e = v[(i + 1) % v.size()];
        best = std::min(best, point_segment(q, s, e));
      }
      return best;
    }
  };
  const std::size_t dims = subspace(p).size();
  if (a.size() != dims)
    fail(ErrorCode::dimension_mismatch, "attribute vector has " + std::to_string(a.size()) +
                                            " entries, trait subspace has " +
                                            std::to_string(dims));
  return std::visit(D{a}, p);
}

// ---------------------------------------------------------------------------
// Expressions

void validate(const TraitExpr& expr, const MultiField* mf) {
  auto rec = [&](auto&& self, const TraitNode& n, int depth) -> void {
    if (depth > 256) fail(ErrorCode::invalid_argument, "trait expression nested too deeply");
    if (n.op == TraitOp::leaf) {
      if (!n.primitive || !n.children.empty())
        fail(ErrorCode::invalid_argument, "leaf node must hold exactly one primitive");
      validate(*n.primitive);
      if (mf)
        for (const auto& ch : subspace(*n.primitive)) mf->require(ch);
      return;
    }
    if (n.primitive)
      fail(ErrorCode::invalid_argument, "operator node must not hold a primitive");
    if (n.children.empty())
      fail(ErrorCode::invalid_argument, std::string(to_string(n.op)) + " node has no children");
    if (n.op == TraitOp::complement && n.children.size() != 1)
      fail(ErrorCode::invalid_argument, "not node takes exactly one child");
    for (const auto& c : n.children) self(self, c, depth + 1);
  };
  rec(rec, expr.root, 0);
}

namespace {

struct LeafEval {
  std::vector<std::size_t> channel_index;
  TraitPrimitive primitive;  // with open box sides capped
};

LeafEval bind(const TraitPrimitive& p, const MultiField& mf, std::vector<BoxCap>& caps) {
  LeafEval b{{}, p};
  for (const auto& ch : subspace(p)) b.channel_index.push_back(mf.require(ch));
  if (auto* box = std::get_if<BoxTrait>(&b.primitive)) {
    for (std::size_t i = 0; i < box->channels.size(); ++i) {
      const auto& vals = mf.channel(b.channel_index[i]).values;
      const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
      if (std::isinf(box->lo[i])) {
        box->lo[i] = std::min(*mn, box->hi[i]);
        caps.push_back({box->channels[i], false, box->lo[i]});
      }
      if (std::isinf(box->hi[i])) {
        box->hi[i] = std::max(*mx, box->lo[i]);
        caps.push_back({box->channels[i], true, box->hi[i]});
      }
    }
  }
  return b;
}

std::vector<double> leaf_field(const LeafEval& leaf, const MultiField& mf) {
  const std::size_t n = mf.vertex_count();
  const std::size_t dims = leaf.channel_index.size();
  std::vector<const double*> cols;
  for (auto c : leaf.channel_index) cols.push_back(mf.channel(c).values.data());
  std::vector<double> out(n);
  std::vector<double> a(dims);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) a[d] = cols[d][i];
    out[i] = primitive_distance(leaf.primitive, a);
  }
  return out;
}

ScalarField evaluate_node(const TraitNode& node, const MultiField& mf, CombineSemantics s,
                          TraitEvaluation& diag) {
  if (node.op == TraitOp::leaf) {
    const LeafEval leaf = bind(*node.primitive, mf, diag.caps);
    return ScalarField{mf.grid(), leaf_field(leaf, mf), FieldMeaning::distance};
  }
  std::vector<ScalarField> children;
  children.reserve(node.children.size());
  for (const auto& c : node.children) children.push_back(evaluate_node(c, mf, s, diag));
  CombineOp op = CombineOp::all_of;
  switch (node.op) {
    case TraitOp::all_of: op = CombineOp::all_of; break;
    case TraitOp::any_of: op = CombineOp::any_of; break;
    case TraitOp::complement: op = CombineOp::complement; break;
    case TraitOp::product_l2: op = CombineOp::product_l2; break;
    case TraitOp::leaf: break;
  }
  CombineResult r = combine_fields(op, children, s);
  diag.clamped += r.clamped;
  return std::move(r.field);
}

}  // namespace

TraitEvaluation evaluate_trait(const TraitExpr& expr, const MultiField& mf) {
  validate(expr, &mf);
  TraitEvaluation out;
  out.field = evaluate_node(expr.root, mf, expr.semantics, out);
  return out;
}

ScalarField induced_distance_field(const TraitExpr& expr, const MultiField& mf) {
  return evaluate_trait(expr, mf).field;
}

CombineResult combine_fields(CombineOp op, std::span<const ScalarField> fields,
                             CombineSemantics semantics) {
  if (fields.empty()) fail(ErrorCode::invalid_argument, "combine_fields needs at least one field");
  if (op == CombineOp::complement && fields.size() != 1)
    fail(ErrorCode::invalid_argument, "complement takes exactly one field");
  for (const auto& f : fields) {
    if (!f.grid.same_shape(fields[0].grid) || f.values.size() != fields[0].values.size())
      fail(ErrorCode::grid_mismatch, "combined fields live on different grids");
    if (f.meaning != FieldMeaning::distance)
      fail(ErrorCode::invalid_argument, "combined fields must all be distance fields");
  }
  const std::size_t n = fields[0].values.size();
  CombineResult out{ScalarField{fields[0].grid, std::vector<double>(n), FieldMeaning::distance}, 0};
  auto& v = out.field.values;

  const bool take_max = (op == CombineOp::all_of) == (semantics == CombineSemantics::csg);
  switch (op) {
    case CombineOp::all_of:
    case CombineOp::any_of:
      v = fields[0].values;
      for (std::size_t k = 1; k < fields.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
          v[i] = take_max ? std::max(v[i], fields[k].values[i])
                          : std::min(v[i], fields[k].values[i]);
      break;
    case CombineOp::complement: {
      const auto& h = fields[0].values;
      const double top = n ? *std::max_element(h.begin(), h.end()) : 0.0;
      for (std::size_t i = 0; i < n; ++i) v[i] = top - h[i];
      break;
    }
    case CombineOp::product_l2:
      for (std::size_t i = 0; i < n; ++i)
        v[i] = scaled_norm(fields.size(), [&](std::size_t k) { return fields[k].values[i]; });
      break;
  }
  for (double& x : v)
    if (x < 0) {
      x = 0;
      ++out.clamped;
    }
  return out;
}

SimilarityResult similarity_field(std::span<const double> atom, const MultiField& mf) {
  const std::size_t m = mf.channel_count();
  if (atom.size() != m)
    fail(ErrorCode::dimension_mismatch, "atom has " + std::to_string(atom.size()) +
                                            " entries, attribute space has " + std::to_string(m));
  require_finite(atom, "atom");
  const double atom_norm = scaled_norm(m, [&](std::size_t i) { return atom[i]; });
  if (atom_norm == 0) fail(ErrorCode::invalid_argument, "atom is the zero vector");

  const std::size_t n = mf.vertex_count();
  SimilarityResult out{ScalarField{mf.grid(), std::vector<double>(n), FieldMeaning::similarity}, 0};
  std::vector<double> unit(m);
  for (std::size_t c = 0; c < m; ++c) unit[c] = atom[c] / atom_norm;
  std::vector<const double*> cols;
  for (std::size_t c = 0; c < m; ++c) cols.push_back(mf.channel(c).values.data());
  for (std::size_t i = 0; i < n; ++i) {
    const double fn = scaled_norm(m, [&](std::size_t c) { return cols[c][i]; });
    if (fn == 0) {
      ++out.zero_norm;
      out.field.values[i] = 0;
      continue;
    }
    double dot = 0;
    for (std::size_t c = 0; c < m; ++c) dot += (cols[c][i] / fn) * unit[c];
    out.field.values[i] = std::clamp(dot, -1.0, 1.0);
  }
  return out;
}

ScalarField similarity_to_distance(const ScalarField& similarity) {
  if (similarity.meaning != FieldMeaning::similarity)
    fail(ErrorCode::invalid_argument, "similarity_to_distance expects a similarity field");
  ScalarField out{similarity.grid, similarity.values, FieldMeaning::distance};
  for (double& v : out.values) v = 1.0 - v;
  return out;
}

// ---------------------------------------------------------------------------
// Hausdorff

namespace {

constexpr std::size_t kMaxHausdorffSamples = 4'000'000;

struct PlacedLeaf {
  const TraitPrimitive* primitive;
  std::vector<std::size_t> perm;  // leaf channel i -> canonical slot perm[i]
};

void collect_leaves(const TraitNode& n, std::vector<const TraitPrimitive*>& out) {
  if (n.op == TraitOp::leaf) {
    out.push_back(&*n.primitive);
    return;
  }
  if (n.op != TraitOp::any_of)
    fail(ErrorCode::unsupported, "Hausdorff distance supports leaves and unions only, got '" +
                                     std::string(to_string(n.op)) + "'");
  for (const auto& c : n.children) collect_leaves(c, out);
}

std::vector<PlacedLeaf> place(const TraitExpr& t, const std::vector<std::string>& canonical) {
  std::vector<const TraitPrimitive*> leaves;
  collect_leaves(t.root, leaves);
  std::vector<PlacedLeaf> out;
  for (const auto* p : leaves) {
    validate(*p);
    auto ch = subspace(*p);
    if (std::set<std::string>(ch.begin(), ch.end()) !=
        std::set<std::string>(canonical.begin(), canonical.end()))
      fail(ErrorCode::dimension_mismatch,
           "traits live in different attribute subspaces; no common embedding");
    PlacedLeaf pl{p, {}};
    for (const auto& c : ch)
      pl.perm.push_back(static_cast<std::size_t>(
          std::find(canonical.begin(), canonical.end(), c) - canonical.begin()));
    if (const auto* box = std::get_if<BoxTrait>(p))
      for (std::size_t i = 0; i < box->lo.size(); ++i)
        if (std::isinf(box->lo[i]) || std::isinf(box->hi[i]))
          fail(ErrorCode::unsupported, "Hausdorff distance of an open box is unbounded");
    out.push_back(std::move(pl));
  }
  return out;
}

double distance_to(const std::vector<PlacedLeaf>& leaves, std::span<const double> canonical) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> local;
  for (const auto& l : leaves) {
    local.resize(l.perm.size());
    for (std::size_t i = 0; i < l.perm.size(); ++i) local[i] = canonical[l.perm[i]];
    best = std::min(best, primitive_distance(*l.primitive, local));
  }
  return best;
}

std::size_t divisions(double extent, double step) {
  return extent > 0 ? static_cast<std::size_t>(std::ceil(extent / step)) : 0;
}

// Calls emit(local_coords) for lattice samples of the primitive.
template <class Emit>
void sample_primitive(const TraitPrimitive& p, double step, std::size_t& budget, Emit&& emit) {
  auto spend = [&](std::size_t k) {
    if (k > budget) fail(ErrorCode::limit_exceeded, "Hausdorff sampling exceeds 4e6 samples; increase step");
    budget -= k;
  };
  if (const auto* pt = std::get_if<PointTrait>(&p)) {
    spend(1);
    emit(std::span<const double>(pt->coords));
  } else if (const auto* seg = std::get_if<SegmentTrait>(&p)) {
    double len2 = 0;
    for (std::size_t i = 0; i < seg->a.size(); ++i)
      len2 += (seg->b[i] - seg->a[i]) * (seg->b[i] - seg->a[i]);
    const std::size_t n = divisions(std::sqrt(len2), step);
    spend(n + 1);
    std::vector<double> x(seg->a.size());
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = n ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = seg->a[i] + t * (seg->b[i] - seg->a[i]);
      emit(std::span<const double>(x));
    }
  } else if (const auto* box = std::get_if<BoxTrait>(&p)) {
    const std::size_t dims = box->lo.size();
    std::vector<std::size_t> n(dims), idx(dims, 0);
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
      n[d] = divisions(box->hi[d] - box->lo[d], step);
      if (total > kMaxHausdorffSamples / (n[d] + 1))
        fail(ErrorCode::limit_exceeded, "Hausdorff sampling exceeds 4e6 samples; increase step");
      total *= n[d] + 1;
    }
    spend(total);
    std::vector<double> x(dims);
    for (std::size_t s = 0; s < total; ++s) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double t = n[d] ? static_cast<double>(idx[d]) / static_cast<double>(n[d]) : 0.0;
        x[d] = box->lo[d] + t * (box->hi[d] - box->lo[d]);
      }
      emit(std::span<const double>(x));
      for (std::size_t d = 0; d < dims; ++d) {
        if (++idx[d] <= n[d]) break;
        idx[d] = 0;
      }
    }
  } else {
    const auto& poly = std::get<PolygonTrait>(p);
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      SegmentTrait edge{{poly.channels[0], poly.channels[1]},
                        {v[i][0], v[i][1]},
                        {v[(i + 1) % v.size()][0], v[(i + 1) % v.size()][1]}};
      sample_primitive(edge, step, budget, emit);
    }
    double lo[2] = {v[0][0], v[0][1]}, hi[2] = {v[0][0], v[0][1]};
    for (const auto& q : v)
      for (int d = 0; d < 2; ++d) {
        lo[d] = std::min(lo[d], q[d]);
        hi[d] = std::max(hi[d], q[d]);
      }
    const std::size_t nx = divisions(hi[0] - lo[0], step), ny = divisions(hi[1] - lo[1], step);
    spend((nx + 1) * (ny + 1));
    std::array<double, 2> x;
    for (std::size_t j = 0; j <= ny; ++j)
      for (std::size_t i = 0; i <= nx; ++i) {
        x[0] = lo[0] + (nx ? (hi[0] - lo[0]) * static_cast<double>(i) / static_cast<double>(nx) : 0);
        x[1] = lo[1] + (ny ? (hi[1] - lo[1]) * static_cast<double>(j) / static_cast<double>(ny) : 0);
        if (primitive_distance(p, x) == 0) emit(std::span<const double>(x));
      }
  }
}

double directed(const std::vector<PlacedLeaf>& from, const std::vector<PlacedLeaf>& to,
                std::size_t dims, double step, std::size_t& budget) {
  double worst = 0;
  std::vector<double> canon(dims);
  for (const auto& l : from) {
    sample_primitive(*l.primitive, step, budget, [&](std::span<const double> local) {
      for (std::size_t i = 0; i < local.size(); ++i) canon[l.perm[i]] = local[i];
      worst = std::max(worst, distance_to(to, canon));
    });
  }
  return worst;
}

}  // namespace

HausdorffEstimate hausdorff_distance(const TraitExpr& t1, const TraitExpr& t2, double step) {
  std::vector<const TraitPrimitive*> first;
  collect_leaves(t1.root, first);
  const std::vector<std::string> canonical = subspace(*first.front());
  const auto a = place(t1, canonical);
  const auto b = place(t2, canonical);
  const std::size_t dims = canonical.size();

  const auto all_points = [](const std::vector<PlacedLeaf>& ls) {
    return std::all_of(ls.begin(), ls.end(), [](const PlacedLeaf& l) {
      return std::holds_alternative<PointTrait>(*l.primitive);
    });
  };
  HausdorffEstimate out;
  if (all_points(a) && all_points(b)) {
    std::size_t budget = kMaxHausdorffSamples;
    out.distance = std::max(directed(a, b, dims, 1.0, budget), directed(b, a, dims, 1.0, budget));
    out.exact = true;
    return out;
  }
  if (!(step > 0) || !std::isfinite(step))
    fail(ErrorCode::invalid_argument, "Hausdorff sampling step must be positive");
  std::size_t budget = kMaxHausdorffSamples;
  out.distance = std::max(directed(a, b, dims, step, budget), directed(b, a, dims, step, budget));
  out.step = step;
  out.error_bound = step * std::sqrt(static_cast<double>(dims));
  return out;
}

}  // namespace timt
