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

#include "timt/queries.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "timt/error.hpp"

namespace timt {

std::string_view to_string(QueryMethod m) noexcept {
  switch (m) {
    case QueryMethod::branch_decomposition: return "branch_decomposition";
    case QueryMethod::leaf_arcs: return "leaf_arcs";
    case QueryMethod::subtrees: return "subtrees";
    case QueryMethod::crown: return "crown";
  }
  return "branch_decomposition";
}

std::optional<QueryMethod> parse_query_method(std::string_view name) noexcept {
  for (auto m : {QueryMethod::branch_decomposition, QueryMethod::leaf_arcs, QueryMethod::subtrees,
                 QueryMethod::crown})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

void QuerySpec::validate() const {
  if (!(threshold >= 0)) fail(ErrorCode::invalid_argument, "threshold must be >= 0");
  if (method == QueryMethod::subtrees && !cut_level)
    fail(ErrorCode::invalid_argument, "subtrees query requires cut_level");
  if (cut_level && !std::isfinite(*cut_level) && !std::isinf(*cut_level))
    fail(ErrorCode::invalid_argument, "cut_level must be a number");
  if (method == QueryMethod::crown) {
    if (!delta) fail(ErrorCode::invalid_argument, "crown query requires delta");
    if (!(*delta > 0)) fail(ErrorCode::invalid_argument, "crown delta must be > 0");
  }
}

namespace {

void require_method(const QuerySpec& spec, QueryMethod m) {
  spec.validate();
  if (spec.method != m)
    fail(ErrorCode::invalid_argument, "query spec method is '" + std::string(to_string(spec.method)) +
                                          "', expected '" + std::string(to_string(m)) + "'");
}

MergeTree simplified(const MergeTree& t, const QuerySpec& spec) {
  if (spec.threshold > 0) return simplify(t, spec.metric, spec.threshold);
  return t;
}

// Metric value of every pair, keyed by minimum node.
std::vector<double> pair_metric_by_leaf(const MergeTree& t, SimplifyMetric metric) {
  const auto pairs = persistence_pairs(t);
  std::vector<double> out(t.nodes.size(), 0);
  if (metric == SimplifyMetric::persistence) {
    for (const auto& p : pairs) out[p.minimum] = p.persistence;
  } else {
    const auto hv = hypervolume_per_pair(t, pairs);
    for (std::size_t i = 0; i < pairs.size(); ++i) out[pairs[i].minimum] = hv[i];
  }
  return out;
}

std::vector<VertexId> sweep_order(const MergeTree& t) {
  std::vector<VertexId> order(t.values.size());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return t.precedes(a, b); });
  return order;
}

Segmentation blank(const MergeTree& t, const QuerySpec& spec) {
  Segmentation s;
  s.grid = t.grid;
  s.labels.assign(t.values.size(), kBackground);
  s.spec = spec;
  return s;
}

// Fills vertex counts and minima from labels; `metric` is indexed by id.
void finish(Segmentation& s, const MergeTree& t, const std::vector<double>& metric) {
  s.segments.resize(metric.size());
  for (std::size_t id = 0; id < metric.size(); ++id) {
    s.segments[id].id = static_cast<std::int32_t>(id);
    s.segments[id].metric = metric[id];
    s.segments[id].minimum_vertex = -1;
  }
  for (std::size_t v = 0; v < s.labels.size(); ++v) {
    const std::int32_t id = s.labels[v];
    if (id == kBackground) continue;
    auto& seg = s.segments[static_cast<std::size_t>(id)];
    ++seg.vertex_count;
    if (seg.minimum_vertex < 0 || t.precedes(static_cast<VertexId>(v), seg.minimum_vertex))
      seg.minimum_vertex = static_cast<VertexId>(v);
  }
  for (auto& seg : s.segments)
    seg.minimum_value = seg.minimum_vertex >= 0 ? t.values[static_cast<std::size_t>(seg.minimum_vertex)]
                                                : std::numeric_limits<double>::quiet_NaN();
}

class ClassSets {
 public:
  explicit ClassSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    std::size_t r = x;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[x] != r) {
      const std::size_t next = parent_[x];
      parent_[x] = r;
      x = next;
    }
    return r;
  }
  void attach(std::size_t child, std::size_t root) { parent_[find(child)] = find(root); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Segmentation segment_branch_decomposition(const MergeTree& t, const QuerySpec& spec) {
  require_method(spec, QueryMethod::branch_decomposition);
  const MergeTree st = simplified(t, spec);
  const auto metric_by_leaf = pair_metric_by_leaf(st, spec.metric);
  const BranchDecomposition bd = branch_decomposition(st);

  // Raw pairs act as provisional classes; cancelled ones fold into a live
  // neighbor class when they die.
  const auto raw_pairs = persistence_pairs(t);
  const std::size_t n = t.values.size();
  std::vector<std::int64_t> raw_pair_at_leaf(n, -1);
  std::vector<std::vector<std::size_t>> dying_at(t.nodes.size());
  std::vector<std::int64_t> node_at_vertex(n, -1);
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.nodes[i].kind == NodeKind::saddle) node_at_vertex[static_cast<std::size_t>(t.nodes[i].vertex)] = static_cast<std::int64_t>(i);

  std::vector<std::int64_t> st_branch_at_leaf(n, -1);
  for (std::size_t b = 0; b < bd.branches.size(); ++b)
    st_branch_at_leaf[static_cast<std::size_t>(st.nodes[bd.branches[b].minimum].vertex)] = static_cast<std::int64_t>(b);

  std::vector<std::uint8_t> cancelled(raw_pairs.size(), 0);
  for (std::size_t p = 0; p < raw_pairs.size(); ++p) {
    const VertexId leaf = t.nodes[raw_pairs[p].minimum].vertex;
    raw_pair_at_leaf[static_cast<std::size_t>(leaf)] = static_cast<std::int64_t>(p);
    cancelled[p] = st_branch_at_leaf[static_cast<std::size_t>(leaf)] < 0;
    if (cancelled[p]) dying_at[raw_pairs[p].death].push_back(p);
  }
  // Live class -> st branch.
  std::vector<std::int64_t> class_branch(raw_pairs.size(), -1);
  for (std::size_t p = 0; p < raw_pairs.size(); ++p)
    if (!cancelled[p])
      class_branch[p] = st_branch_at_leaf[static_cast<std::size_t>(t.nodes[raw_pairs[p].minimum].vertex)];
  std::vector<std::size_t> branch_class(bd.branches.size());
  for (std::size_t p = 0; p < raw_pairs.size(); ++p)
    if (class_branch[p] >= 0) branch_class[static_cast<std::size_t>(class_branch[p])] = p;

  ClassSets classes(raw_pairs.size());
  std::vector<std::size_t> cls(n, 0);
  std::vector<std::uint8_t> done(n, 0);
  std::vector<std::size_t> excluded;

  for (VertexId v : sweep_order(t)) {
    const auto vi = static_cast<std::size_t>(v);
    if (raw_pair_at_leaf[vi] >= 0) {
      cls[vi] = static_cast<std::size_t>(raw_pair_at_leaf[vi]);
      done[vi] = 1;
      continue;
    }
    excluded.clear();
    if (node_at_vertex[vi] >= 0)
      for (std::size_t p : dying_at[static_cast<std::size_t>(node_at_vertex[vi])])
        excluded.push_back(classes.find(p));
    const std::size_t preferred =
        classes.find(branch_class[bd.arc_branch[static_cast<std::size_t>(st.vertex_arc[vi])]]);

    std::size_t chosen = static_cast<std::size_t>(-1);
    VertexId chosen_from = -1;
    t.grid.for_each_neighbor(v, [&](VertexId u) {
      const auto ui = static_cast<std::size_t>(u);
      if (!done[ui]) return;
      const std::size_t c = classes.find(cls[ui]);
      if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) return;
      if (chosen == preferred) return;
      if (c == preferred || chosen_from < 0 || t.precedes(u, chosen_from)) {
        chosen = c;
        chosen_from = u;
      }
    });
    if (chosen_from < 0) fail(ErrorCode::invalid_argument, "branch labelling found no live neighbor");
    cls[vi] = chosen;
    done[vi] = 1;
    for (std::size_t c : excluded) classes.attach(c, chosen);
  }

  Segmentation s = blank(st, spec);
  for (std::size_t v = 0; v < n; ++v)
    s.labels[v] = static_cast<std::int32_t>(class_branch[classes.find(cls[v])]);
  std::vector<double> metric(bd.branches.size());
  for (std::size_t b = 0; b < bd.branches.size(); ++b) metric[b] = metric_by_leaf[bd.branches[b].minimum];
  finish(s, st, metric);
  return s;
}

Segmentation segment_leaf_arcs(const MergeTree& t, const QuerySpec& spec) {
  require_method(spec, QueryMethod::leaf_arcs);
  const MergeTree st = simplified(t, spec);
  const auto metric_by_leaf = pair_metric_by_leaf(st, spec.metric);
  Segmentation s = blank(st, spec);
  std::vector<double> metric;
  for (std::size_t i = 0; i < st.nodes.size(); ++i) {
    if (st.nodes[i].kind != NodeKind::leaf) continue;
    const auto id = static_cast<std::int32_t>(metric.size());
    for (VertexId v : st.arcs[st.up_arc[i]].members) s.labels[static_cast<std::size_t>(v)] = id;
    metric.push_back(metric_by_leaf[i]);
  }
  finish(s, st, metric);
  return s;
}

Segmentation segment_subtrees(const MergeTree& t, const QuerySpec& spec) {
  require_method(spec, QueryMethod::subtrees);
  const MergeTree st = simplified(t, spec);
  const auto metric_by_leaf = pair_metric_by_leaf(st, spec.metric);
  const double cut = *spec.cut_level;
  Segmentation s = blank(st, spec);

  ClassSets groups(st.nodes.size());
  for (const auto& arc : st.arcs)
    if (st.nodes[arc.upper].value < cut) groups.attach(arc.upper, arc.lower);

  // Group ids in order of their lowest node; the group's oldest leaf is that node.
  std::vector<std::int32_t> group_id(st.nodes.size(), kBackground);
  std::vector<double> metric;
  for (std::size_t i = 0; i < st.nodes.size(); ++i) {
    if (!(st.nodes[i].value < cut)) continue;
    const std::size_t g = groups.find(i);
    if (group_id[g] == kBackground) {
      group_id[g] = static_cast<std::int32_t>(metric.size());
      metric.push_back(metric_by_leaf[i]);
    }
  }
  for (const auto& arc : st.arcs) {
    if (!(st.nodes[arc.lower].value < cut)) continue;
    const std::int32_t id = group_id[groups.find(arc.lower)];
    for (VertexId v : arc.members)
      if (st.levels[static_cast<std::size_t>(v)] < cut) s.labels[static_cast<std::size_t>(v)] = id;
  }
  if (metric.empty()) s.notes.push_back("cut level at or below the global minimum: empty segmentation");
  finish(s, st, metric);
  return s;
}

Segmentation segment_crowns(const ScalarField& field, const MergeTree& t, const QuerySpec& spec) {
  require_method(spec, QueryMethod::crown);
  if (field.values.size() != t.values.size())
    fail(ErrorCode::grid_mismatch, "crown query: field and tree have different vertex counts");
  const MergeTree st = simplified(t, spec);
  const double delta = *spec.delta;
  const auto metric_by_leaf = pair_metric_by_leaf(st, spec.metric);
  std::vector<double> h = field.values;
  if (t.superlevel)
    for (double& x : h) x = -x;

  struct Crown {
    VertexId minimum;
    double level;
    double persistence;
    double metric;
  };
  std::vector<Crown> crowns;
  // The global minimum never dies, so it qualifies for every delta.
  for (const auto& p : persistence_pairs(st))
    if (p.persistence >= delta || st.nodes[p.death].kind == NodeKind::root) {
      const VertexId v = st.nodes[p.minimum].vertex;
      crowns.push_back({v, h[static_cast<std::size_t>(v)] + delta, p.persistence, metric_by_leaf[p.minimum]});
    }
  // Higher crowns first: an unmarked minimum's region is then disjoint from
  // everything already marked.
  std::sort(crowns.begin(), crowns.end(), [](const Crown& a, const Crown& b) {
    return a.level > b.level || (a.level == b.level && a.minimum < b.minimum);
  });

  const std::size_t n = h.size();
  std::vector<std::int32_t> region(n, kBackground);
  std::deque<VertexId> queue;
  for (std::size_t c = 0; c < crowns.size(); ++c) {
    const VertexId a = crowns[c].minimum;
    if (region[static_cast<std::size_t>(a)] != kBackground) continue;
    region[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(c);
    queue.push_back(a);
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      t.grid.for_each_neighbor(v, [&](VertexId u) {
        const auto ui = static_cast<std::size_t>(u);
        if (region[ui] == kBackground && h[ui] <= crowns[c].level) {
          region[ui] = static_cast<std::int32_t>(c);
          queue.push_back(u);
        }
      });
    }
  }

  // Components of the union of crown regions.
  Segmentation s = blank(st, spec);
  std::vector<double> metric;
  std::vector<double> best_persistence;
  for (VertexId start : sweep_order(st)) {
    const auto si = static_cast<std::size_t>(start);
    if (region[si] == kBackground || s.labels[si] != kBackground) continue;
    const auto id = static_cast<std::int32_t>(metric.size());
    metric.push_back(0);
    best_persistence.push_back(-1);
    s.labels[si] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop_front();
      const auto& crown = crowns[static_cast<std::size_t>(region[static_cast<std::size_t>(v)])];
      if (crown.persistence > best_persistence.back()) {
        best_persistence.back() = crown.persistence;
        metric.back() = crown.metric;
      }
      t.grid.for_each_neighbor(v, [&](VertexId u) {
        const auto ui = static_cast<std::size_t>(u);
        if (region[ui] != kBackground && s.labels[ui] == kBackground) {
          s.labels[ui] = id;
          queue.push_back(u);
        }
      });
    }
  }
  finish(s, st, metric);
  return s;
}

Segmentation run_query(const ScalarField& field, const MergeTree& t, const QuerySpec& spec) {
  switch (spec.method) {
    case QueryMethod::branch_decomposition: return segment_branch_decomposition(t, spec);
    case QueryMethod::leaf_arcs: return segment_leaf_arcs(t, spec);
    case QueryMethod::subtrees: return segment_subtrees(t, spec);
    case QueryMethod::crown: return segment_crowns(field, t, spec);
  }
  fail(ErrorCode::invalid_argument, "unknown query method");
}

std::vector<ReportRow> segmentation_report(const Segmentation& s) {
  std::vector<ReportRow> rows;
  rows.reserve(s.segments.size());
  for (const auto& seg : s.segments) rows.push_back({seg.id, seg.minimum_value, seg.vertex_count, seg.metric});
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return a.minimum_value < b.minimum_value || (a.minimum_value == b.minimum_value && a.id < b.id);
  });
  return rows;
}

}  // namespace timt
