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

#include "timt/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "timt/error.hpp"

namespace timt {

std::string_view to_string(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::leaf: return "leaf";
    case NodeKind::saddle: return "saddle";
    case NodeKind::root: return "root";
  }
  return "leaf";
}

std::string_view to_string(SimplifyMetric m) noexcept {
  return m == SimplifyMetric::persistence ? "persistence" : "hypervolume";
}

std::optional<SimplifyMetric> parse_simplify_metric(std::string_view name) noexcept {
  if (name == "persistence") return SimplifyMetric::persistence;
  if (name == "hypervolume") return SimplifyMetric::hypervolume;
  return std::nullopt;
}

void MergeTree::index() {
  up_arc.assign(nodes.size(), kNoArc);
  down_arcs.assign(nodes.size(), {});
  vertex_arc.assign(values.size(), -1);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    up_arc[arcs[a].lower] = a;
    down_arcs[arcs[a].upper].push_back(a);
    for (VertexId v : arcs[a].members) vertex_arc[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(a);
  }
}

std::size_t MergeTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.kind == NodeKind::leaf; }));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), VertexId{0});
  }
  VertexId find(VertexId x) {
    VertexId root = x;
    while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(x)] != root) {
      const VertexId next = parent_[static_cast<std::size_t>(x)];
      parent_[static_cast<std::size_t>(x)] = root;
      x = next;
    }
    return root;
  }
  VertexId unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    auto& ra = rank_[static_cast<std::size_t>(a)];
    auto& rb = rank_[static_cast<std::size_t>(b)];
    if (ra < rb) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    if (ra == rb) ++rank_[static_cast<std::size_t>(a)];
    return a;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

MergeTree compute_merge_tree(const ScalarField& field, bool superlevel) {
  return compute_merge_tree(field, field.grid, superlevel);
}

MergeTree compute_merge_tree(const ScalarField& field, const GridSpec& grid, bool superlevel) {
  const std::size_t n = grid.vertex_count();
  if (field.values.size() != n)
    fail(ErrorCode::grid_mismatch, "field has " + std::to_string(field.values.size()) +
                                       " values, grid has " + std::to_string(n));
  MergeTree t;
  t.grid = grid;
  t.superlevel = superlevel;
  t.values = field.values;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(t.values[i]))
      fail(ErrorCode::non_finite, "non-finite field value at vertex " + std::to_string(i));
    if (superlevel) t.values[i] = -t.values[i];
  }
  t.levels = t.values;

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return t.precedes(a, b); });
  std::vector<std::uint8_t> processed(n, 0);

  DisjointSets sets(n);
  std::vector<std::size_t> component_arc(n, kNoArc);
  std::vector<VertexId> roots;
  roots.reserve(32);

  auto open_arc = [&](std::size_t lower, VertexId v) {
    t.arcs.push_back({lower, 0, {v}});
    return t.arcs.size() - 1;
  };

  for (VertexId v : order) {
    roots.clear();
    grid.for_each_neighbor(v, [&](VertexId u) {
      if (!processed[static_cast<std::size_t>(u)]) return;
      const VertexId r = sets.find(u);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    });
    processed[static_cast<std::size_t>(v)] = 1;
    const double value = t.values[static_cast<std::size_t>(v)];

    if (roots.empty()) {
      t.nodes.push_back({v, value, NodeKind::leaf});
      component_arc[static_cast<std::size_t>(v)] = open_arc(t.nodes.size() - 1, v);
    } else if (roots.size() == 1) {
      const std::size_t arc = component_arc[static_cast<std::size_t>(roots[0])];
      t.arcs[arc].members.push_back(v);
      const VertexId r = sets.unite(roots[0], v);
      component_arc[static_cast<std::size_t>(r)] = arc;
    } else {
      t.nodes.push_back({v, value, NodeKind::saddle});
      const std::size_t saddle = t.nodes.size() - 1;
      VertexId r = v;
      for (VertexId c : roots) {
        t.arcs[component_arc[static_cast<std::size_t>(c)]].upper = saddle;
        r = sets.unite(r, c);
      }
      component_arc[static_cast<std::size_t>(r)] = open_arc(saddle, v);
    }
  }

  const VertexId last = order.back();
  t.nodes.push_back({last, t.values[static_cast<std::size_t>(last)], NodeKind::root});
  t.arcs[component_arc[static_cast<std::size_t>(sets.find(last))]].upper = t.nodes.size() - 1;
  t.index();
  return t;
}

void check_invariants(const MergeTree& t) {
  auto bad = [](const std::string& what) { fail(ErrorCode::invalid_argument, "merge tree: " + what); };
  const std::size_t n = t.values.size();
  if (t.nodes.empty() || t.nodes.back().kind != NodeKind::root) bad("last node is not the root");
  for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i)
    if (t.nodes[i].kind == NodeKind::root) bad("more than one root");
  if (t.arcs.size() + 1 != t.nodes.size()) bad("arc count != node count - 1 (not a tree)");

  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t a = 0; a < t.arcs.size(); ++a) {
    const auto& arc = t.arcs[a];
    const auto& lo = t.nodes[arc.lower];
    const auto& up = t.nodes[arc.upper];
    if (!(arc.lower < arc.upper)) bad("arc " + std::to_string(a) + " does not point upwards");
    if (arc.members.empty()) bad("arc " + std::to_string(a) + " has no members");
    for (VertexId v : arc.members) {
      const auto i = static_cast<std::size_t>(v);
      if (i >= n || seen[i]) bad("arc members do not partition the vertices");
      seen[i] = 1;
      const double level = t.levels[i];
      if (level < lo.value || level > up.value)
        bad("member level outside arc range on arc " + std::to_string(a));
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) bad("a vertex belongs to no arc");

  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto down = t.down_arcs[i].size();
    const auto kind = t.nodes[i].kind;
    if (kind == NodeKind::leaf && down != 0) bad("leaf with children");
    if (kind == NodeKind::saddle && down < 2) bad("saddle with fewer than two children");
    if (kind == NodeKind::root && down != 1) bad("root must have exactly one child");
    if (kind != NodeKind::root && t.up_arc[i] == kNoArc) bad("non-root node without parent arc");
  }
}

std::vector<std::size_t> elder_leaves(const MergeTree& t) {
  std::vector<std::size_t> elder(t.nodes.size());
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].kind == NodeKind::leaf) {
      elder[i] = i;
      continue;
    }
    std::size_t best = kNoArc;
    for (std::size_t a : t.down_arcs[i]) {
      const std::size_t e = elder[t.arcs[a].lower];
      if (best == kNoArc || t.precedes(t.nodes[e].vertex, t.nodes[best].vertex)) best = e;
    }
    elder[i] = best;
  }
  return elder;
}

std::vector<PersistencePair> persistence_pairs(const MergeTree& t) {
  const auto elder = elder_leaves(t);
  std::vector<PersistencePair> pairs;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].kind == NodeKind::leaf) continue;
    for (std::size_t a : t.down_arcs[i]) {
      const std::size_t e = elder[t.arcs[a].lower];
      if (e != elder[i] || t.nodes[i].kind == NodeKind::root)
        pairs.push_back({e, i, t.nodes[i].value - t.nodes[e].value});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const PersistencePair& a, const PersistencePair& b) { return a.minimum < b.minimum; });
  return pairs;
}

std::vector<double> hypervolume_per_pair(const MergeTree& t, std::span<const PersistencePair> pairs) {
  const auto elder = elder_leaves(t);
  std::vector<std::size_t> count(t.nodes.size(), 0);
  for (const auto& arc : t.arcs) count[elder[arc.lower]] += arc.members.size();
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(static_cast<double>(count[p.minimum]) * p.persistence);
  return out;
}

BranchDecomposition branch_decomposition(const MergeTree& t) {
  const auto pairs = persistence_pairs(t);
  const auto elder = elder_leaves(t);
  BranchDecomposition bd;
  std::vector<std::size_t> branch_of_leaf(t.nodes.size(), kNoArc);
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    bd.branches.push_back({pairs[b].minimum, pairs[b].death, pairs[b].persistence, {}, std::nullopt, {}});
    branch_of_leaf[pairs[b].minimum] = b;
  }
  bd.arc_branch.resize(t.arcs.size());
  for (std::size_t a = 0; a < t.arcs.size(); ++a) {
    const std::size_t b = branch_of_leaf[elder[t.arcs[a].lower]];
    bd.arc_branch[a] = b;
    bd.branches[b].arcs.push_back(a);  // arcs are sorted by lower node, i.e. bottom-up
  }
  for (std::size_t b = 0; b < bd.branches.size(); ++b) {
    const std::size_t death = bd.branches[b].death;
    if (t.nodes[death].kind == NodeKind::root) continue;
    const std::size_t parent = bd.arc_branch[t.up_arc[death]];
    bd.branches[b].parent = parent;
    bd.branches[parent].children.push_back(b);
  }
  return bd;
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

struct Workspace {
  const MergeTree& src;
  std::vector<TreeArc> arcs;
  std::vector<std::uint8_t> node_alive, arc_alive;
  std::vector<std::size_t> up_arc;
  std::vector<std::vector<std::size_t>> down;
  std::vector<double> levels;

  explicit Workspace(const MergeTree& t)
      : src(t),
        arcs(t.arcs),
        node_alive(t.nodes.size(), 1),
        arc_alive(t.arcs.size(), 1),
        up_arc(t.up_arc),
        down(t.down_arcs),
        levels(t.levels) {}
};

MergeTree compact(Workspace& w) {
  const MergeTree& src = w.src;
  MergeTree out;
  out.grid = src.grid;
  out.values = src.values;
  out.levels = std::move(w.levels);
  out.superlevel = src.superlevel;
  out.simplified = true;

  std::vector<std::size_t> renumber(src.nodes.size(), kNoArc);
  for (std::size_t i = 0; i < src.nodes.size(); ++i) {
    if (!w.node_alive[i]) continue;
    renumber[i] = out.nodes.size();
    out.nodes.push_back(src.nodes[i]);
  }
  for (std::size_t a = 0; a < w.arcs.size(); ++a) {
    if (!w.arc_alive[a]) continue;
    TreeArc arc = std::move(w.arcs[a]);
    arc.lower = renumber[arc.lower];
    arc.upper = renumber[arc.upper];
    std::sort(arc.members.begin(), arc.members.end(),
              [&](VertexId x, VertexId y) { return src.precedes(x, y); });
    out.arcs.push_back(std::move(arc));
  }
  std::sort(out.arcs.begin(), out.arcs.end(),
            [](const TreeArc& a, const TreeArc& b) { return a.lower < b.lower; });
  out.index();
  return out;
}

}  // namespace

MergeTree simplify(const MergeTree& t, SimplifyMetric metric, double threshold) {
  if (!(threshold >= 0)) fail(ErrorCode::invalid_argument, "simplification threshold must be >= 0");
  const auto pairs = persistence_pairs(t);
  const auto elder = elder_leaves(t);
  Workspace w(t);

  // Branches are identified by their minimum (leaf node).
  std::vector<std::size_t> death_of(t.nodes.size(), kNoArc);
  std::vector<double> persistence_of(t.nodes.size(), 0);
  for (const auto& p : pairs) {
    death_of[p.minimum] = p.death;
    persistence_of[p.minimum] = p.persistence;
  }
  std::vector<std::size_t> arc_branch(t.arcs.size());
  std::vector<std::size_t> count(t.nodes.size(), 0);
  for (std::size_t a = 0; a < t.arcs.size(); ++a) {
    arc_branch[a] = elder[t.arcs[a].lower];
    count[arc_branch[a]] += t.arcs[a].members.size();
  }
  const std::size_t global_min = pairs.front().minimum;

  auto metric_of = [&](std::size_t b) {
    return metric == SimplifyMetric::persistence
               ? persistence_of[b]
               : static_cast<double>(count[b]) * persistence_of[b];
  };
  auto cancellable = [&](std::size_t b) {
    return b != global_min && w.node_alive[b] && w.arcs[w.up_arc[b]].upper == death_of[b];
  };

  // (metric, younger first, branch, version)
  using Entry = std::tuple<double, std::int64_t, std::size_t, std::uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<std::uint64_t> version(t.nodes.size(), 0);
  auto push = [&](std::size_t b) {
    if (b == global_min) return;
    queue.emplace(metric_of(b), -static_cast<std::int64_t>(b), b, ++version[b]);
  };
  for (const auto& p : pairs) push(p.minimum);

  while (!queue.empty()) {
    const auto [m, tie, b, ver] = queue.top();
    if (ver != version[b] || !cancellable(b)) {
      queue.pop();
      continue;
    }
    if (!(m < threshold)) break;
    queue.pop();

    const std::size_t leaf_arc = w.up_arc[b];
    const std::size_t saddle = death_of[b];
    const double flat = t.nodes[saddle].value;
    for (VertexId v : w.arcs[leaf_arc].members) w.levels[static_cast<std::size_t>(v)] = flat;

    auto& siblings = w.down[saddle];
    siblings.erase(std::find(siblings.begin(), siblings.end(), leaf_arc));
    w.node_alive[b] = 0;
    w.arc_alive[leaf_arc] = 0;

    const std::size_t above = w.up_arc[saddle];
    auto& absorbed = w.arcs[leaf_arc].members;
    std::size_t survivor_branch = arc_branch[above];
    if (siblings.size() == 1) {
      // The saddle becomes regular: splice child and parent arcs.
      const std::size_t child = siblings.front();
      auto& keep = w.arcs[child];
      keep.members.insert(keep.members.end(), absorbed.begin(), absorbed.end());
      keep.members.insert(keep.members.end(), w.arcs[above].members.begin(), w.arcs[above].members.end());
      keep.upper = w.arcs[above].upper;
      auto& parent_down = w.down[keep.upper];
      *std::find(parent_down.begin(), parent_down.end(), above) = child;
      w.arc_alive[above] = 0;
      w.node_alive[saddle] = 0;
      survivor_branch = arc_branch[child];
    } else {
      auto& up = w.arcs[above].members;
      up.insert(up.end(), absorbed.begin(), absorbed.end());
    }
    count[survivor_branch] += absorbed.size();
    absorbed.clear();
    absorbed.shrink_to_fit();
    push(survivor_branch);
  }
  return compact(w);
}

}  // namespace timt
