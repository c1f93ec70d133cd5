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

#include "timt/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "timt/error.hpp"

namespace timt {

PersistenceDiagram persistence_diagram(const MergeTree& t) {
  PersistenceDiagram out;
  for (const auto& p : persistence_pairs(t))
    out.push_back({t.nodes[p.minimum].value, t.nodes[p.death].value});
  return out;
}

namespace {

// Hopcroft-Karp on a dense cost matrix restricted to cost <= eps.
class Matcher {
 public:
  Matcher(std::size_t n, std::vector<std::vector<std::pair<std::size_t, double>>> adj)
      : n_(n), adj_(std::move(adj)) {}

  bool perfect(double eps) {
    match_l_.assign(n_, kFree);
    match_r_.assign(n_, kFree);
    std::size_t matched = 0;
    while (bfs(eps))
      for (std::size_t u = 0; u < n_; ++u)
        if (match_l_[u] == kFree && dfs(u, eps)) ++matched;
    return matched == n_;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  static constexpr std::size_t kInf = static_cast<std::size_t>(-2);

  bool bfs(double eps) {
    dist_.assign(n_, kInf);
    std::queue<std::size_t> q;
    for (std::size_t u = 0; u < n_; ++u)
      if (match_l_[u] == kFree) {
        dist_[u] = 0;
        q.push(u);
      }
    bool found = false;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (const auto& [v, c] : adj_[u]) {
        if (c > eps) continue;
        const std::size_t w = match_r_[v];
        if (w == kFree) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u, double eps) {
    for (const auto& [v, c] : adj_[u]) {
      if (c > eps) continue;
      const std::size_t w = match_r_[v];
      if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w, eps))) {
        match_l_[u] = v;
        match_r_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
  std::vector<std::size_t> match_l_, match_r_, dist_;
};

double linf(const DiagramPoint& p, const DiagramPoint& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

double to_diagonal(const DiagramPoint& p) { return std::abs(p.death - p.birth) / 2.0; }

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.size() > kBottleneckPointLimit || b.size() > kBottleneckPointLimit)
    fail(ErrorCode::limit_exceeded, "bottleneck distance limited to " +
                                        std::to_string(kBottleneckPointLimit) +
                                        " points per diagram");
  const std::size_t n = a.size(), m = b.size();
  if (n + m == 0) return 0.0;

  // Left: a[0..n) then diagonal copies of b. Right: b[0..m) then diagonal copies of a.
  const std::size_t size = n + m;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(size);
  std::vector<double> candidates{0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = linf(a[i], b[j]);
      adj[i].push_back({j, c});
      candidates.push_back(c);
    }
    const double d = to_diagonal(a[i]);
    adj[i].push_back({m + i, d});
    candidates.push_back(d);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double d = to_diagonal(b[j]);
    adj[n + j].push_back({j, d});
    candidates.push_back(d);
    for (std::size_t i = 0; i < n; ++i) adj[n + j].push_back({m + i, 0.0});
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  Matcher matcher(size, std::move(adj));
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (matcher.perfect(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace timt
