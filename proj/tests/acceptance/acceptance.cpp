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

// One [PASS]/[FAIL] line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "timt/dictionary.hpp"
#include "timt/io/binary.hpp"
#include "timt/io/fixtures.hpp"
#include "timt/merge_tree.hpp"
#include "timt/queries.hpp"
#include "timt/stability.hpp"
#include "timt/tensor.hpp"
#include "timt/traits.hpp"

using namespace timt;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances and budgets.
constexpr int kOracleFields = 200;
constexpr double kOracleSeconds = 30;
constexpr int kStabilityTrials = 100;
constexpr double kStabilityTol = 1e-9;
constexpr int kWestinTensors = 100000;
constexpr double kWestinSumTol = 1e-12;
constexpr double kEigenResidualTol = 1e-8;
constexpr int kZeroSetFixtures = 50;
constexpr int kQueryFields = 100;
constexpr int kKsvdSeeds = 5;
constexpr int kKsvdSeedsRequired = 4;
constexpr double kKsvdCosine = 0.97;
constexpr double kKsvdAtomFraction = 0.75;
constexpr double kKsvdObjectiveTol = 1e-9;
constexpr double kPhantomAgreement = 0.95;
constexpr double kPhantomDelta = 0.2;
constexpr double kScaleSeconds = 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

bool tree_matches_oracle(const ScalarField& f) {
  const MergeTree t = compute_merge_tree(f);
  const auto h = oracle::track_sublevel_components(f.grid, f.values);
  std::vector<VertexId> leaves, saddles;
  for (const auto& n : t.nodes) {
    if (n.kind == NodeKind::leaf) leaves.push_back(n.vertex);
    if (n.kind == NodeKind::saddle) saddles.push_back(n.vertex);
  }
  std::sort(leaves.begin(), leaves.end());
  std::sort(saddles.begin(), saddles.end());
  if (leaves != h.minima || saddles != h.saddles) return false;
  if (t.nodes.back().kind != NodeKind::root || t.nodes.back().vertex != h.last) return false;
  for (const auto& p : persistence_pairs(t)) {
    const VertexId m = t.nodes[p.minimum].vertex;
    if (t.nodes[p.death].vertex != h.death[static_cast<std::size_t>(m)]) return false;
  }
  for (std::size_t v = 0; v < f.size(); ++v) {
    const auto& arc = t.arcs[static_cast<std::size_t>(t.vertex_arc[v])];
    if (t.nodes[arc.lower].vertex != h.arc_lower[v] || t.nodes[arc.upper].vertex != h.arc_upper[v]) return false;
  }
  return true;
}

Outcome merge_tree_oracle() {
  const auto t0 = Clock::now();
  int matched = 0, total = 0;
  for (Connectivity c : {Connectivity::face6, Connectivity::vertex26}) {
    const GridSpec g({6, 6, 4}, {1, 1, 1}, c);
    for (int seed = 0; seed < kOracleFields; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
      const ScalarField f{g, oracle::random_integer_field(g.vertex_count(), 10, rng)};
      matched += tree_matches_oracle(f);
      ++total;
    }
  }
  const double secs = seconds_since(t0);
  return {matched == total && secs < kOracleSeconds,
          std::to_string(matched) + "/" + std::to_string(total) + " fields match, " + fmt("%.2f s", secs)};
}

Outcome stability_chain() {
  int ok = 0;
  double worst_b = -kInf, worst_h = -kInf;
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < kStabilityTrials; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    const MultiField mf = io::smooth_random_multifield({16, 16, 16}, 3, 1000 + static_cast<std::uint64_t>(trial));
    const std::vector<std::string> ch{"f0", "f1", "f2"};
    const TraitExpr a = make_trait(PointTrait{ch, {u(rng), u(rng), u(rng)}});
    const TraitExpr b = make_trait(PointTrait{ch, {u(rng), u(rng), u(rng)}});
    const StabilityReport r = verify_stability_chain(a, b, mf, kStabilityTol);
    const bool pass = r.bottleneck <= r.sup_diff + kStabilityTol && r.sup_diff <= r.hausdorff + kStabilityTol;
    ok += pass;
    worst_b = std::max(worst_b, r.bottleneck - r.sup_diff);
    worst_h = std::max(worst_h, r.sup_diff - r.hausdorff);
  }
  return {ok == kStabilityTrials, std::to_string(ok) + "/" + std::to_string(kStabilityTrials) +
                                      " trials; max(d_B - sup) = " + fmt("%.3g", worst_b) +
                                      ", max(sup - d_H) = " + fmt("%.3g", worst_h)};
}

Outcome westin_closure() {
  std::mt19937_64 rng(77);
  double worst_sum = 0, worst_residual = 0;
  int ok = 0;
  for (int i = 0; i < kWestinTensors; ++i) {
    const Sym3Tensor t = oracle::random_spd(rng);
    const EigenTriple e = sym3_eigenvalues(t);
    const WestinMeasures w = westin_measures(e);
    const double sum_err = std::abs(w.linear + w.planar + w.spherical - 1);
    const double f = t.frobenius_norm();
    const double bound = kEigenResidualTol * (1 + f * f * f);
    double residual = 0;
    for (double l : {e.l1, e.l2, e.l3}) residual = std::max(residual, std::abs(t.characteristic(l)));
    worst_sum = std::max(worst_sum, sum_err);
    worst_residual = std::max(worst_residual, residual / bound);
    ok += sum_err <= kWestinSumTol && residual <= bound;
  }
  return {ok == kWestinTensors, std::to_string(ok) + "/" + std::to_string(kWestinTensors) +
                                    " tensors; max |c_l+c_p+c_s-1| = " + fmt("%.3g", worst_sum) +
                                    ", max residual/bound = " + fmt("%.3g", worst_residual)};
}

MultiField zero_set_fixture(int seed) {
  const auto s = static_cast<std::uint64_t>(seed);
  switch (seed % 3) {
    case 0: {
      io::FixtureParams p;
      p.dims = std::array<std::int64_t, 3>{32, 32, 1};
      return io::generate_fixture(io::FixtureKind::crossing_stripes_2d, p, s);
    }
    case 1: {
      io::FixtureParams p;
      p.dims = std::array<std::int64_t, 3>{12, 12, 8};
      p.noise = 0.01;
      return io::generate_fixture(io::FixtureKind::two_blob_3d, p, s);
    }
    default:
      return io::smooth_random_multifield({10, 9, 7}, 3, s);
  }
}

Outcome zero_set_preimage() {
  int ok = 0, checks = 0;
  for (int seed = 0; seed < kZeroSetFixtures; ++seed) {
    const MultiField mf = zero_set_fixture(seed);
    const auto names = io::attribute_channels(mf);
    const std::vector<std::string> sub{names[0], names[1]};
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_int_distribution<std::size_t> pick(0, mf.vertex_count() - 1);

    const std::size_t k = pick(rng);
    std::vector<double> at;
    for (const auto& n : sub) at.push_back(mf.channel(n).values[k]);
    const ScalarField hp = induced_distance_field(make_trait(PointTrait{sub, at}), mf);

    const std::size_t k2 = pick(rng);
    std::vector<double> lo, hi;
    for (const auto& n : sub) {
      const auto& v = mf.channel(n).values;
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      const double c = v[k2], w = 0.1 * (*mx - *mn);
      lo.push_back(c - w);
      hi.push_back(c + w);
    }
    const ScalarField hb = induced_distance_field(make_trait(BoxTrait{sub, lo, hi}), mf);

    bool good = true;
    for (std::size_t v = 0; v < mf.vertex_count(); ++v) {
      bool in_point = true, in_box = true;
      for (std::size_t i = 0; i < sub.size(); ++i) {
        const double x = mf.channel(sub[i]).values[v];
        in_point = in_point && x == at[i];
        in_box = in_box && x >= lo[i] && x <= hi[i];
      }
      good = good && (hp.values[v] == 0) == in_point && hp.values[v] >= 0;
      good = good && (hb.values[v] == 0) == in_box && hb.values[v] >= 0;
    }
    good = good && hp.values[k] == 0 && hb.values[k2] == 0;
    ok += good;
    ++checks;
  }
  return {ok == checks, std::to_string(ok) + "/" + std::to_string(checks) + " fixtures (point and box traits)"};
}

std::map<std::int32_t, std::vector<VertexId>> segment_members(const Segmentation& s) {
  std::map<std::int32_t, std::vector<VertexId>> out;
  for (std::size_t v = 0; v < s.labels.size(); ++v)
    if (s.labels[v] != kBackground) out[s.labels[v]].push_back(static_cast<VertexId>(v));
  return out;
}

bool well_formed(const ScalarField& f, const Segmentation& s) {
  const auto m = segment_members(s);
  if (m.size() != s.segments.size()) return false;
  for (const auto& seg : s.segments) {
    auto it = m.find(seg.id);
    if (it == m.end() || it->second.size() != seg.vertex_count) return false;
    if (!oracle::is_connected(f.grid, it->second)) return false;
    double lo = kInf;
    for (VertexId v : it->second) lo = std::min(lo, f.values[static_cast<std::size_t>(v)]);
    if (seg.minimum_value != lo) return false;
  }
  return true;
}

std::string query_field_failures(const ScalarField& f) {
  std::ostringstream why;
  const MergeTree t = compute_merge_tree(f);
  const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());

  QuerySpec bd;
  bd.threshold = 1.0;
  const Segmentation b = run_query(f, t, bd);
  if (!well_formed(f, b)) why << " bd-shape";
  if (std::count(b.labels.begin(), b.labels.end(), kBackground) != 0) why << " bd-background";
  bd.threshold = kInf;
  if (run_query(f, t, bd).segments.size() != 1) why << " bd-inf";

  QuerySpec leaf;
  leaf.method = QueryMethod::leaf_arcs;
  const Segmentation l = run_query(f, t, leaf);
  if (!well_formed(f, l) || l.segments.size() != t.leaf_count()) why << " leaf";
  for (std::size_t v = 0; v < f.size(); ++v) {
    const auto& arc = t.arcs[static_cast<std::size_t>(t.vertex_arc[v])];
    const bool on_leaf_arc = t.nodes[arc.lower].kind == NodeKind::leaf;
    if ((l.labels[v] != kBackground) != on_leaf_arc) {
      why << " leaf-background";
      break;
    }
  }

  QuerySpec sub;
  sub.method = QueryMethod::subtrees;
  sub.cut_level = (*mn + *mx) / 2;
  const Segmentation s = run_query(f, t, sub);
  if (!well_formed(f, s)) why << " subtree-shape";
  for (std::size_t v = 0; v < f.size(); ++v)
    if ((s.labels[v] != kBackground) != (f.values[v] < *sub.cut_level)) {
      why << " subtree-background";
      break;
    }
  sub.cut_level = *mx + 1;
  if (run_query(f, t, sub).segments.size() != 1) why << " subtree-above-root";

  QuerySpec crown;
  crown.method = QueryMethod::crown;
  crown.delta = 2.0;
  const Segmentation c = run_query(f, t, crown);
  if (!well_formed(f, c)) why << " crown-shape";
  crown.delta = (*mx - *mn) + 1;
  const Segmentation all = run_query(f, t, crown);
  if (all.segments.size() != 1 || std::count(all.labels.begin(), all.labels.end(), kBackground) != 0)
    why << " crown-above-range";
  return why.str();
}

Outcome query_invariants() {
  int ok = 0;
  std::string first_failure;
  for (int seed = 0; seed < kQueryFields; ++seed) {
    std::mt19937_64 rng(500 + static_cast<std::uint64_t>(seed));
    const GridSpec g = seed % 2 ? GridSpec({7, 6, 4}) : GridSpec({12, 10, 1});
    const ScalarField f{g, oracle::random_integer_field(g.vertex_count(), 10, rng), FieldMeaning::distance};
    const std::string why = query_field_failures(f);
    ok += why.empty();
    if (!why.empty() && first_failure.empty()) first_failure = "; seed " + std::to_string(seed) + ":" + why;
  }
  return {ok == kQueryFields, std::to_string(ok) + "/" + std::to_string(kQueryFields) +
                                  " fields satisfy all four methods" + first_failure};
}

Outcome ksvd_planted() {
  int seeds_ok = 0;
  bool monotone = true;
  std::ostringstream per_seed;
  for (int seed = 0; seed < kKsvdSeeds; ++seed) {
    std::mt19937_64 rng(2000 + static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> g;
    Eigen::MatrixXd planted(6, 8);
    for (Eigen::Index i = 0; i < planted.size(); ++i) planted.data()[i] = g(rng);
    planted.colwise().normalize();
    std::uniform_int_distribution<int> pick(0, 7);
    Eigen::MatrixXd f(6, 500);
    for (Eigen::Index j = 0; j < 500; ++j) {
      const int a = pick(rng);
      int b = pick(rng);
      while (b == a) b = pick(rng);
      f.col(j) = g(rng) * planted.col(a) + g(rng) * planted.col(b);
    }
    const KsvdResult r = ksvd_learn(f, {8, 2, 30, static_cast<std::uint64_t>(seed), true});
    for (std::size_t i = 1; i < r.objective.size(); ++i)
      monotone = monotone && r.objective[i] <= r.objective[i - 1] + kKsvdObjectiveTol;
    const Eigen::MatrixXd cos = (planted.transpose() * r.dictionary.atoms).cwiseAbs();
    int recovered = 0;
    for (Eigen::Index i = 0; i < 8; ++i) recovered += cos.row(i).maxCoeff() >= kKsvdCosine;
    seeds_ok += recovered >= kKsvdAtomFraction * 8;
    per_seed << (seed ? "," : "") << recovered;
  }
  return {seeds_ok >= kKsvdSeedsRequired && monotone,
          std::to_string(seeds_ok) + "/" + std::to_string(kKsvdSeeds) + " seeds recover >= 6/8 atoms (per seed: " +
              per_seed.str() + "); objective " + (monotone ? "non-increasing" : "INCREASED")};
}

/// Crowns of every atom's similarity field, each vertex credited to the atom
/// whose crown holds it with the highest similarity; majority mapping from
/// atoms to ground-truth classes. Returns agreement on interior vertices.
double phantom_agreement(const MultiField& mf, std::size_t atoms, int sparsity, std::uint64_t seed,
                         std::string* detail) {
  const auto names = io::attribute_channels(mf);
  const MultiField space = assemble_attribute_space(mf, names);
  const KsvdResult r = ksvd_learn(attribute_matrix(space), {atoms, sparsity, 30, seed, true});
  const std::size_t n = mf.vertex_count();
  std::vector<int> owner(n, -1);
  std::vector<double> best(n, kInf);
  QuerySpec spec;
  spec.method = QueryMethod::crown;
  spec.delta = kPhantomDelta;
  for (std::size_t k = 0; k < atoms; ++k) {
    const Eigen::VectorXd atom = r.dictionary.atoms.col(static_cast<Eigen::Index>(k));
    const std::vector<double> a(atom.data(), atom.data() + atom.size());
    const ScalarField h = similarity_to_distance(similarity_field(a, space).field);
    const Segmentation s = run_query(h, compute_merge_tree(h), spec);
    for (std::size_t v = 0; v < n; ++v)
      if (s.labels[v] != kBackground && h.values[v] < best[v]) {
        best[v] = h.values[v];
        owner[v] = static_cast<int>(k);
      }
  }

  const auto& truth = mf.channel("label").values;
  const GridSpec g = mf.grid().with_connectivity(Connectivity::vertex8);
  std::vector<char> interior(n, 1);
  for (std::size_t v = 0; v < n; ++v)
    g.for_each_neighbor(static_cast<VertexId>(v), [&](VertexId u) {
      if (truth[static_cast<std::size_t>(u)] != truth[v]) interior[v] = 0;
    });

  std::map<int, std::map<int, std::size_t>> votes;
  for (std::size_t v = 0; v < n; ++v)
    if (interior[v]) ++votes[owner[v]][static_cast<int>(truth[v])];
  std::map<int, int> mapping;
  for (const auto& [atom, counts] : votes) {
    int cls = -1;
    std::size_t most = 0;
    for (const auto& [c, cnt] : counts)
      if (cnt > most) {
        most = cnt;
        cls = c;
      }
    mapping[atom] = atom < 0 ? -1 : cls;
  }
  std::size_t agree = 0, total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!interior[v]) continue;
    ++total;
    agree += mapping[owner[v]] == static_cast<int>(truth[v]);
  }
  std::set<int> classes_hit;
  for (const auto& [atom, cls] : mapping)
    if (cls >= 0) classes_hit.insert(cls);
  if (detail)
    *detail = std::to_string(agree) + "/" + std::to_string(total) + ", classes covered " +
              std::to_string(classes_hit.size());
  return static_cast<double>(agree) / static_cast<double>(total);
}

Outcome phantom_end_to_end() {
  const MultiField mf = io::generate_fixture(io::FixtureKind::crossing_stripes_2d, {}, 11);
  std::string d3, d6;
  const double a3 = phantom_agreement(mf, 3, 1, 11, &d3);
  const double a6 = phantom_agreement(mf, 6, 3, 11, &d6);
  return {a3 >= kPhantomAgreement, "K=3/T0=1 agreement " + fmt("%.4f", a3) + " (" + d3 + "); K=6/T0=3 agreement " +
                                       fmt("%.4f", a6) + " (" + d6 + ", reported)"};
}

Outcome scale_check() {
  const MultiField mf = io::smooth_random_multifield({128, 128, 128}, 1, 5);
  const ScalarField h{mf.grid(), mf.channel(0).values};
  const auto t0 = Clock::now();
  const MergeTree t = compute_merge_tree(h);
  QuerySpec spec;
  spec.threshold = 0.05;
  const Segmentation s = run_query(h, t, spec);
  const double secs = seconds_since(t0);
  return {secs < kScaleSeconds, "128^3 merge tree + branch decomposition (" + std::to_string(s.segments.size()) +
                                    " segments) in " + fmt("%.2f s", secs)};
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = io::read_text(e.path());
  return out;
}

Outcome cli_determinism() {
  const std::vector<std::vector<std::string>> steps = {
      {"fixture", "crossing_stripes_2d", "-o", "stripes.json", "--seed", "9"},
      {"ingest", "stripes.json", "--select", "c0,c1,c2,c3,c4,c5,c6,c7", "--scaling", "zscore", "-o", "norm.json"},
      {"dict-learn", "norm.json", "-o", "dict", "--atoms", "6", "--sparsity", "3", "--seed", "9"},
      {"dict-suggest", "dict.json", "norm.json", "-o", "suggestions.json", "--traits-dir", "traits"},
      {"trait-eval", "norm.json", "--trait", "traits/atom-0.json", "-o", "h.json"},
      {"mt", "h.json", "-o", "tree", "--simplify-metric", "hypervolume", "--simplify-threshold", "5"},
      {"segment", "h.json", "--method", "branch_decomposition", "--threshold", "0.5", "-o", "bd"},
      {"segment", "h.json", "--method", "crown", "--delta", "0.2", "-o", "crown"},
      {"fixture", "tensor_block", "-o", "stress.json", "--dims", "10", "10", "6"},
      {"derive", "stress.json", "--kind", "max_shear", "--inputs", "sxx,syy,szz,sxy,sxz,syz", "-o", "shear.json"},
  };
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"determinism_1", "determinism_2"}) {
    const fs::path dir = cli::scratch(std::string("acceptance_") + name);
    for (const auto& args : steps) {
      const cli::Result r = cli::run(dir, args);
      if (r.status != 0) return {false, "step '" + args[0] + "' exited " + std::to_string(r.status) + ": " + r.err};
    }
    runs.push_back(directory_bytes(dir));
  }
  std::size_t differing = 0;
  for (const auto& [name, bytes] : runs[0]) differing += !runs[1].contains(name) || runs[1].at(name) != bytes;
  const bool same = differing == 0 && runs[0].size() == runs[1].size();
  return {same, std::to_string(runs[0].size()) + " artifacts over " + std::to_string(steps.size()) + " steps, " +
                    std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"merge-tree oracle equivalence", merge_tree_oracle},
      {"stability chain", stability_chain},
      {"Westin closure", westin_closure},
      {"zero level set equals preimage", zero_set_preimage},
      {"query-method invariants", query_invariants},
      {"K-SVD planted recovery", ksvd_planted},
      {"phantom-analog end-to-end", phantom_end_to_end},
      {"scale check", scale_check},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
