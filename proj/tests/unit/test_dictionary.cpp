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

#include "timt/dictionary.hpp"
#include "timt/error.hpp"
#include "timt/io/fixtures.hpp"

using namespace timt;

namespace {

Eigen::MatrixXd random_unit_columns(Eigen::Index m, Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd d(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) d(i, j) = g(rng);
    d.col(j).normalize();
  }
  return d;
}

double coherence(const Eigen::MatrixXd& d) {
  const Eigen::MatrixXd gram = (d.transpose() * d).cwiseAbs();
  double mu = 0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j)
      if (i != j) mu = std::max(mu, gram(i, j));
  return mu;
}

/// Pushes correlated atom pairs apart until the mutual coherence drops below `target`.
Eigen::MatrixXd incoherent_dictionary(Eigen::Index m, Eigen::Index k, double target, std::mt19937_64& rng) {
  Eigen::MatrixXd d = random_unit_columns(m, k, rng);
  for (int it = 0; it < 5000 && coherence(d) >= target; ++it) {
    const Eigen::MatrixXd gram = d.transpose() * d;
    Eigen::MatrixXd next = d;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        if (i != j && std::abs(gram(i, j)) > target - 0.05) next.col(i) -= 0.1 * gram(i, j) * d.col(j);
    for (Eigen::Index i = 0; i < k; ++i) next.col(i).normalize();
    d = next;
  }
  return d;
}

/// Least-squares residual of the best support of size 2, by exhaustion.
double best_two_atom_residual(const Eigen::MatrixXd& d, const Eigen::VectorXd& s) {
  double best = s.norm();
  for (Eigen::Index a = 0; a < d.cols(); ++a)
    for (Eigen::Index b = a + 1; b < d.cols(); ++b) {
      Eigen::MatrixXd sub(d.rows(), 2);
      sub << d.col(a), d.col(b);
      const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(s);
      best = std::min(best, (s - sub * x).norm());
    }
  return best;
}

std::vector<std::size_t> support(const SparseColumn& c) {
  std::vector<std::size_t> s;
  for (const auto& [k, v] : c) s.push_back(k);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("OMP on an orthonormal basis and on scaled atoms") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const OmpResult r = omp_sparse_code(id, Eigen::Vector2d(3, 0), 1);
  REQUIRE(r.code.size() == 1);
  CHECK(r.code[0].first == 0);
  CHECK(r.code[0].second == 3.0);
  CHECK(r.residual_norm == 0.0);

  std::mt19937_64 rng(3);
  const Eigen::MatrixXd d = random_unit_columns(5, 7, rng);
  for (Eigen::Index k = 0; k < 7; ++k) {
    const OmpResult s = omp_sparse_code(d, 2 * d.col(k), 1);
    REQUIRE(s.code.size() == 1);
    CHECK(s.code[0].first == static_cast<std::size_t>(k));
    CHECK(s.code[0].second == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.residual_norm <= 1e-12);
  }
}

/// Exact recovery condition for a support: max over outside atoms of
/// |pinv(D_S) d_c|_1 < 1 guarantees OMP recovers every signal on S.
bool exact_recovery_condition(const Eigen::MatrixXd& d, const std::vector<std::size_t>& s) {
  Eigen::MatrixXd sub(d.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = d.col(static_cast<Eigen::Index>(s[i]));
  const Eigen::MatrixXd pinv = sub.completeOrthogonalDecomposition().pseudoInverse();
  for (Eigen::Index c = 0; c < d.cols(); ++c) {
    if (std::find(s.begin(), s.end(), static_cast<std::size_t>(c)) != s.end()) continue;
    if ((pinv * d.col(c)).lpNorm<1>() >= 1) return false;
  }
  return true;
}

TEST_CASE("OMP two-atom mixtures agree with exhaustive support search") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  int guaranteed = 0;
  for (int dict = 0; dict < 100; ++dict) {
    const Eigen::MatrixXd d = incoherent_dictionary(4, 8, 0.5, rng);
    REQUIRE(coherence(d) < 0.5);
    for (int trial = 0; trial < 20; ++trial) {
      int a = pick(rng), b = pick(rng);
      while (b == a) b = pick(rng);
      const Eigen::VectorXd s = coef(rng) * d.col(a) - coef(rng) * d.col(b);
      const OmpResult r = omp_sparse_code(d, s, 2);
      CHECK(r.code.size() <= 2);
      const std::vector<std::size_t> planted{static_cast<std::size_t>(std::min(a, b)),
                                             static_cast<std::size_t>(std::max(a, b))};
      const double best = best_two_atom_residual(d, s);
      CHECK(r.residual_norm >= best * (1 - 1e-9) - 1e-12);
      if (!exact_recovery_condition(d, planted)) continue;
      ++guaranteed;
      CHECK(support(r.code) == planted);
      CHECK(r.residual_norm <= best * (1 + 1e-9) + 1e-12);
      CHECK(r.residual_norm <= 1e-10);
    }
  }
  CHECK(guaranteed >= 30);
}

TEST_CASE("OMP residual norms never increase") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Eigen::MatrixXd d = random_unit_columns(6, 12, rng);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd s(6);
    for (Eigen::Index i = 0; i < 6; ++i) s(i) = g(rng);
    const OmpResult r = omp_sparse_code(d, s, 4);
    for (std::size_t i = 1; i < r.residual_norms.size(); ++i) CHECK(r.residual_norms[i] <= r.residual_norms[i - 1] + 1e-12);
  }
}

TEST_CASE("K-SVD on a rank-1 matrix recovers the direction") {
  Eigen::VectorXd u(4), v(30);
  u << 1, -2, 0.5, 3;
  for (Eigen::Index i = 0; i < 30; ++i) v(i) = 0.3 + 0.1 * static_cast<double>(i % 7) - (i % 3 == 0 ? 1.0 : 0.0);
  const Eigen::MatrixXd f = u * v.transpose();
  const KsvdResult r = ksvd_learn(f, {1, 1, 10, 3, true});
  const Eigen::VectorXd atom = r.dictionary.atoms.col(0);
  CHECK(std::abs(std::abs(atom.dot(u.normalized())) - 1) <= 1e-12);
  CHECK(r.dictionary.meta.final_rmse <= 1e-10);
}

TEST_CASE("K-SVD objective never increases and codes respect the sparsity") {
  io::FixtureParams p;
  p.channels = 60;
  const MultiField stripes = io::generate_fixture(io::FixtureKind::crossing_stripes_2d, p, 4);
  const auto names = io::attribute_channels(stripes);
  const MultiField a = assemble_attribute_space(stripes, names);
  const Eigen::MatrixXd f = attribute_matrix(a);
  const KsvdResult r = ksvd_learn(f, {6, 3, 10, 1, false});
  for (std::size_t i = 1; i < r.objective.size(); ++i) CHECK(r.objective[i] <= r.objective[i - 1] + 1e-9);
  for (std::size_t i = 1; i < r.dictionary.meta.rmse.size(); ++i)
    CHECK(r.dictionary.meta.rmse[i] <= r.dictionary.meta.rmse[i - 1] + 1e-9);
  for (const auto& col : r.codes.columns) CHECK(col.size() <= 3);
  CHECK_NOTHROW(validate(r.dictionary));
  for (Eigen::Index k = 0; k < r.dictionary.atoms.cols(); ++k) {
    Eigen::Index idx;
    r.dictionary.atoms.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(r.dictionary.atoms(idx, k) > 0);
  }
  const double err = (f - reconstruct(r.dictionary, r.codes)).norm();
  CHECK(err * err == doctest::Approx(r.objective.back()).epsilon(1e-9));
}

TEST_CASE("K-SVD is deterministic per seed") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd f = random_unit_columns(5, 80, rng);
  const KsvdResult a = ksvd_learn(f, {6, 2, 5, 42, true});
  const KsvdResult b = ksvd_learn(f, {6, 2, 5, 42, true});
  CHECK(a.dictionary.atoms == b.dictionary.atoms);
  CHECK(a.objective == b.objective);
}

TEST_CASE("K-SVD recovers a planted dictionary") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd planted = random_unit_columns(6, 8, rng);
  std::uniform_int_distribution<int> pick(0, 7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd f(6, 500);
  for (Eigen::Index j = 0; j < 500; ++j) {
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    f.col(j) = g(rng) * planted.col(a) + g(rng) * planted.col(b);
  }
  const KsvdResult r = ksvd_learn(f, {8, 2, 30, 1, true});
  const Eigen::MatrixXd cos = (planted.transpose() * r.dictionary.atoms).cwiseAbs();
  int recovered = 0;
  for (Eigen::Index i = 0; i < 8; ++i) recovered += cos.row(i).maxCoeff() >= 0.97;
  CHECK(recovered >= 6);
}

TEST_CASE("K-SVD replaces duplicated atoms") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 0.01);
  const Eigen::MatrixXd centers = random_unit_columns(8, 3, rng);
  Eigen::MatrixXd f(8, 400);
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    const Eigen::Index c = j < 300 ? 0 : j < 350 ? 1 : 2;
    f.col(j) = centers.col(c);
    for (Eigen::Index i = 0; i < f.rows(); ++i) f(i, j) += noise(rng);
  }
  auto all_found = [&](const Eigen::MatrixXd& atoms) {
    const Eigen::MatrixXd cos = (centers.transpose() * atoms).cwiseAbs();
    for (Eigen::Index c = 0; c < 3; ++c)
      if (cos.row(c).maxCoeff() < 0.99) return false;
    return true;
  };
  int missed_without = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    KsvdOptions opt{3, 1, 30, seed, true};
    const KsvdResult with = ksvd_learn(f, opt);
    CHECK(all_found(with.dictionary.atoms));
    for (std::size_t i = 1; i < with.objective.size(); ++i)
      CHECK(with.objective[i] <= with.objective[i - 1] + 1e-9);
    opt.duplicate_cosine = 2;
    const KsvdResult without = ksvd_learn(f, opt);
    missed_without += !all_found(without.dictionary.atoms);
    CHECK(without.dictionary.meta.reseeded_atoms.empty());
  }
  CHECK(missed_without > 0);
}

TEST_CASE("K-SVD argument validation") {
  const Eigen::MatrixXd f = Eigen::MatrixXd::Ones(3, 4);
  CHECK_THROWS_AS(ksvd_learn(f, {5, 1, 3, 0, true}), Error);
  CHECK_THROWS_AS(ksvd_learn(f, {2, 3, 3, 0, true}), Error);
  CHECK_THROWS_AS(ksvd_learn(Eigen::MatrixXd::Zero(3, 4), {2, 1, 3, 0, true}), Error);
}

TEST_CASE("atom similarity matrix") {
  Dictionary id;
  id.atoms = Eigen::MatrixXd::Identity(3, 3);
  CHECK(atom_similarity_matrix(id).isApprox(Eigen::MatrixXd::Identity(3, 3)));

  Dictionary dup;
  dup.atoms.resize(2, 2);
  dup.atoms << 0.6, 0.6, 0.8, 0.8;
  CHECK(atom_similarity_matrix(dup)(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(2);
  Dictionary r;
  r.atoms = random_unit_columns(5, 6, rng);
  const Eigen::MatrixXd s = atom_similarity_matrix(r);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      const double c = r.atoms.col(i).dot(r.atoms.col(j)) / (r.atoms.col(i).norm() * r.atoms.col(j).norm());
      CHECK(s(i, j) == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("atom clustering") {
  const AtomClusters single = cluster_atoms(Eigen::MatrixXd::Identity(4, 4), 0.5);
  CHECK(single.clusters.size() == 4);

  Eigen::MatrixXd dup = Eigen::MatrixXd::Identity(4, 4);
  dup(1, 3) = dup(3, 1) = 1.0;
  const AtomClusters d = cluster_atoms(dup, 0.9);
  CHECK(d.clusters.size() == 3);
  CHECK(d.cluster_of[1] == d.cluster_of[3]);

  Eigen::MatrixXd blocks = Eigen::MatrixXd::Constant(7, 7, 0.1);
  const int block_of[] = {0, 0, 1, 1, 1, 2, 2};
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (block_of[i] == block_of[j]) blocks(i, j) = i == j ? 1.0 : 0.95;
  const AtomClusters b = cluster_atoms(blocks, 0.5);
  CHECK(b.clusters.size() == 3);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      CHECK((b.cluster_of[static_cast<std::size_t>(i)] == b.cluster_of[static_cast<std::size_t>(j)]) ==
            (block_of[i] == block_of[j]));

  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.3;
  CHECK_THROWS_AS(cluster_atoms(asym, 0.5), Error);
}

TEST_CASE("atom-trait suggestions are ranked by usage") {
  MultiField mf(GridSpec({4, 1, 1}));
  mf.add_channel({"a", "", {1, 0, 1, 0}, {}});
  mf.add_channel({"b", "", {0, 1, 0, 1}, {}});
  Dictionary d;
  d.atoms = Eigen::MatrixXd::Identity(2, 3).eval();
  d.atoms.col(2) = Eigen::Vector2d(1, 1).normalized();
  d.channels = {"a", "b"};

  SparseCodes only_one{3, {{{1, 2.0}}, {{1, 1.0}}, {{1, 0.5}}, {{1, 1.0}}}};
  const auto s = suggest_atom_traits(d, only_one, mf);
  REQUIRE(s.size() == 3);
  CHECK(s[0].atom == 1);
  CHECK(s[0].score == 4.5);
  CHECK(s[2].score == 0.0);
  const auto& p = std::get<PointTrait>(*s[0].trait.root.primitive);
  CHECK(p.channels == std::vector<std::string>{"a", "b"});
  CHECK(p.coords == std::vector<double>{0, 1});

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> atom(0, 2);
  std::normal_distribution<double> g;
  SparseCodes random{3, std::vector<SparseColumn>(4)};
  std::vector<double> sums(3, 0.0);
  for (auto& col : random.columns) {
    const int k = atom(rng);
    const double c = g(rng);
    col.push_back({static_cast<std::size_t>(k), c});
    sums[static_cast<std::size_t>(k)] += std::abs(c);
  }
  std::vector<std::size_t> expected{0, 1, 2};
  std::stable_sort(expected.begin(), expected.end(), [&](auto x, auto y) { return sums[x] > sums[y]; });
  const auto rs = suggest_atom_traits(d, random, mf);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rs[i].atom == expected[i]);

  MultiField wrong(GridSpec({4, 1, 1}));
  wrong.add_channel({"a", "", {1, 0, 1, 0}, {}});
  CHECK_THROWS_AS(suggest_atom_traits(d, only_one, wrong), Error);
}
