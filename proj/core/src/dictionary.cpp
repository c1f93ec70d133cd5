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

#include "timt/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "timt/error.hpp"

namespace timt {

void validate(const Dictionary& d) {
  if (d.atoms.cols() < 1) fail(ErrorCode::invalid_argument, "dictionary has no atoms");
  for (Eigen::Index k = 0; k < d.atoms.cols(); ++k)
    if (!(std::abs(d.atoms.col(k).norm() - 1.0) <= 1e-10))
      fail(ErrorCode::invalid_argument, "atom " + std::to_string(k) + " is not unit-norm");
  if (!d.channels.empty() && d.channels.size() != d.dimension())
    fail(ErrorCode::dimension_mismatch, "dictionary channel list does not match atom dimension");
}

OmpResult omp_sparse_code(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& signal, int sparsity) {
  if (!signal.allFinite()) fail(ErrorCode::non_finite, "signal has non-finite entries");
  if (signal.size() != atoms.rows())
    fail(ErrorCode::dimension_mismatch, "signal dimension does not match dictionary");
  if (sparsity < 1 || sparsity > atoms.cols())
    fail(ErrorCode::invalid_argument, "sparsity must be in [1, K]");

  OmpResult out;
  const double tol = kOmpTolerance * std::max(1.0, signal.norm());
  Eigen::VectorXd residual = signal;
  out.residual_norm = residual.norm();
  std::vector<Eigen::Index> support;
  Eigen::VectorXd coeffs;

  for (int round = 0; round < sparsity && out.residual_norm > tol; ++round) {
    const Eigen::VectorXd corr = atoms.transpose() * residual;
    Eigen::Index best = -1;
    double best_abs = 0;
    for (Eigen::Index k = 0; k < corr.size(); ++k) {
      if (std::find(support.begin(), support.end(), k) != support.end()) continue;
      if (std::abs(corr[k]) > best_abs) {
        best_abs = std::abs(corr[k]);
        best = k;
      }
    }
    if (best < 0) break;
    support.push_back(best);
    Eigen::MatrixXd sub(atoms.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = atoms.col(support[i]);
    coeffs = sub.colPivHouseholderQr().solve(signal);
    residual = signal - sub * coeffs;
    out.residual_norm = residual.norm();
    out.residual_norms.push_back(out.residual_norm);
  }
  for (std::size_t i = 0; i < support.size(); ++i)
    out.code.emplace_back(static_cast<std::size_t>(support[i]), coeffs[static_cast<Eigen::Index>(i)]);
  return out;
}

Eigen::MatrixXd attribute_matrix(const MultiField& mf) {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(mf.channel_count()), static_cast<Eigen::Index>(mf.vertex_count()));
  for (std::size_t c = 0; c < mf.channel_count(); ++c) {
    const auto& v = mf.channel(c).values;
    for (std::size_t i = 0; i < v.size(); ++i) f(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) = v[i];
  }
  return f;
}

Eigen::MatrixXd reconstruct(const Dictionary& d, const SparseCodes& codes) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.atoms.rows(), static_cast<Eigen::Index>(codes.columns.size()));
  for (std::size_t j = 0; j < codes.columns.size(); ++j)
    for (const auto& [k, c] : codes.columns[j])
      out.col(static_cast<Eigen::Index>(j)) += c * d.atoms.col(static_cast<Eigen::Index>(k));
  return out;
}

namespace {

// Flip so the largest-magnitude entry is positive; returns the sign applied.
double canonical_sign(Eigen::Ref<Eigen::VectorXd> atom) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < atom.size(); ++i)
    if (std::abs(atom[i]) > std::abs(atom[arg])) arg = i;
  if (atom[arg] < 0) {
    atom = -atom;
    return -1.0;
  }
  return 1.0;
}

double column_residual_sq(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& f, const SparseColumn& code) {
  Eigen::VectorXd r = f;
  for (const auto& [k, c] : code) r -= c * atoms.col(static_cast<Eigen::Index>(k));
  return r.squaredNorm();
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

// Re-codes every column against a dictionary whose atom k was swapped for a
// data column; old codes not touching k compete with fresh OMP codes.
void replace_duplicates(const Eigen::MatrixXd& data, const KsvdOptions& options, Dictionary& dict,
                        SparseCodes& codes, Eigen::MatrixXd& residual) {
  if (options.duplicate_cosine > 1) return;
  const Eigen::Index k_atoms = dict.atoms.cols();
  const Eigen::MatrixXd gram = (dict.atoms.transpose() * dict.atoms).cwiseAbs();
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(data.cols()), 0);
  for (Eigen::Index k = 1; k < k_atoms; ++k) {
    if (gram.row(k).head(k).maxCoeff() < options.duplicate_cosine) continue;
    Eigen::Index worst = -1;
    double worst_sq = 0;
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      const double r = residual.col(j).squaredNorm();
      if (!taken[static_cast<std::size_t>(j)] && r > worst_sq) {
        worst_sq = r;
        worst = j;
      }
    }
    if (worst < 0) return;
    taken[static_cast<std::size_t>(worst)] = 1;

    Eigen::MatrixXd atoms = dict.atoms;
    atoms.col(k) = data.col(worst).normalized();
    canonical_sign(atoms.col(k));
    std::vector<SparseColumn> columns(codes.columns.size());
    double objective = 0;
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      const Eigen::VectorXd f = data.col(j);
      OmpResult fresh = omp_sparse_code(atoms, f, options.sparsity);
      double best = fresh.residual_norm * fresh.residual_norm;
      columns[static_cast<std::size_t>(j)] = std::move(fresh.code);
      const auto& old = codes.columns[static_cast<std::size_t>(j)];
      const bool uses_k = std::any_of(old.begin(), old.end(), [&](const auto& e) {
        return e.first == static_cast<std::size_t>(k);
      });
      if (!uses_k) {
        const double old_sq = residual.col(j).squaredNorm();
        if (old_sq < best) {
          best = old_sq;
          columns[static_cast<std::size_t>(j)] = old;
        }
      }
      objective += best;
    }
    if (objective > residual.squaredNorm()) continue;
    dict.atoms = std::move(atoms);
    codes.columns = std::move(columns);
    residual = data - reconstruct(dict, codes);
    dict.meta.reseeded_atoms.push_back(static_cast<std::size_t>(k));
  }
}

}  // namespace

KsvdResult ksvd_learn(const Eigen::MatrixXd& data, const KsvdOptions& options) {
  const Eigen::Index m = data.rows(), n = data.cols();
  const auto k_atoms = static_cast<Eigen::Index>(options.atoms ? options.atoms : 2 * static_cast<std::size_t>(m));
  if (m < 1) fail(ErrorCode::invalid_argument, "data has no attribute dimensions");
  if (!data.allFinite()) fail(ErrorCode::non_finite, "training data has non-finite entries");
  if (k_atoms > n) fail(ErrorCode::invalid_argument, "K exceeds the number of data columns");
  if (options.sparsity < 1 || options.sparsity > k_atoms)
    fail(ErrorCode::invalid_argument, "sparsity must be in [1, K]");
  if (options.iterations < 1) fail(ErrorCode::invalid_argument, "iterations must be >= 1");
  if (data.squaredNorm() == 0) fail(ErrorCode::degenerate_channel, "training data is rank 0 (all zero)");

  std::mt19937_64 rng(options.seed);
  KsvdResult out;
  Dictionary& dict = out.dictionary;
  dict.meta.sparsity = options.sparsity;
  dict.meta.seed = options.seed;
  dict.atoms.resize(m, k_atoms);

  // Initialization: K distinct nonzero columns, seeded partial Fisher-Yates.
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  Eigen::Index filled = 0;
  for (std::size_t i = 0; i < pool.size() && filled < k_atoms; ++i) {
    const std::size_t j = i + draw(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    const double norm = data.col(pool[i]).norm();
    if (norm == 0) continue;
    dict.atoms.col(filled++) = data.col(pool[i]) / norm;
  }
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  while (filled < k_atoms) {
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i) v[i] = uniform(rng);
    if (v.norm() == 0) continue;
    dict.atoms.col(filled++) = v.normalized();
  }
  for (Eigen::Index k = 0; k < k_atoms; ++k) canonical_sign(dict.atoms.col(k));

  SparseCodes& codes = out.codes;
  codes.atom_count = static_cast<std::size_t>(k_atoms);
  codes.columns.assign(static_cast<std::size_t>(n), {});
  const double scale = static_cast<double>(m) * static_cast<double>(n);

  for (int it = 0; it < options.iterations; ++it) {
    // Coding step.
    double objective = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd f = data.col(j);
      OmpResult fresh = omp_sparse_code(dict.atoms, f, options.sparsity);
      const double fresh_sq = fresh.residual_norm * fresh.residual_norm;
      auto& current = codes.columns[static_cast<std::size_t>(j)];
      const double old_sq = (it == 0) ? INFINITY : column_residual_sq(dict.atoms, f, current);
      if (fresh_sq <= old_sq) {
        current = std::move(fresh.code);
        objective += fresh_sq;
      } else {
        objective += old_sq;
      }
    }
    out.objective.push_back(objective);
    dict.meta.rmse.push_back(std::sqrt(objective / scale));

    // Dictionary update step on fixed supports.
    Eigen::MatrixXd residual = data - reconstruct(dict, codes);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> users(static_cast<std::size_t>(k_atoms));
    for (std::size_t j = 0; j < codes.columns.size(); ++j)
      for (std::size_t e = 0; e < codes.columns[j].size(); ++e) users[codes.columns[j][e].first].emplace_back(j, e);
    std::vector<std::uint8_t> reseed_used(static_cast<std::size_t>(n), 0);

    for (Eigen::Index k = 0; k < k_atoms; ++k) {
      const auto& omega = users[static_cast<std::size_t>(k)];
      if (omega.empty()) {
        Eigen::Index worst = -1;
        double worst_sq = -1;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (reseed_used[static_cast<std::size_t>(j)]) continue;
          const double r = residual.col(j).squaredNorm();
          if (r > worst_sq) {
            worst_sq = r;
            worst = j;
          }
        }
        if (worst >= 0 && worst_sq > 0) {
          reseed_used[static_cast<std::size_t>(worst)] = 1;
          dict.atoms.col(k) = residual.col(worst).normalized();
          canonical_sign(dict.atoms.col(k));
          dict.meta.reseeded_atoms.push_back(static_cast<std::size_t>(k));
        }
        continue;
      }
      const auto w = static_cast<Eigen::Index>(omega.size());
      Eigen::MatrixXd ek(m, w);
      for (Eigen::Index i = 0; i < w; ++i) {
        const auto [j, e] = omega[static_cast<std::size_t>(i)];
        ek.col(i) = residual.col(static_cast<Eigen::Index>(j)) + codes.columns[j][e].second * dict.atoms.col(k);
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(ek, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Eigen::VectorXd atom = svd.matrixU().col(0);
      Eigen::VectorXd coef = svd.singularValues()[0] * svd.matrixV().col(0);
      const double sign = canonical_sign(atom);
      coef *= sign;
      dict.atoms.col(k) = atom;
      for (Eigen::Index i = 0; i < w; ++i) {
        const auto [j, e] = omega[static_cast<std::size_t>(i)];
        codes.columns[j][e].second = coef[i];
        residual.col(static_cast<Eigen::Index>(j)) = ek.col(i) - coef[i] * atom;
      }
    }
    replace_duplicates(data, options, dict, codes, residual);
    out.objective.push_back(residual.squaredNorm());
    dict.meta.iterations = it + 1;

    const auto& r = dict.meta.rmse;
    if (options.early_stop && r.size() >= 4 && r[r.size() - 4] - r.back() < 1e-7) break;
  }
  dict.meta.final_rmse = std::sqrt(out.objective.back() / scale);
  return out;
}

Eigen::MatrixXd atom_similarity_matrix(const Dictionary& d) {
  const Eigen::Index k = d.atoms.cols();
  Eigen::MatrixXd s(k, k);
  Eigen::VectorXd norms = d.atoms.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      const double c = std::clamp(d.atoms.col(i).dot(d.atoms.col(j)) / (norms[i] * norms[j]), -1.0, 1.0);
      s(i, j) = s(j, i) = c;
    }
  return s;
}

AtomClusters cluster_atoms(const Eigen::MatrixXd& similarity, double threshold) {
  const Eigen::Index k = similarity.rows();
  if (similarity.cols() != k) fail(ErrorCode::invalid_argument, "similarity matrix must be square");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(similarity(i, i) - 1.0) > 1e-9)
      fail(ErrorCode::invalid_argument, "similarity matrix must have unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(similarity(i, j) - similarity(j, i)) > 1e-12)
        fail(ErrorCode::invalid_argument, "similarity matrix must be symmetric");
  }
  std::vector<std::size_t> parent(static_cast<std::size_t>(k));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (similarity(i, j) >= threshold) {
        const auto a = find(static_cast<std::size_t>(i)), b = find(static_cast<std::size_t>(j));
        parent[std::max(a, b)] = std::min(a, b);
      }

  AtomClusters out;
  out.cluster_of.assign(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> id_of_root(static_cast<std::size_t>(k), -1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const auto r = find(i);
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<std::int64_t>(out.clusters.size());
      out.clusters.emplace_back();
    }
    out.cluster_of[i] = static_cast<std::size_t>(id_of_root[r]);
    out.clusters[out.cluster_of[i]].push_back(i);
  }
  for (const auto& members : out.clusters) {
    std::size_t best = members.front();
    double best_total = -INFINITY;
    for (std::size_t a : members) {
      double total = 0;
      for (std::size_t b : members) total += similarity(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (total > best_total) {
        best_total = total;
        best = a;
      }
    }
    out.representatives.push_back(best);
  }
  return out;
}

std::vector<AtomSuggestion> suggest_atom_traits(const Dictionary& d, const SparseCodes& codes,
                                                const MultiField& mf) {
  if (d.dimension() != mf.channel_count())
    fail(ErrorCode::dimension_mismatch, "dictionary dimension " + std::to_string(d.dimension()) +
                                            " does not match attribute space dimension " +
                                            std::to_string(mf.channel_count()));
  const auto names = mf.channel_names();
  if (!d.channels.empty() && d.channels != names)
    fail(ErrorCode::dimension_mismatch, "dictionary channels do not match the attribute space");
  if (codes.atom_count != d.atom_count())
    fail(ErrorCode::dimension_mismatch, "codes and dictionary disagree on atom count");

  std::vector<double> score(d.atom_count(), 0.0);
  for (const auto& col : codes.columns)
    for (const auto& [k, c] : col) score.at(k) += std::abs(c);

  std::vector<AtomSuggestion> out;
  for (std::size_t k = 0; k < d.atom_count(); ++k) {
    PointTrait p{names, {}};
    for (Eigen::Index i = 0; i < d.atoms.rows(); ++i) p.coords.push_back(d.atoms(i, static_cast<Eigen::Index>(k)));
    out.push_back({k, make_trait(std::move(p)), score[k]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AtomSuggestion& a, const AtomSuggestion& b) { return a.score > b.score; });
  return out;
}

}  // namespace timt
