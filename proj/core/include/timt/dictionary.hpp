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

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "timt/multifield.hpp"
#include "timt/traits.hpp"

namespace timt {

struct TrainingMeta {
  int sparsity = 1;  // T0
  int iterations = 0;  // iterations actually run
  std::uint64_t seed = 0;
  std::vector<double> rmse;  // after each coding step
  double final_rmse = 0;
  std::vector<std::size_t> reseeded_atoms;  // dead or duplicate atoms replaced, in order
};

/// M x K matrix of unit-norm atoms, sign-canonical (largest |entry| > 0).
struct Dictionary {
  Eigen::MatrixXd atoms;
  TrainingMeta meta;
  std::vector<std::string> channels;   // attribute space the atoms live in
  std::vector<Provenance> provenance;  // per channel, e.g. scaling constants

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(atoms.rows()); }
  std::size_t atom_count() const noexcept { return static_cast<std::size_t>(atoms.cols()); }
};

/// Throws ErrorCode::invalid_argument when an atom is not unit-norm.
void validate(const Dictionary& d);

using SparseColumn = std::vector<std::pair<std::size_t, double>>;  // (atom, coefficient)

struct SparseCodes {
  std::size_t atom_count = 0;
  std::vector<SparseColumn> columns;
};

struct OmpResult {
  SparseColumn code;                  // atoms in selection order
  std::vector<double> residual_norms; // after each round
  double residual_norm = 0;
};

inline constexpr double kOmpTolerance = 1e-12;

/// Orthogonal matching pursuit: at most `sparsity` atoms, exact least-squares
/// refit after each selection; stops once the residual norm drops to
/// kOmpTolerance * max(1, |signal|).
OmpResult omp_sparse_code(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& signal, int sparsity);

struct KsvdOptions {
  std::size_t atoms = 0;  // K; 0 selects twice the attribute dimension
  int sparsity = 1;       // T0
  int iterations = 30;
  std::uint64_t seed = 0;
  bool early_stop = true;  // improvement < 1e-7 over 3 iterations
  /// An atom whose |cosine| with an earlier atom reaches this value is
  /// replaced by the worst-represented column when that does not raise the
  /// objective. Values above 1 disable the check.
  double duplicate_cosine = 0.99;
};

struct KsvdResult {
  Dictionary dictionary;
  SparseCodes codes;
  /// Squared Frobenius objective after every coding and every update step.
  std::vector<double> objective;
};

/// Alternates OMP coding (never accepting a worse code for a column) and
/// rank-1 SVD atom updates on each atom's support.
KsvdResult ksvd_learn(const Eigen::MatrixXd& data, const KsvdOptions& options);

/// M x N matrix with the attribute vector of vertex i in column i.
Eigen::MatrixXd attribute_matrix(const MultiField& mf);

Eigen::MatrixXd reconstruct(const Dictionary& d, const SparseCodes& codes);

/// Cosine similarity of every atom pair.
Eigen::MatrixXd atom_similarity_matrix(const Dictionary& d);

struct AtomClusters {
  std::vector<std::vector<std::size_t>> clusters;  // ordered by first atom
  std::vector<std::size_t> representatives;       // one per cluster
  std::vector<std::size_t> cluster_of;            // per atom
};

/// Single-linkage clusters over similarity >= threshold. The representative
/// maximizes total within-cluster similarity (ties: lowest index).
AtomClusters cluster_atoms(const Eigen::MatrixXd& similarity, double threshold);

struct AtomSuggestion {
  std::size_t atom = 0;
  TraitExpr trait;  // point trait at the atom over the dictionary's channels
  double score = 0; // sum of |coefficient| over all data columns
};

/// Ranked by score descending, ties by atom index.
std::vector<AtomSuggestion> suggest_atom_traits(const Dictionary& d, const SparseCodes& codes,
                                                const MultiField& mf);

}  // namespace timt
