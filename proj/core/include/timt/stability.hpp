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

#include "timt/multifield.hpp"
#include "timt/scalar_field.hpp"
#include "timt/traits.hpp"

namespace timt {

/// max over vertices of |h1 - h2|. Throws ErrorCode::grid_mismatch.
double sup_norm_diff(const ScalarField& h1, const ScalarField& h2);

struct StabilityReport {
  double hausdorff = 0;        // d_H(T1, T2)
  bool hausdorff_exact = false;
  double sampling_step = 0;
  double sup_diff = 0;         // sup |h_T1 - h_T2| over vertices
  double bottleneck = 0;       // d_B of the two merge-tree diagrams
  double tolerance = 0;
  double sampling_slack = 0;   // added to the d_H comparison for sampled traits
  bool bottleneck_ok = false;  // d_B <= sup_diff + tol
  bool hausdorff_ok = false;   // sup_diff <= d_H + tol + slack
  bool chain_ok = false;
};

/// Checks d_B <= sup|h_T1 - h_T2| <= d_H(T1, T2) on `mf`.
StabilityReport verify_stability_chain(const TraitExpr& t1, const TraitExpr& t2, const MultiField& mf,
                                       double tolerance = 1e-9, double sampling_step = 0.05);

}  // namespace timt
