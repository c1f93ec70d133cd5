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

#include "timt/stability.hpp"

#include <algorithm>
#include <cmath>

#include "timt/diagram.hpp"
#include "timt/error.hpp"
#include "timt/merge_tree.hpp"

namespace timt {

double sup_norm_diff(const ScalarField& h1, const ScalarField& h2) {
  if (!h1.grid.same_shape(h2.grid) || h1.values.size() != h2.values.size())
    fail(ErrorCode::grid_mismatch, "sup_norm_diff: fields live on different grids");
  double sup = 0;
  for (std::size_t i = 0; i < h1.values.size(); ++i) sup = std::max(sup, std::abs(h1.values[i] - h2.values[i]));
  return sup;
}

StabilityReport verify_stability_chain(const TraitExpr& t1, const TraitExpr& t2, const MultiField& mf,
                                       double tolerance, double sampling_step) {
  StabilityReport r;
  r.tolerance = tolerance;
  const HausdorffEstimate dh = hausdorff_distance(t1, t2, sampling_step);
  r.hausdorff = dh.distance;
  r.hausdorff_exact = dh.exact;
  r.sampling_step = dh.step;
  r.sampling_slack = dh.exact ? 0.0 : dh.error_bound;

  const ScalarField h1 = induced_distance_field(t1, mf);
  const ScalarField h2 = induced_distance_field(t2, mf);
  r.sup_diff = sup_norm_diff(h1, h2);
  r.bottleneck = bottleneck_distance(persistence_diagram(compute_merge_tree(h1)),
                                     persistence_diagram(compute_merge_tree(h2)));

  r.bottleneck_ok = r.bottleneck <= r.sup_diff + tolerance;
  r.hausdorff_ok = r.sup_diff <= r.hausdorff + tolerance + r.sampling_slack;
  r.chain_ok = r.bottleneck_ok && r.hausdorff_ok;
  return r;
}

}  // namespace timt
