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

#include <array>

namespace timt {

/// Symmetric 3x3 tensor stored by its six independent components.
struct Sym3Tensor {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double frobenius_norm() const noexcept;
  double determinant() const noexcept;
  /// det(A - lambda*I)
  double characteristic(double lambda) const noexcept;
};

/// Eigenvalues sorted descending: l1 >= l2 >= l3.
struct EigenTriple {
  double l1 = 0, l2 = 0, l3 = 0;

  double trace() const noexcept { return l1 + l2 + l3; }
};

struct WestinMeasures {
  double linear = 0;     // c_l
  double planar = 0;     // c_p
  double spherical = 0;  // c_s
};

/// Closed-form eigenvalues (trigonometric solution of the characteristic
/// cubic on the shifted, scaled deviator) followed by a guarded Newton
/// polish. Throws ErrorCode::non_finite on non-finite components.
EigenTriple sym3_eigenvalues(const Sym3Tensor& t);

/// Throws ErrorCode::degenerate_trace when |trace| < 1e-12 * max(1, max|l_i|).
WestinMeasures westin_measures(const EigenTriple& e);

bool westin_degenerate(const EigenTriple& e) noexcept;

double max_shear(const EigenTriple& e);

}  // namespace timt
