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

#include "timt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "timt/error.hpp"

namespace timt {

double Sym3Tensor::frobenius_norm() const noexcept {
  return std::sqrt(xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz));
}

double Sym3Tensor::determinant() const noexcept {
  return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
}

double Sym3Tensor::characteristic(double lambda) const noexcept {
  Sym3Tensor s = *this;
  s.xx -= lambda;
  s.yy -= lambda;
  s.zz -= lambda;
  return s.determinant();
}

namespace {

bool finite(const Sym3Tensor& t) {
  return std::isfinite(t.xx) && std::isfinite(t.yy) && std::isfinite(t.zz) &&
         std::isfinite(t.xy) && std::isfinite(t.xz) && std::isfinite(t.yz);
}

// Newton step on p(l) = det(A - l I); accepted only if it lowers |p|.
double polish(const Sym3Tensor& t, double lambda) {
  for (int it = 0; it < 3; ++it) {
    const double p = t.characteristic(lambda);
    if (p == 0.0) break;
    const double h = std::max(1e-7 * std::max(1.0, std::abs(lambda)), 1e-300);
    const double dp = (t.characteristic(lambda + h) - t.characteristic(lambda - h)) / (2 * h);
    if (dp == 0.0 || !std::isfinite(dp)) break;
    const double next = lambda - p / dp;
    if (!(std::abs(t.characteristic(next)) < std::abs(p))) break;
    lambda = next;
  }
  return lambda;
}

}  // namespace

EigenTriple sym3_eigenvalues(const Sym3Tensor& t) {
  if (!finite(t)) fail(ErrorCode::non_finite, "tensor has non-finite components");

  const double off = t.xy * t.xy + t.xz * t.xz + t.yz * t.yz;
  const double mean = (t.xx + t.yy + t.zz) / 3.0;
  std::array<double, 3> ev;
  if (off == 0.0) {
    ev = {t.xx, t.yy, t.zz};
  } else {
    // B = (A - mean I) / p, eigenvalues of B are 2 cos(theta + 2 pi k / 3).
    const double dxx = t.xx - mean, dyy = t.yy - mean, dzz = t.zz - mean;
    const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * off;
    const double p = std::sqrt(p2 / 6.0);
    Sym3Tensor b{dxx / p, dyy / p, dzz / p, t.xy / p, t.xz / p, t.yz / p};
    const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = mean + 2.0 * p * std::cos(phi);
    const double e3 = mean + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * mean - e1 - e3;
    ev = {e1, e2, e3};
    for (double& l : ev) l = polish(t, l);
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return {ev[0], ev[1], ev[2]};
}

bool westin_degenerate(const EigenTriple& e) noexcept {
  const double inf_norm = std::max({std::abs(e.l1), std::abs(e.l2), std::abs(e.l3)});
  return !(std::abs(e.trace()) >= 1e-12 * std::max(1.0, inf_norm));
}

WestinMeasures westin_measures(const EigenTriple& e) {
  if (westin_degenerate(e))
    fail(ErrorCode::degenerate_trace, "eigenvalue trace is (numerically) zero");
  const double lambda = e.trace();
  return {(e.l1 - e.l2) / lambda, 2.0 * (e.l2 - e.l3) / lambda, 3.0 * e.l3 / lambda};
}

double max_shear(const EigenTriple& e) {
  if (!(e.l1 >= e.l2 && e.l2 >= e.l3))
    fail(ErrorCode::invalid_argument, "eigenvalues must be sorted descending");
  return e.l1 - e.l3;
}

}  // namespace timt
