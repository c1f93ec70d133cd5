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

#include "timt/scalar_field.hpp"

#include <cmath>
#include <string>

#include "timt/error.hpp"

namespace timt {

std::string_view to_string(FieldMeaning m) noexcept {
  switch (m) {
    case FieldMeaning::distance: return "distance";
    case FieldMeaning::similarity: return "similarity";
    case FieldMeaning::generic: return "generic";
  }
  return "generic";
}

std::optional<FieldMeaning> parse_field_meaning(std::string_view name) noexcept {
  if (name == "distance") return FieldMeaning::distance;
  if (name == "similarity") return FieldMeaning::similarity;
  if (name == "generic") return FieldMeaning::generic;
  return std::nullopt;
}

void validate(const ScalarField& field) {
  if (field.values.size() != field.grid.vertex_count())
    fail(ErrorCode::size_mismatch, "field has " + std::to_string(field.values.size()) +
                                       " values, grid has " +
                                       std::to_string(field.grid.vertex_count()));
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double v = field.values[i];
    if (!std::isfinite(v))
      fail(ErrorCode::non_finite, "non-finite field value at vertex " + std::to_string(i));
    if (field.meaning == FieldMeaning::distance && v < 0)
      fail(ErrorCode::invalid_argument,
           "negative distance value at vertex " + std::to_string(i));
    if (field.meaning == FieldMeaning::similarity && (v < -1.0 || v > 1.0))
      fail(ErrorCode::invalid_argument,
           "similarity value outside [-1, 1] at vertex " + std::to_string(i));
  }
}

ScalarField negated(const ScalarField& field) {
  ScalarField out{field.grid, field.values, FieldMeaning::generic};
  for (double& v : out.values) v = -v;
  return out;
}

}  // namespace timt
