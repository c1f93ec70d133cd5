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

#include <string_view>
#include <vector>
#include <optional>

#include "timt/grid.hpp"

namespace timt {

enum class FieldMeaning { distance, similarity, generic };

std::string_view to_string(FieldMeaning m) noexcept;
std::optional<FieldMeaning> parse_field_meaning(std::string_view name) noexcept;

/// One value per grid vertex.
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;
  FieldMeaning meaning = FieldMeaning::generic;

  std::size_t size() const noexcept { return values.size(); }
};

/// Checks the size and the meaning-specific value range.
void validate(const ScalarField& field);

ScalarField negated(const ScalarField& field);

}  // namespace timt
