// Copyright 2026 The hnswdel Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <span>

#include "hnswdel/types.hpp"

namespace hnswdel {

// Squared Euclidean distance; the single kernel used by index and oracle.
float l2_squared(std::span<const float> a, std::span<const float> b) noexcept;

// Scales v to unit length in place. Zero vectors are left untouched.
void normalize(std::span<float> v) noexcept;

// L2: Euclidean distance. Angular: Euclidean distance between the unit
// vectors, i.e. sqrt(2 - 2 cos), which is zero for parallel inputs.
// Throws DimensionMismatch when the sizes differ.
float distance(std::span<const float> a, std::span<const float> b, Metric metric);

}  // namespace hnswdel
