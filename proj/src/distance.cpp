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

#include "hnswdel/distance.hpp"

#include <cfloat>
#include <cmath>
#include <string>

namespace hnswdel {

std::string metric_name(Metric metric) {
    return metric == Metric::kL2 ? "l2" : "angular";
}

Metric parse_metric(const std::string& name) {
    if (name == "l2" || name == "L2" || name == "euclidean") return Metric::kL2;
    if (name == "angular" || name == "cosine") return Metric::kAngular;
    throw InvalidArgument("unknown metric '" + name + "'");
}

float l2_squared(std::span<const float> a, std::span<const float> b) noexcept {
    float sum = 0.0f;
    const std::size_t d = a.size();
    for (std::size_t i = 0; i < d; ++i) {
        const float diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

void normalize(std::span<float> v) noexcept {
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    // zero, or already unit length within float rounding
    if (norm == 0.0 || std::fabs(norm - 1.0) <= 4.0 * FLT_EPSILON) return;
    const double inv = 1.0 / std::sqrt(norm);
    for (float& x : v) x = static_cast<float>(x * inv);
}

float distance(std::span<const float> a, std::span<const float> b, Metric metric) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("distance: dimension " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
    }
    if (metric == Metric::kL2) return std::sqrt(l2_squared(a, b));
    Vector ua(a.begin(), a.end());
    Vector ub(b.begin(), b.end());
    normalize(ua);
    normalize(ub);
    return std::sqrt(l2_squared(ua, ub));
}

}  // namespace hnswdel
