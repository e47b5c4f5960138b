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

#include <optional>
#include <string>
#include <vector>

#include "hnswdel/metrics.hpp"

namespace hnswdel {

// Measurements taken after one protocol step. Step 0 is the freshly built
// index and carries no add/delete throughput.
struct StepMetrics {
    std::size_t step = 0;
    RecallReport recall;
    ThroughputReport qps_search;
    std::optional<ThroughputReport> qps_add;
    std::optional<ThroughputReport> qps_delete;
    MemoryReport memory;
    std::vector<CurvePoint> curve;
    std::string controller_event;
};

// All steps of one run, tagged with the deletion method or "controller".
struct RunRecord {
    std::string method;
    std::vector<StepMetrics> steps;
};

}  // namespace hnswdel
