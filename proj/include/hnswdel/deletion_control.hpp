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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hnswdel/controller.hpp"
#include "hnswdel/protocol.hpp"

namespace hnswdel {

struct QuerySplit {
    std::vector<Vector> train;
    std::vector<Vector> test;
};

// Deterministic shuffle by seed; the first ceil(fraction * n) queries train.
// Both halves are non-empty whenever there are at least two queries.
QuerySplit split_queries(std::span<const Vector> queries, double train_fraction, std::uint64_t seed);

struct ControlConfig {
    ProtocolConfig protocol;          // strategy field is ignored
    std::optional<double> alpha;      // unset: midpoint of theta and R0
    double train_fraction = 0.1;
    std::uint64_t split_seed = 42;
};

struct ControlOutcome {
    ControllerParams params;
    Policy policy;
    RunRecord physical_training;
    RunRecord logical_training;
    RunRecord controlled;  // test queries only
};

// Estimates theta from a physical-deletion training run and delta/pi from a
// logical one (training queries), picks the policy and runs it on the test
// queries. The controlled run's step-0 event records the estimates.
ControlOutcome run_deletion_control(std::span<const VectorRecord> base, std::span<const Vector> queries,
                                    const ControlConfig& cfg);

}  // namespace hnswdel
