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

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hnswdel/controller.hpp"
#include "hnswdel/step_metrics.hpp"

namespace hnswdel {

// Either a fixed deletion method or a controller policy.
using Strategy = std::variant<DeletionMethod, Policy>;

std::string strategy_label(const Strategy& strategy);

struct ProtocolConfig {
    std::size_t n = 10000;       // visible index size, kept constant
    std::size_t batch = 2000;    // b: deleted and inserted per step
    std::size_t steps = 5;       // S
    std::size_t k = 10;
    std::size_t ef_search = 10;
    std::vector<std::size_t> ef_ladder = kDefaultEfLadder;
    bool record_curve = true;
    IndexParams index;
    Strategy strategy = DeletionMethod::kPhysical;

    // Throws InvalidArgument unless b >= 1, S >= 1, n >= 1 and
    // n + S * b <= base_size.
    void validate(std::size_t base_size) const;
};

// Ids deleted at step s >= 1: {1 + (s-1) b, ..., s b}.
std::vector<ExternalId> deletion_ids(std::size_t step, std::size_t batch);
// Ids inserted at step s >= 1: {1 + n + (s-1) b, ..., n + s b}.
std::vector<ExternalId> insertion_ids(std::size_t step, std::size_t n, std::size_t batch);

struct GroundTruth {
    std::size_t step = 0;
    std::vector<ExternalId> nearest;              // g_i per query
    std::vector<std::vector<ExternalId>> top_k;   // exact k-NN per query, nearest first
};

// Exact k-NN by linear scan; equal distances resolve to the smaller id.
GroundTruth ground_truth_oracle(std::span<const VectorRecord> points, std::span<const Vector> queries,
                                std::size_t k, Metric metric);

// Runs the step-wise delete + insert protocol. base[i] must carry external
// id i + 1. Ground truth is recomputed by brute force over the visible set
// after every step.
RunRecord run_protocol(std::span<const VectorRecord> base, std::span<const Vector> queries,
                       const ProtocolConfig& cfg);

// Writes steps.csv (all runs), curve_<method>.csv per run and, if asked,
// one SVG per metric family. Returns the paths written.
std::vector<std::filesystem::path> emit_results(std::span<const RunRecord> runs,
                                                const std::filesystem::path& dir, bool plots = true);

// Parses a steps.csv written by emit_results back into runs (curves empty).
std::vector<RunRecord> read_steps_csv(const std::filesystem::path& path);

}  // namespace hnswdel
