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

#include <cstddef>
#include <span>
#include <string>

#include "hnswdel/deletion.hpp"
#include "hnswdel/step_metrics.hpp"

namespace hnswdel {

struct ControllerParams {
    double alpha = 0.0;  // required 1-Recall@10
    double theta = 0.0;  // recall floor under repeated physical deletion
    double delta = 0.0;  // mean recall change per logical step
    std::size_t pi = 0;  // logical steps allowed before a rebuild
    double r0 = 0.0;     // recall before any deletion
};

struct Policy {
    enum class Kind { kPhysicalOnly, kLogicalThenRebuild };

    Kind kind = Kind::kPhysicalOnly;
    std::size_t pi = 0;  // only meaningful for kLogicalThenRebuild; 0 rebuilds every step

    static Policy physical_only() { return {Kind::kPhysicalOnly, 0}; }
    static Policy logical_then_rebuild(std::size_t pi) { return {Kind::kLogicalThenRebuild, pi}; }

    // "PhysicalOnly" or "LogicalThenRebuild(<pi>)".
    std::string describe() const;
    friend bool operator==(const Policy&, const Policy&) = default;
};

struct PiEstimate {
    double delta = 0.0;
    std::size_t pi = 0;
};

// Minimum of the given recalls.
double estimate_theta(std::span<const double> recalls);
// Minimum recall over steps >= 1 of a physical-deletion run with at least
// two recorded steps.
double estimate_theta(const RunRecord& physical_run);

// delta = (r_s - r0) / steps. alpha > r0 gives pi = 0; a non-negative delta
// caps pi at the training horizon; otherwise pi = floor((alpha - r0) / delta).
PiEstimate estimate_pi(double r0, double r_s, std::size_t steps, double alpha);
// Uses step 0 and the last step of a logical-deletion run.
PiEstimate estimate_pi(const RunRecord& logical_run, double alpha);

// alpha <= theta keeps physical deletion, anything above alternates logical
// deletion with periodic rebuilds.
Policy select_policy(const ControllerParams& params);

struct ControllerState {
    std::size_t steps_since_rebuild = 0;
    std::size_t rebuilds = 0;
};

enum class ControlAction { kPhysical, kLogical, kLogicalAndRebuild };
std::string action_name(ControlAction action);

// Applies one deletion batch under the policy. For LogicalThenRebuild the
// batch is flagged; once pi logical steps have accumulated the graph is
// rebuilt from the unflagged live nodes and the flags are cleared.
ControlAction controlled_delete(IndexState& state, std::span<const ExternalId> batch, const Policy& policy,
                                ControllerState& controller);

}  // namespace hnswdel
