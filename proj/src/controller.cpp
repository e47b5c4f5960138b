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

#include "hnswdel/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hnswdel {

std::string Policy::describe() const {
    if (kind == Kind::kPhysicalOnly) return "PhysicalOnly";
    return "LogicalThenRebuild(" + std::to_string(pi) + ")";
}

double estimate_theta(std::span<const double> recalls) {
    if (recalls.empty()) throw InvalidArgument("estimate_theta: no recall values");
    return *std::min_element(recalls.begin(), recalls.end());
}

double estimate_theta(const RunRecord& physical_run) {
    if (physical_run.method != method_name(DeletionMethod::kPhysical)) {
        throw InvalidArgument("estimate_theta: training run used '" + physical_run.method +
                              "', expected physical deletion");
    }
    if (physical_run.steps.size() < 2) throw InvalidArgument("estimate_theta: need at least two steps");
    std::vector<double> recalls;
    for (const auto& step : physical_run.steps) {
        if (step.step >= 1) recalls.push_back(step.recall.recall);
    }
    return estimate_theta(recalls);
}

PiEstimate estimate_pi(double r0, double r_s, std::size_t steps, double alpha) {
    if (steps == 0) throw InvalidArgument("estimate_pi: training horizon must be at least one step");
    PiEstimate out;
    out.delta = (r_s - r0) / static_cast<double>(steps);
    if (alpha > r0) {
        out.pi = 0;
    } else if (out.delta >= 0.0) {
        out.pi = steps;
    } else {
        // tolerance for whole-number ratios
        const double ratio = (alpha - r0) / out.delta;
        out.pi = static_cast<std::size_t>(std::max(0.0, std::floor(ratio + 1e-9)));
    }
    return out;
}

PiEstimate estimate_pi(const RunRecord& logical_run, double alpha) {
    if (logical_run.method != method_name(DeletionMethod::kLogical)) {
        throw InvalidArgument("estimate_pi: training run used '" + logical_run.method +
                              "', expected logical deletion");
    }
    if (logical_run.steps.size() < 2) throw InvalidArgument("estimate_pi: need at least two steps");
    const auto& first = logical_run.steps.front();
    const auto& last = logical_run.steps.back();
    return estimate_pi(first.recall.recall, last.recall.recall, last.step - first.step, alpha);
}

Policy select_policy(const ControllerParams& params) {
    if (params.alpha <= params.theta) return Policy::physical_only();
    return Policy::logical_then_rebuild(params.pi);
}

std::string action_name(ControlAction action) {
    switch (action) {
        case ControlAction::kPhysical: return "physical";
        case ControlAction::kLogical: return "logical";
        case ControlAction::kLogicalAndRebuild: return "logical+rebuild";
    }
    return "unknown";
}

ControlAction controlled_delete(IndexState& state, std::span<const ExternalId> batch, const Policy& policy,
                                ControllerState& controller) {
    if (policy.kind == Policy::Kind::kPhysicalOnly) {
        delete_physical(state.index, batch, &state.flags);
        return ControlAction::kPhysical;
    }
    delete_logical(state.index, state.flags, batch);
    ++controller.steps_since_rebuild;
    if (controller.steps_since_rebuild < policy.pi) return ControlAction::kLogical;

    state.index = delete_rebuild(state.index, state.flags.ids());
    state.flags.clear();
    controller.steps_since_rebuild = 0;
    ++controller.rebuilds;
    return ControlAction::kLogicalAndRebuild;
}

}  // namespace hnswdel
