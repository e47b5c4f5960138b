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

#include "hnswdel/deletion_control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace hnswdel {

QuerySplit split_queries(std::span<const Vector> queries, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train_fraction must lie strictly between 0 and 1");
    }
    if (queries.size() < 2) throw InvalidArgument("need at least two queries to split");
    std::vector<std::size_t> order(queries.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    // Fisher-Yates with an explicit draw.
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }
    auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(queries.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, queries.size() - 1);

    QuerySplit split;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? split.train : split.test).push_back(queries[order[i]]);
    }
    return split;
}

ControlOutcome run_deletion_control(std::span<const VectorRecord> base, std::span<const Vector> queries,
                                    const ControlConfig& cfg) {
    const QuerySplit split = split_queries(queries, cfg.train_fraction, cfg.split_seed);

    ProtocolConfig training = cfg.protocol;
    training.record_curve = false;
    ControlOutcome out;
    training.strategy = DeletionMethod::kPhysical;
    out.physical_training = run_protocol(base, split.train, training);
    training.strategy = DeletionMethod::kLogical;
    out.logical_training = run_protocol(base, split.train, training);

    auto& p = out.params;
    p.theta = estimate_theta(out.physical_training);
    p.r0 = out.logical_training.steps.front().recall.recall;
    p.alpha = cfg.alpha.value_or(0.5 * (p.theta + p.r0));
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    const PiEstimate est = estimate_pi(out.logical_training, p.alpha);
    p.delta = est.delta;
    p.pi = est.pi;
    out.policy = select_policy(p);

    ProtocolConfig test = cfg.protocol;
    test.strategy = out.policy;
    out.controlled = run_protocol(base, split.test, test);

    char buf[160];
    std::snprintf(buf, sizeof(buf), ";alpha=%.6g;theta=%.6g;delta=%.6g;pi=%zu;r0=%.6g", p.alpha, p.theta, p.delta,
                  p.pi, p.r0);
    out.controlled.steps.front().controller_event += buf;
    return out;
}

}  // namespace hnswdel
