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

#include "hnswdel/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace hnswdel {

RecallReport recall_at_k(std::span<const SearchResult> results, std::span<const ExternalId> ground_truth,
                         std::size_t k) {
    if (results.size() != ground_truth.size()) {
        throw InvalidArgument("recall_at_k: " + std::to_string(results.size()) + " results vs " +
                              std::to_string(ground_truth.size()) + " ground-truth ids");
    }
    if (results.empty()) throw InvalidArgument("recall_at_k: no queries");
    RecallReport report;
    report.k = k;
    report.n_q = results.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& ids = results[i].ids;
        const auto end = ids.begin() + static_cast<std::ptrdiff_t>(std::min(k, ids.size()));
        if (std::find(ids.begin(), end, ground_truth[i]) != end) ++report.hits;
    }
    report.recall = static_cast<double>(report.hits) / static_cast<double>(report.n_q);
    return report;
}

double qps(std::size_t n_ops, double elapsed_s) {
    if (!(elapsed_s > 0.0)) throw InvalidArgument("qps: elapsed time must be positive");
    return static_cast<double>(n_ops) / elapsed_s;
}

ThroughputReport throughput(Operation op, std::size_t n_ops, double elapsed_s) {
    return {op, n_ops, elapsed_s, qps(n_ops, elapsed_s)};
}

MemoryReport memory_usage(const GraphIndex& index, const FlagSet& flags) {
    MemoryReport m;
    m.vector_bytes = index.size() * index.dimension() * kBytesPerScalar;
    m.adjacency_bytes = index.edge_count() * kBytesPerId;
    m.flag_bytes = flags.size() * kBytesPerId;
    m.total_bytes = m.vector_bytes + m.adjacency_bytes + m.flag_bytes;
    return m;
}

std::vector<CurvePoint> qps_recall_curve(const IndexState& state, std::span<const Vector> queries,
                                         std::span<const ExternalId> ground_truth, std::size_t k,
                                         std::span<const std::size_t> ef_ladder) {
    if (ef_ladder.empty()) throw InvalidArgument("qps_recall_curve: empty ef ladder");
    for (std::size_t i = 0; i < ef_ladder.size(); ++i) {
        if (ef_ladder[i] < k) throw InvalidArgument("qps_recall_curve: ef below k");
        if (i > 0 && ef_ladder[i] <= ef_ladder[i - 1]) {
            throw InvalidArgument("qps_recall_curve: ef ladder must be strictly increasing");
        }
    }
    std::vector<CurvePoint> curve;
    std::vector<SearchResult> results(queries.size());
    for (std::size_t ef : ef_ladder) {
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < queries.size(); ++i) results[i] = state.search(queries[i], k, ef);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        const auto recall = recall_at_k(results, ground_truth, k);
        curve.push_back({ef, recall.recall, qps(queries.size(), std::max(elapsed.count(), 1e-9))});
    }
    return curve;
}

}  // namespace hnswdel
