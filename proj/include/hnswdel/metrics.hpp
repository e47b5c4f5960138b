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
#include <vector>

#include "hnswdel/deletion.hpp"

namespace hnswdel {

inline constexpr std::size_t kBytesPerScalar = sizeof(float);
inline constexpr std::size_t kBytesPerId = sizeof(std::uint32_t);

inline const std::vector<std::size_t> kDefaultEfLadder{10, 20, 40, 80, 160, 320};

struct RecallReport {
    std::size_t k = 0;
    std::size_t hits = 0;
    std::size_t n_q = 0;
    double recall = 0.0;
};

enum class Operation { kSearch, kAdd, kDelete };

struct ThroughputReport {
    Operation operation = Operation::kSearch;
    std::size_t n_ops = 0;
    double elapsed_s = 0.0;
    double qps = 0.0;
};

struct MemoryReport {
    std::size_t vector_bytes = 0;
    std::size_t adjacency_bytes = 0;
    std::size_t flag_bytes = 0;
    std::size_t total_bytes = 0;
};

struct CurvePoint {
    std::size_t ef = 0;
    double recall = 0.0;
    double qps = 0.0;
};

// 1-Recall@k: fraction of queries whose true nearest neighbor appears in the
// first k returned ids. Empty results count as misses.
RecallReport recall_at_k(std::span<const SearchResult> results, std::span<const ExternalId> ground_truth,
                         std::size_t k);

// n_ops / elapsed_s. Throws InvalidArgument unless elapsed_s > 0.
double qps(std::size_t n_ops, double elapsed_s);
ThroughputReport throughput(Operation op, std::size_t n_ops, double elapsed_s);

// Byte accounting over live nodes (flagged ones included, they still occupy
// storage), independent of allocator behaviour.
MemoryReport memory_usage(const GraphIndex& index, const FlagSet& flags);

// Runs every query at each ef of the ladder, timing the whole batch.
std::vector<CurvePoint> qps_recall_curve(const IndexState& state, std::span<const Vector> queries,
                                         std::span<const ExternalId> ground_truth, std::size_t k,
                                         std::span<const std::size_t> ef_ladder);

}  // namespace hnswdel
