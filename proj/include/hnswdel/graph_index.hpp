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
#include <map>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "hnswdel/types.hpp"

namespace hnswdel {

struct IndexParams {
    std::size_t dimension = 0;
    Metric metric = Metric::kL2;
    std::size_t max_degree = 16;  // M; level 0 allows 2 * M
    std::size_t ef_construction = 200;
    std::uint64_t seed = 42;
};

struct EntryPoint {
    ExternalId id = 0;
    int level = 0;
};

// Maps external ids to storage slots. Ids below a bound live in a dense
// table, larger ones in a hash map. A removed id stays "retired" and cannot
// be inserted again.
class IdMap {
public:
    static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;
    static constexpr std::uint32_t kRetired = 0xFFFFFFFEu;

    std::uint32_t get(ExternalId id) const noexcept {
        if (id < dense_.size()) return dense_[id];
        if (id < kDenseLimit) return kAbsent;
        auto it = sparse_.find(id);
        return it == sparse_.end() ? kAbsent : it->second;
    }

    void set(ExternalId id, std::uint32_t value);

    // Every id that was ever set, ascending, paired with its current value.
    std::vector<std::pair<ExternalId, std::uint32_t>> entries() const;

private:
    static constexpr ExternalId kDenseLimit = ExternalId{1} << 24;
    std::vector<std::uint32_t> dense_;
    std::unordered_map<ExternalId, std::uint32_t> sparse_;
};

namespace detail {
struct SnapshotAccess;
}

// Hierarchical proximity graph. Nodes live in recycled storage slots; the
// public surface speaks external ids only.
//
// Search is safe from concurrent callers as long as nobody mutates the
// index; add/erase/construct need exclusive access.
class GraphIndex {
public:
    explicit GraphIndex(IndexParams params);

    // Builds a fresh index by inserting records in the given order. The
    // level generator is seeded from params.seed; equal inputs give
    // identical adjacency.
    static GraphIndex construct(std::span<const VectorRecord> records, const IndexParams& params);

    // Inserts a batch. Ids must never have been used by this index before.
    // The batch is validated up front; on error nothing is inserted.
    void add(std::span<const VectorRecord> batch);

    // Returns up to k nearest live nodes, nearest first. Requires ef >= k.
    SearchResult search(std::span<const float> query, std::size_t k, std::size_t ef) const;

    // Removes nodes and every edge that points at them, without repairing
    // the surviving neighbor lists. Slots are recycled. A deleted entry point
    // is replaced by the highest-level survivor (smallest id on ties).
    void erase(std::span<const ExternalId> ids);

    const IndexParams& params() const noexcept { return params_; }
    std::size_t dimension() const noexcept { return params_.dimension; }
    Metric metric() const noexcept { return params_.metric; }
    std::size_t size() const noexcept { return live_count_; }
    bool empty() const noexcept { return live_count_ == 0; }

    bool contains(ExternalId id) const noexcept {
        const std::uint32_t slot = ids_.get(id);
        return slot != IdMap::kAbsent && slot != IdMap::kRetired;
    }
    // True when the id is live or was live at some point.
    bool was_used(ExternalId id) const noexcept;

    std::optional<EntryPoint> entry_point() const;
    std::vector<ExternalId> live_ids() const;  // ascending
    int level_of(ExternalId id) const;
    std::vector<ExternalId> neighbors(ExternalId id, int level) const;
    // Stored vector (unit length under the angular metric).
    std::span<const float> vector_of(ExternalId id) const;
    // Live records in ascending id order.
    std::vector<VectorRecord> records() const;
    // Sum over live nodes and levels of the neighbor list sizes.
    std::size_t edge_count() const noexcept;

    std::size_t degree_limit(int level) const noexcept {
        return level == 0 ? 2 * params_.max_degree : params_.max_degree;
    }

    // Full adjacency keyed by external id, neighbor lists in stored order.
    using Adjacency = std::map<ExternalId, std::vector<std::vector<ExternalId>>>;
    Adjacency adjacency() const;

    // Marks ids as used without inserting them, so they stay unavailable.
    void retire(std::span<const ExternalId> ids);
    // Ids that were removed and may not be inserted again, ascending.
    std::vector<ExternalId> retired_ids() const;

private:
    friend struct detail::SnapshotAccess;

    struct Candidate {
        float dist;
        ExternalId id;
        std::uint32_t slot;
        bool operator<(const Candidate& o) const noexcept {
            return dist < o.dist || (dist == o.dist && id < o.id);
        }
        bool operator>(const Candidate& o) const noexcept { return o < *this; }
    };

    std::span<const float> slot_vector(std::uint32_t slot) const noexcept {
        return {data_.data() + static_cast<std::size_t>(slot) * params_.dimension,
                params_.dimension};
    }
    std::uint32_t slot_of(ExternalId id) const;
    int sample_level();
    std::uint32_t allocate_slot();
    void insert_slot(std::uint32_t slot, int level);
    std::vector<Candidate> search_layer(std::span<const float> query,
                                        std::vector<Candidate> entry, std::size_t ef,
                                        int level) const;
    Candidate greedy_descend(std::span<const float> query, Candidate current, int level) const;
    std::vector<std::uint32_t> select_neighbors(const std::vector<Candidate>& sorted, std::size_t limit) const;
    void shrink_links(std::uint32_t slot, int level);
    void validate_batch(std::span<const VectorRecord> batch) const;
    void elect_entry_point();

    IndexParams params_;
    double level_mult_;
    std::mt19937_64 rng_;

    std::vector<float> data_;
    std::vector<ExternalId> slot_ids_;
    std::vector<int> slot_levels_;  // -1 marks a free slot
    std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // [slot][level]
    std::vector<std::uint32_t> free_slots_;
    IdMap ids_;

    std::size_t live_count_ = 0;
    std::optional<std::uint32_t> entry_slot_;
    int max_level_ = -1;
};

}  // namespace hnswdel
