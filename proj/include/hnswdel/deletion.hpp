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
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hnswdel/graph_index.hpp"

namespace hnswdel {

enum class DeletionMethod { kLogical, kPhysical, kRebuild };

std::string method_name(DeletionMethod method);
DeletionMethod parse_method(const std::string& name);

// Set of logically deleted external ids. Small ids live in a bitmap, large
// ones in a hash set.
class FlagSet {
public:
    bool contains(ExternalId id) const noexcept {
        if (id < kDenseLimit) {
            const std::size_t word = id >> 6;
            return word < bits_.size() && ((bits_[word] >> (id & 63)) & 1u) != 0;
        }
        return sparse_.count(id) != 0;
    }

    // Returns false when the id was already present.
    bool insert(ExternalId id) {
        if (id < kDenseLimit) {
            const std::size_t word = id >> 6;
            if (word >= bits_.size()) grow(word);
            const std::uint64_t mask = std::uint64_t{1} << (id & 63);
            if (bits_[word] & mask) return false;
            bits_[word] |= mask;
        } else if (!sparse_.insert(id).second) {
            return false;
        }
        ++count_;
        return true;
    }
    // Sizes the bitmap so ids up to max_id insert without reallocating.
    void reserve(ExternalId max_id) {
        if (max_id < kDenseLimit && (max_id >> 6) >= bits_.size()) grow(max_id >> 6);
    }
    bool erase(ExternalId id);
    void clear();

    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::vector<ExternalId> ids() const;  // ascending

    friend bool operator==(const FlagSet& a, const FlagSet& b) { return a.ids() == b.ids(); }

private:
    void grow(std::size_t word);

    static constexpr ExternalId kDenseLimit = ExternalId{1} << 26;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<ExternalId> sparse_;
    std::size_t count_ = 0;
};

// Flags every id in the batch (F <- F u D). The graph is not touched.
// Throws UnknownId for ids that are not live, DuplicateId for ids that are
// already flagged or repeated; flags are unchanged on error.
void delete_logical(const GraphIndex& index, FlagSet& flags, std::span<const ExternalId> batch);

// Unlimited extra fetch: search k + |F| (bounded by ef and the live count).
inline constexpr std::size_t kUnboundedOverfetch = std::numeric_limits<std::size_t>::max();

// Searches the graph as-is and drops flagged ids from the result, which may
// therefore hold fewer than k ids (or none).
SearchResult search_filtered(const GraphIndex& index, const FlagSet& flags, std::span<const float> query,
                             std::size_t k, std::size_t ef, std::size_t max_overfetch = kUnboundedOverfetch);

// Removes the batch from the graph and from every neighbor list (no edge
// repair). If flags is given, deleted ids are also cleared from it.
void delete_physical(GraphIndex& index, std::span<const ExternalId> batch, FlagSet* flags = nullptr);

// Reconstructs the graph from the surviving records in ascending id order
// with the index's own parameters. Removed ids stay unavailable for reuse.
GraphIndex delete_rebuild(const GraphIndex& index, std::span<const ExternalId> batch);

// Index plus its flag set, the unit the benchmark protocol mutates.
struct IndexState {
    GraphIndex index;
    FlagSet flags;

    explicit IndexState(GraphIndex g) : index(std::move(g)) {}

    // Search honoring the flags (plain search when there are none).
    SearchResult search(std::span<const float> query, std::size_t k, std::size_t ef) const;
    void remove(DeletionMethod method, std::span<const ExternalId> batch);
    // Live and not flagged, ascending.
    std::vector<ExternalId> visible_ids() const;
    std::size_t visible_count() const noexcept { return index.size() - flags.size(); }
};

}  // namespace hnswdel
