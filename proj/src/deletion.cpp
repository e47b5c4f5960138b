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

#include "hnswdel/deletion.hpp"

#include <algorithm>
#include <string>

namespace hnswdel {

std::string method_name(DeletionMethod method) {
    switch (method) {
        case DeletionMethod::kLogical: return "logical";
        case DeletionMethod::kPhysical: return "physical";
        case DeletionMethod::kRebuild: return "rebuild";
    }
    return "unknown";
}

DeletionMethod parse_method(const std::string& name) {
    if (name == "logical") return DeletionMethod::kLogical;
    if (name == "physical") return DeletionMethod::kPhysical;
    if (name == "rebuild" || name == "rebuilding") return DeletionMethod::kRebuild;
    throw InvalidArgument("unknown deletion method '" + name + "'");
}

void FlagSet::grow(std::size_t word) { bits_.resize(std::max(word + 1, bits_.size() * 2), 0); }

bool FlagSet::erase(ExternalId id) {
    if (!contains(id)) return false;
    if (id < kDenseLimit) {
        bits_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
    } else {
        sparse_.erase(id);
    }
    --count_;
    return true;
}

void FlagSet::clear() {
    bits_.clear();
    sparse_.clear();
    count_ = 0;
}

std::vector<ExternalId> FlagSet::ids() const {
    std::vector<ExternalId> out;
    out.reserve(count_);
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word != 0) {
            const int bit = __builtin_ctzll(word);
            out.push_back(static_cast<ExternalId>(w) * 64 + bit);
            word &= word - 1;
        }
    }
    std::vector<ExternalId> sparse(sparse_.begin(), sparse_.end());
    std::sort(sparse.begin(), sparse.end());
    out.insert(out.end(), sparse.begin(), sparse.end());
    return out;
}

void delete_logical(const GraphIndex& index, FlagSet& flags, std::span<const ExternalId> batch) {
    if (!batch.empty()) flags.reserve(*std::max_element(batch.begin(), batch.end()));
    // One pass; on error the ids flagged so far are unflagged again.
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ExternalId id = batch[i];
        const bool live = index.contains(id);
        if (live && flags.insert(id)) continue;
        for (std::size_t j = 0; j < i; ++j) flags.erase(batch[j]);
        if (!live) throw UnknownId("external id " + std::to_string(id) + " is not a live node");
        throw DuplicateId("external id " + std::to_string(id) + " is already flagged or listed twice");
    }
}

SearchResult search_filtered(const GraphIndex& index, const FlagSet& flags, std::span<const float> query,
                             std::size_t k, std::size_t ef, std::size_t max_overfetch) {
    if (ef < k) throw InvalidArgument("ef (" + std::to_string(ef) + ") must be >= k (" + std::to_string(k) + ")");
    const std::size_t extra = std::min(flags.size(), max_overfetch);
    std::size_t fetch = std::min(k + extra, ef);
    fetch = std::min(fetch, index.size());
    fetch = std::max(fetch, k);

    SearchResult raw = index.search(query, fetch, ef);
    SearchResult out;
    for (std::size_t i = 0; i < raw.ids.size() && out.ids.size() < k; ++i) {
        if (flags.contains(raw.ids[i])) continue;
        out.ids.push_back(raw.ids[i]);
        out.distances.push_back(raw.distances[i]);
    }
    return out;
}

void delete_physical(GraphIndex& index, std::span<const ExternalId> batch, FlagSet* flags) {
    index.erase(batch);
    if (flags != nullptr) {
        for (ExternalId id : batch) flags->erase(id);
    }
}

GraphIndex delete_rebuild(const GraphIndex& index, std::span<const ExternalId> batch) {
    std::unordered_set<ExternalId> doomed;
    doomed.reserve(batch.size());
    for (ExternalId id : batch) {
        if (!index.contains(id)) throw UnknownId("external id " + std::to_string(id) + " is not a live node");
        if (!doomed.insert(id).second) {
            throw DuplicateId("external id " + std::to_string(id) + " listed twice for deletion");
        }
    }
    std::vector<VectorRecord> survivors;
    survivors.reserve(index.size() - doomed.size());
    for (auto& rec : index.records()) {
        if (!doomed.count(rec.external_id)) survivors.push_back(std::move(rec));
    }
    GraphIndex rebuilt = GraphIndex::construct(survivors, index.params());

    std::vector<ExternalId> used = index.retired_ids();
    used.insert(used.end(), batch.begin(), batch.end());
    rebuilt.retire(used);
    return rebuilt;
}

SearchResult IndexState::search(std::span<const float> query, std::size_t k, std::size_t ef) const {
    if (flags.empty()) return index.search(query, k, ef);
    return search_filtered(index, flags, query, k, ef);
}

void IndexState::remove(DeletionMethod method, std::span<const ExternalId> batch) {
    switch (method) {
        case DeletionMethod::kLogical:
            delete_logical(index, flags, batch);
            break;
        case DeletionMethod::kPhysical:
            delete_physical(index, batch, &flags);
            break;
        case DeletionMethod::kRebuild:
            index = delete_rebuild(index, batch);
            for (ExternalId id : batch) flags.erase(id);
            break;
    }
}

std::vector<ExternalId> IndexState::visible_ids() const {
    std::vector<ExternalId> out;
    for (ExternalId id : index.live_ids()) {
        if (!flags.contains(id)) out.push_back(id);
    }
    return out;
}

}  // namespace hnswdel
