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

#include "hnswdel/graph_index.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <unordered_set>

#include "hnswdel/distance.hpp"

namespace hnswdel {

void IdMap::set(ExternalId id, std::uint32_t value) {
    if (id < kDenseLimit) {
        if (id >= dense_.size()) {
            std::size_t grown = std::max<std::size_t>(dense_.size() * 2, 1024);
            grown = std::max<std::size_t>(grown, static_cast<std::size_t>(id) + 1);
            grown = std::min<std::size_t>(grown, kDenseLimit);
            dense_.resize(grown, kAbsent);
        }
        dense_[id] = value;
    } else {
        sparse_[id] = value;
    }
}

std::vector<std::pair<ExternalId, std::uint32_t>> IdMap::entries() const {
    std::vector<std::pair<ExternalId, std::uint32_t>> out;
    for (std::size_t id = 0; id < dense_.size(); ++id) {
        if (dense_[id] != kAbsent) out.emplace_back(id, dense_[id]);
    }
    std::vector<std::pair<ExternalId, std::uint32_t>> sparse(sparse_.begin(), sparse_.end());
    std::sort(sparse.begin(), sparse.end());
    out.insert(out.end(), sparse.begin(), sparse.end());
    return out;
}

GraphIndex::GraphIndex(IndexParams params) : params_(params), rng_(params.seed) {
    if (params_.dimension == 0) throw InvalidArgument("index dimension must be positive");
    if (params_.max_degree < 2) throw InvalidArgument("max_degree must be at least 2");
    if (params_.ef_construction == 0) throw InvalidArgument("ef_construction must be positive");
    level_mult_ = 1.0 / std::log(static_cast<double>(params_.max_degree));
}

GraphIndex GraphIndex::construct(std::span<const VectorRecord> records, const IndexParams& params) {
    GraphIndex index(params);
    index.add(records);
    return index;
}

void GraphIndex::validate_batch(std::span<const VectorRecord> batch) const {
    std::unordered_set<ExternalId> seen;
    seen.reserve(batch.size());
    for (const auto& rec : batch) {
        if (rec.vector.size() != params_.dimension) {
            throw DimensionMismatch("record " + std::to_string(rec.external_id) + " has dimension " +
                                    std::to_string(rec.vector.size()) + ", index expects " +
                                    std::to_string(params_.dimension));
        }
        if (ids_.get(rec.external_id) != IdMap::kAbsent || !seen.insert(rec.external_id).second) {
            throw DuplicateId("external id " + std::to_string(rec.external_id) +
                              " is already in use or was used before");
        }
    }
}

void GraphIndex::add(std::span<const VectorRecord> batch) {
    validate_batch(batch);
    for (const auto& rec : batch) {
        const std::uint32_t slot = allocate_slot();
        float* dst = data_.data() + static_cast<std::size_t>(slot) * params_.dimension;
        std::copy(rec.vector.begin(), rec.vector.end(), dst);
        if (params_.metric == Metric::kAngular) normalize({dst, params_.dimension});
        slot_ids_[slot] = rec.external_id;
        ids_.set(rec.external_id, slot);
        insert_slot(slot, sample_level());
        ++live_count_;
    }
}

int GraphIndex::sample_level() {
    // u in (0, 1]
    const double u = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    return static_cast<int>(std::floor(-std::log(u) * level_mult_));
}

std::uint32_t GraphIndex::allocate_slot() {
    if (!free_slots_.empty()) {
        const std::uint32_t slot = free_slots_.back();
        free_slots_.pop_back();
        return slot;
    }
    const auto slot = static_cast<std::uint32_t>(slot_ids_.size());
    if (slot >= IdMap::kRetired) throw Error("index slot space exhausted");
    data_.resize(data_.size() + params_.dimension);
    slot_ids_.push_back(0);
    slot_levels_.push_back(-1);
    links_.emplace_back();
    return slot;
}

GraphIndex::Candidate GraphIndex::greedy_descend(std::span<const float> query, Candidate current,
                                                 int level) const {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t nb : links_[current.slot][level]) {
            Candidate c{l2_squared(query, slot_vector(nb)), slot_ids_[nb], nb};
            if (c < current) {
                current = c;
                changed = true;
            }
        }
    }
    return current;
}

std::vector<GraphIndex::Candidate> GraphIndex::search_layer(std::span<const float> query,
                                                            std::vector<Candidate> entry,
                                                            std::size_t ef, int level) const {
    std::vector<std::uint8_t> visited(slot_ids_.size(), 0);
    std::priority_queue<Candidate> best;  // worst on top
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
    for (const auto& c : entry) {
        if (visited[c.slot]) continue;
        visited[c.slot] = 1;
        frontier.push(c);
        best.push(c);
        if (best.size() > ef) best.pop();
    }
    while (!frontier.empty()) {
        const Candidate current = frontier.top();
        if (best.size() >= ef && best.top() < current) break;
        frontier.pop();
        for (std::uint32_t nb : links_[current.slot][level]) {
            if (visited[nb]) continue;
            visited[nb] = 1;
            Candidate c{l2_squared(query, slot_vector(nb)), slot_ids_[nb], nb};
            if (best.size() < ef || c < best.top()) {
                frontier.push(c);
                best.push(c);
                if (best.size() > ef) best.pop();
            }
        }
    }
    std::vector<Candidate> out(best.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = best.top();
        best.pop();
    }
    return out;
}

std::vector<std::uint32_t> GraphIndex::select_neighbors(const std::vector<Candidate>& sorted,
                                                        std::size_t limit) const {
    // Keep a candidate only if it is closer to the base than to every
    // neighbor already kept.
    std::vector<std::uint32_t> kept;
    for (const auto& c : sorted) {
        if (kept.size() >= limit) break;
        const auto v = slot_vector(c.slot);
        bool diverse = true;
        for (std::uint32_t k : kept) {
            if (l2_squared(v, slot_vector(k)) < c.dist) {
                diverse = false;
                break;
            }
        }
        if (diverse) kept.push_back(c.slot);
    }
    return kept;
}

void GraphIndex::shrink_links(std::uint32_t slot, int level) {
    auto& list = links_[slot][level];
    const std::size_t limit = degree_limit(level);
    if (list.size() <= limit) return;
    const auto base = slot_vector(slot);
    std::vector<Candidate> cands;
    cands.reserve(list.size());
    for (std::uint32_t nb : list) cands.push_back({l2_squared(base, slot_vector(nb)), slot_ids_[nb], nb});
    std::sort(cands.begin(), cands.end());
    list = select_neighbors(cands, limit);
}

void GraphIndex::insert_slot(std::uint32_t slot, int level) {
    slot_levels_[slot] = level;
    links_[slot].assign(static_cast<std::size_t>(level) + 1, {});
    if (!entry_slot_) {
        entry_slot_ = slot;
        max_level_ = level;
        return;
    }
    const auto query = slot_vector(slot);
    const std::uint32_t ep = *entry_slot_;
    Candidate current{l2_squared(query, slot_vector(ep)), slot_ids_[ep], ep};
    for (int l = max_level_; l > level; --l) current = greedy_descend(query, current, l);

    std::vector<Candidate> entry{current};
    for (int l = std::min(level, max_level_); l >= 0; --l) {
        auto found = search_layer(query, entry, params_.ef_construction, l);
        links_[slot][l] = select_neighbors(found, params_.max_degree);
        for (std::uint32_t nb : links_[slot][l]) {
            links_[nb][l].push_back(slot);
            shrink_links(nb, l);
        }
        entry = std::move(found);
    }
    if (level > max_level_) {
        entry_slot_ = slot;
        max_level_ = level;
    }
}

SearchResult GraphIndex::search(std::span<const float> query, std::size_t k, std::size_t ef) const {
    if (query.size() != params_.dimension) {
        throw DimensionMismatch("query has dimension " + std::to_string(query.size()) +
                                ", index expects " + std::to_string(params_.dimension));
    }
    if (ef < k) throw InvalidArgument("ef (" + std::to_string(ef) + ") must be >= k (" + std::to_string(k) + ")");
    if (!entry_slot_) throw EmptyIndex("search on an empty index");

    Vector normalized;
    if (params_.metric == Metric::kAngular) {
        normalized.assign(query.begin(), query.end());
        normalize(normalized);
        query = normalized;
    }

    const std::uint32_t ep = *entry_slot_;
    Candidate current{l2_squared(query, slot_vector(ep)), slot_ids_[ep], ep};
    for (int l = max_level_; l > 0; --l) current = greedy_descend(query, current, l);
    auto found = search_layer(query, {current}, std::max<std::size_t>(ef, 1), 0);

    SearchResult result;
    const std::size_t n = std::min(k, found.size());
    result.ids.reserve(n);
    result.distances.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.ids.push_back(found[i].id);
        result.distances.push_back(std::sqrt(found[i].dist));
    }
    return result;
}

void GraphIndex::erase(std::span<const ExternalId> ids) {
    std::vector<std::uint8_t> doomed(slot_ids_.size(), 0);
    for (ExternalId id : ids) {
        const std::uint32_t slot = slot_of(id);
        if (doomed[slot]) throw DuplicateId("external id " + std::to_string(id) + " listed twice for deletion");
        doomed[slot] = 1;
    }
    for (std::uint32_t slot = 0; slot < slot_ids_.size(); ++slot) {
        if (slot_levels_[slot] < 0) continue;
        if (doomed[slot]) {
            ids_.set(slot_ids_[slot], IdMap::kRetired);
            slot_levels_[slot] = -1;
            std::vector<std::vector<std::uint32_t>>().swap(links_[slot]);
            free_slots_.push_back(slot);
            --live_count_;
        } else {
            for (auto& list : links_[slot]) {
                std::erase_if(list, [&](std::uint32_t nb) { return doomed[nb] != 0; });
            }
        }
    }
    if (entry_slot_ && doomed[*entry_slot_]) elect_entry_point();
}

void GraphIndex::elect_entry_point() {
    entry_slot_.reset();
    max_level_ = -1;
    for (std::uint32_t slot = 0; slot < slot_ids_.size(); ++slot) {
        const int level = slot_levels_[slot];
        if (level < 0) continue;
        if (level > max_level_ || (level == max_level_ && slot_ids_[slot] < slot_ids_[*entry_slot_])) {
            entry_slot_ = slot;
            max_level_ = level;
        }
    }
}

void GraphIndex::retire(std::span<const ExternalId> ids) {
    for (ExternalId id : ids) {
        if (ids_.get(id) == IdMap::kAbsent) ids_.set(id, IdMap::kRetired);
    }
}

std::vector<ExternalId> GraphIndex::retired_ids() const {
    std::vector<ExternalId> out;
    for (const auto& [id, value] : ids_.entries()) {
        if (value == IdMap::kRetired) out.push_back(id);
    }
    return out;
}

std::uint32_t GraphIndex::slot_of(ExternalId id) const {
    const std::uint32_t slot = ids_.get(id);
    if (slot == IdMap::kAbsent || slot == IdMap::kRetired) {
        throw UnknownId("external id " + std::to_string(id) + " is not a live node");
    }
    return slot;
}

bool GraphIndex::was_used(ExternalId id) const noexcept { return ids_.get(id) != IdMap::kAbsent; }

std::optional<EntryPoint> GraphIndex::entry_point() const {
    if (!entry_slot_) return std::nullopt;
    return EntryPoint{slot_ids_[*entry_slot_], max_level_};
}

std::vector<ExternalId> GraphIndex::live_ids() const {
    std::vector<ExternalId> out;
    out.reserve(live_count_);
    for (std::uint32_t slot = 0; slot < slot_ids_.size(); ++slot) {
        if (slot_levels_[slot] >= 0) out.push_back(slot_ids_[slot]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int GraphIndex::level_of(ExternalId id) const { return slot_levels_[slot_of(id)]; }

std::vector<ExternalId> GraphIndex::neighbors(ExternalId id, int level) const {
    const std::uint32_t slot = slot_of(id);
    if (level < 0 || level > slot_levels_[slot]) {
        throw InvalidArgument("node " + std::to_string(id) + " has no level " + std::to_string(level));
    }
    std::vector<ExternalId> out;
    out.reserve(links_[slot][level].size());
    for (std::uint32_t nb : links_[slot][level]) out.push_back(slot_ids_[nb]);
    return out;
}

std::span<const float> GraphIndex::vector_of(ExternalId id) const { return slot_vector(slot_of(id)); }

std::vector<VectorRecord> GraphIndex::records() const {
    std::vector<VectorRecord> out;
    out.reserve(live_count_);
    for (ExternalId id : live_ids()) {
        const auto v = vector_of(id);
        out.push_back({id, Vector(v.begin(), v.end())});
    }
    return out;
}

std::size_t GraphIndex::edge_count() const noexcept {
    std::size_t total = 0;
    for (std::uint32_t slot = 0; slot < slot_ids_.size(); ++slot) {
        if (slot_levels_[slot] < 0) continue;
        for (const auto& list : links_[slot]) total += list.size();
    }
    return total;
}

GraphIndex::Adjacency GraphIndex::adjacency() const {
    Adjacency out;
    for (std::uint32_t slot = 0; slot < slot_ids_.size(); ++slot) {
        if (slot_levels_[slot] < 0) continue;
        auto& levels = out[slot_ids_[slot]];
        for (const auto& list : links_[slot]) {
            auto& dst = levels.emplace_back();
            for (std::uint32_t nb : list) dst.push_back(slot_ids_[nb]);
        }
    }
    return out;
}

}  // namespace hnswdel
