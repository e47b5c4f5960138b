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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "hnswdel/graph_index.hpp"

namespace hnswdel::testing {

inline std::vector<Vector> random_vectors(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g(0.0f, 1.0f);
    std::vector<Vector> out(n, Vector(d));
    for (auto& v : out)
        for (auto& x : v) x = g(rng);
    return out;
}

inline std::vector<VectorRecord> random_records(std::size_t n, std::size_t d, std::uint64_t seed,
                                                ExternalId first_id = 1) {
    std::vector<VectorRecord> out;
    for (auto& v : random_vectors(n, d, seed)) out.push_back({first_id + out.size(), std::move(v)});
    return out;
}

inline IndexParams small_params(std::size_t d, std::uint64_t seed = 7) {
    IndexParams p;
    p.dimension = d;
    p.max_degree = 8;
    p.ef_construction = 64;
    p.seed = seed;
    return p;
}

// Exact k-NN by a plain double-precision scan, sorted on (distance, id).
inline std::vector<ExternalId> naive_knn(const std::vector<VectorRecord>& points, const Vector& q, std::size_t k) {
    std::vector<std::pair<double, ExternalId>> all;
    for (const auto& p : points) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double diff = static_cast<double>(p.vector[i]) - q[i];
            s += diff * diff;
        }
        all.emplace_back(s, p.external_id);
    }
    std::sort(all.begin(), all.end());
    std::vector<ExternalId> ids;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) ids.push_back(all[i].second);
    return ids;
}

// Level-0 BFS from the entry point; returns the set of reached ids.
inline std::set<ExternalId> reachable(const GraphIndex& g) {
    std::set<ExternalId> seen;
    const auto ep = g.entry_point();
    if (!ep) return seen;
    std::deque<ExternalId> todo{ep->id};
    seen.insert(ep->id);
    while (!todo.empty()) {
        const ExternalId cur = todo.front();
        todo.pop_front();
        for (ExternalId nb : g.neighbors(cur, 0))
            if (seen.insert(nb).second) todo.push_back(nb);
    }
    return seen;
}

// Structural invariants: edges point at live nodes present on that level,
// no self loops or repeats, degree limits respected, entry point on top.
inline bool invariants_hold(const GraphIndex& g) {
    const auto adj = g.adjacency();
    if (adj.size() != g.size()) return false;
    int top = -1;
    for (const auto& [id, levels] : adj) {
        if (static_cast<int>(levels.size()) != g.level_of(id) + 1) return false;
        top = std::max(top, g.level_of(id));
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const auto& list = levels[l];
            if (list.size() > g.degree_limit(static_cast<int>(l))) return false;
            std::set<ExternalId> uniq(list.begin(), list.end());
            if (uniq.size() != list.size() || uniq.count(id)) return false;
            for (ExternalId nb : list) {
                auto it = adj.find(nb);
                if (it == adj.end() || it->second.size() <= l) return false;
            }
        }
    }
    const auto ep = g.entry_point();
    if (g.empty()) return !ep.has_value();
    return ep && ep->level == top && g.level_of(ep->id) == top;
}

}  // namespace hnswdel::testing
