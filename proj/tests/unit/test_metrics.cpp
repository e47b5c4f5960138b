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

#include <numeric>

#include "doctest.h"
#include "hnswdel/metrics.hpp"
#include "support.hpp"

using namespace hnswdel;
using namespace hnswdel::testing;

namespace {

SearchResult ids_only(std::vector<ExternalId> ids) {
    SearchResult r;
    r.distances.assign(ids.size(), 0.0f);
    r.ids = std::move(ids);
    return r;
}

// Direct reading of the 1-Recall@k definition.
double naive_recall(const std::vector<SearchResult>& results, const std::vector<ExternalId>& gt, std::size_t k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        int found = 0;
        for (std::size_t j = 0; j < results[i].ids.size() && j < k; ++j)
            if (results[i].ids[j] == gt[i]) found = 1;
        sum += found;
    }
    return sum / static_cast<double>(results.size());
}

}  // namespace

TEST_CASE("recall examples") {
    const std::vector<SearchResult> four{ids_only({1, 9}), ids_only({8, 2}), ids_only({3}), ids_only({5, 6})};
    const std::vector<ExternalId> gt{1, 2, 3, 4};
    const auto r = recall_at_k(four, gt, 2);
    CHECK(r.recall == 0.75);
    CHECK(r.hits == 3);
    CHECK(r.n_q == 4);

    const std::vector<SearchResult> empty(3);
    const std::vector<ExternalId> gt3{1, 2, 3};
    CHECK(recall_at_k(empty, gt3, 10).recall == 0.0);

    const std::vector<SearchResult> exact{ids_only({1, 7}), ids_only({2, 7}), ids_only({3, 7})};
    CHECK(recall_at_k(exact, gt3, 2).recall == 1.0);
}

TEST_CASE("recall looks only at the first k ids") {
    const std::vector<SearchResult> r{ids_only({5, 6, 1})};
    const std::vector<ExternalId> gt{1};
    CHECK(recall_at_k(r, gt, 2).recall == 0.0);
    CHECK(recall_at_k(r, gt, 3).recall == 1.0);
}

TEST_CASE("recall error paths") {
    const std::vector<SearchResult> r(2);
    const std::vector<ExternalId> gt{1};
    CHECK_THROWS_AS(recall_at_k(r, gt, 1), InvalidArgument);
    CHECK_THROWS_AS(recall_at_k({}, {}, 1), InvalidArgument);
}

TEST_CASE("property: recall matches a naive evaluation") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n_q = 1 + rng() % 40, k = 1 + rng() % 12;
        std::vector<SearchResult> results;
        std::vector<ExternalId> gt;
        for (std::size_t i = 0; i < n_q; ++i) {
            std::vector<ExternalId> ids(rng() % 15);
            for (auto& id : ids) id = 1 + rng() % 20;
            results.push_back(ids_only(ids));
            gt.push_back(1 + rng() % 20);
        }
        CHECK(recall_at_k(results, gt, k).recall == naive_recall(results, gt, k));
    }
}

TEST_CASE("qps examples") {
    CHECK(qps(1000, 2.0) == 500.0);
    CHECK(qps(1, 1.0) == 1.0);
    CHECK(qps(100000, 0.1) == doctest::Approx(1e6));
    CHECK_THROWS_AS(qps(10, 0.0), InvalidArgument);
    CHECK_THROWS_AS(qps(10, -1.0), InvalidArgument);
    const auto t = throughput(Operation::kDelete, 50, 0.5);
    CHECK(t.qps == 100.0);
    CHECK(t.operation == Operation::kDelete);
}

TEST_CASE("memory accounting") {
    const std::size_t d = 6;
    GraphIndex empty(small_params(d));
    const FlagSet none;
    const auto z = memory_usage(empty, none);
    CHECK(z.vector_bytes == 0);
    CHECK(z.adjacency_bytes == 0);
    CHECK(z.flag_bytes == 0);
    CHECK(z.total_bytes == 0);

    auto g = GraphIndex::construct(random_records(1000, d, 3), small_params(d));
    FlagSet flags;
    const auto before = memory_usage(g, flags);
    CHECK(before.vector_bytes == 1000 * d * kBytesPerScalar);
    CHECK(before.adjacency_bytes == g.edge_count() * kBytesPerId);
    CHECK(before.total_bytes == before.vector_bytes + before.adjacency_bytes);

    std::vector<ExternalId> batch(200);
    std::iota(batch.begin(), batch.end(), ExternalId{1});
    delete_logical(g, flags, batch);
    const auto flagged = memory_usage(g, flags);
    CHECK(flagged.vector_bytes == before.vector_bytes);
    CHECK(flagged.adjacency_bytes == before.adjacency_bytes);
    CHECK(flagged.flag_bytes == 200 * kBytesPerId);
    CHECK(flagged.total_bytes >= before.total_bytes);

    delete_physical(g, batch, &flags);
    const auto after = memory_usage(g, flags);
    CHECK(after.vector_bytes == 800 * d * kBytesPerScalar);
    CHECK(after.flag_bytes == 0);
}

TEST_CASE("curve on a single node index") {
    IndexState s(GraphIndex::construct(std::vector<VectorRecord>{{1, {0.5f, 0.5f}}}, small_params(2)));
    const std::vector<Vector> q{{0.0f, 0.0f}};
    const std::vector<ExternalId> gt{1};
    const std::size_t ladder[] = {1};
    const auto curve = qps_recall_curve(s, q, gt, 1, ladder);
    REQUIRE(curve.size() == 1);
    CHECK(curve[0].ef == 1);
    CHECK(curve[0].recall == 1.0);
    CHECK(curve[0].qps > 0.0);
}

TEST_CASE("curve ladder validation") {
    IndexState s(GraphIndex::construct(random_records(10, 2, 1), small_params(2)));
    const std::vector<Vector> q{{0.0f, 0.0f}};
    const std::vector<ExternalId> gt{1};
    CHECK_THROWS_AS(qps_recall_curve(s, q, gt, 1, {}), InvalidArgument);
    const std::size_t below_k[] = {2, 4};
    CHECK_THROWS_AS(qps_recall_curve(s, q, gt, 3, below_k), InvalidArgument);
    const std::size_t not_increasing[] = {4, 4};
    CHECK_THROWS_AS(qps_recall_curve(s, q, gt, 1, not_increasing), InvalidArgument);
}

TEST_CASE("curve recall grows with ef and reaches 1 at full width") {
    const auto recs = random_records(500, 8, 2);
    IndexState s(GraphIndex::construct(recs, IndexParams{8, Metric::kL2, 16, 200, 3}));
    const auto queries = random_vectors(100, 8, 4);
    std::vector<ExternalId> gt;
    for (const auto& q : queries) gt.push_back(naive_knn(recs, q, 1).front());
    const std::size_t ladder[] = {10, 20, 40, 80, 160, 500};
    const auto curve = qps_recall_curve(s, queries, gt, 10, ladder);
    REQUIRE(curve.size() == 6);
    int inversions = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) inversions += curve[i].recall < curve[i - 1].recall;
    CHECK(inversions <= 1);
    CHECK(curve.back().recall == 1.0);
}

TEST_CASE("curve uses filtered search when flags are set") {
    const auto recs = random_records(100, 4, 5);
    IndexState s(GraphIndex::construct(recs, small_params(4)));
    const ExternalId d[] = {1};
    s.remove(DeletionMethod::kLogical, d);
    const std::vector<Vector> q{recs[0].vector};
    const std::vector<ExternalId> gt{1};
    const std::size_t ladder[] = {1, 100};
    for (const auto& p : qps_recall_curve(s, q, gt, 1, ladder)) CHECK(p.recall == 0.0);
}
