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

#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hnswdel/dataset_io.hpp"
#include "hnswdel/distance.hpp"
#include "hnswdel/metrics.hpp"
#include "hnswdel/protocol.hpp"
#include "support.hpp"

using namespace hnswdel;
using namespace hnswdel::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hnswdel_unit_io";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream(p, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

template <typename T>
void append(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

}  // namespace

TEST_CASE("single fvecs record decodes") {
    std::string bytes;
    append<std::int32_t>(bytes, 2);
    append<float>(bytes, 1.0f);
    append<float>(bytes, 2.0f);
    const auto p = scratch("one.fvecs");
    write_bytes(p, bytes);
    CHECK(load_fvecs(p) == std::vector<Vector>{{1.0f, 2.0f}});
}

TEST_CASE("empty vector files load as empty lists") {
    const auto p = scratch("empty.fvecs");
    write_bytes(p, "");
    CHECK(load_fvecs(p).empty());
    CHECK(load_bvecs(p).empty());
    CHECK(load_ivecs(p).empty());
}

TEST_CASE("fvecs round trip is bit identical") {
    const auto rows = random_vectors(100, 7, 3);
    const auto p = scratch("rt.fvecs");
    write_fvecs(p, rows);
    const auto back = load_fvecs(p);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(std::memcmp(back[i].data(), rows[i].data(), rows[i].size() * sizeof(float)) == 0);
    CHECK(fs::file_size(p) == 100 * (4 + 7 * 4));
}

TEST_CASE("bvecs and ivecs round trip") {
    const std::vector<std::vector<std::uint8_t>> b{{0, 255, 7}, {1, 2, 3}};
    const auto pb = scratch("rt.bvecs");
    write_bvecs(pb, b);
    CHECK(load_bvecs(pb) == std::vector<Vector>{{0.0f, 255.0f, 7.0f}, {1.0f, 2.0f, 3.0f}});
    const std::vector<std::vector<std::int32_t>> i{{-1, 5}, {7, 8}};
    const auto pi = scratch("rt.ivecs");
    write_ivecs(pi, i);
    CHECK(load_ivecs(pi) == i);
}

TEST_CASE("truncated and inconsistent vector files are rejected") {
    const auto p = scratch("bad.fvecs");
    write_fvecs(p, random_vectors(3, 4, 1));
    auto bytes = read_bytes(p);
    write_bytes(p, bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(load_fvecs(p), CorruptData);
    write_bytes(p, bytes.substr(0, 2));
    CHECK_THROWS_AS(load_fvecs(p), CorruptData);

    std::string mixed;
    append<std::int32_t>(mixed, 1);
    append<float>(mixed, 1.0f);
    append<std::int32_t>(mixed, 2);
    append<float>(mixed, 1.0f);
    append<float>(mixed, 2.0f);
    write_bytes(p, mixed);
    CHECK_THROWS_AS(load_fvecs(p), DimensionMismatch);

    std::string negative;
    append<std::int32_t>(negative, -4);
    write_bytes(p, negative);
    CHECK_THROWS_AS(load_fvecs(p), CorruptData);

    CHECK_THROWS_AS(load_fvecs(scratch("missing.fvecs")), IoError);
    CHECK_THROWS_AS(write_fvecs(p, std::vector<Vector>{{1.0f}, {1.0f, 2.0f}}), DimensionMismatch);
}

TEST_CASE("dataset loading picks the format by extension") {
    const auto base = scratch("base.fvecs"), query = scratch("query.fvecs");
    write_fvecs(base, random_vectors(20, 3, 1));
    write_fvecs(query, random_vectors(4, 3, 2));
    const auto data = load_dataset(base, query, Metric::kAngular);
    CHECK(data.base.size() == 20);
    CHECK(data.base.front().external_id == 1);
    CHECK(data.base.back().external_id == 20);
    CHECK(data.queries.size() == 4);
    CHECK(data.metric == Metric::kAngular);
    const auto other = scratch("q2.fvecs");
    write_fvecs(other, random_vectors(4, 5, 2));
    CHECK_THROWS_AS(load_dataset(base, other, Metric::kL2), DimensionMismatch);
    CHECK_THROWS_AS(load_dataset(scratch("x.txt"), query, Metric::kL2), InvalidArgument);
}

TEST_CASE("glove text conversion") {
    const auto p = scratch("glove.txt");
    std::ofstream(p) << "the 0.1 0.2 0.3\n\nof -1 2.5 3\n";
    const auto rows = load_glove_text(p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == Vector{-1.0f, 2.5f, 3.0f});
    std::ofstream(p) << "a 1 2\nb 1 2 3\n";
    CHECK_THROWS_AS(load_glove_text(p), DimensionMismatch);
    std::ofstream(p) << "a 1 x\n";
    CHECK_THROWS_AS(load_glove_text(p), CorruptData);
}

TEST_CASE("synthetic mixture is deterministic") {
    SynthParams p;
    p.n_o = 500;
    p.dimension = 4;
    p.n_queries = 20;
    const auto a = synth_dataset(p), b = synth_dataset(p);
    REQUIRE(a.base.size() == 500);
    CHECK(a.queries == b.queries);
    for (std::size_t i = 0; i < a.base.size(); ++i) {
        CHECK(a.base[i].vector == b.base[i].vector);
        CHECK(a.base[i].external_id == i + 1);
    }
    p.seed = 43;
    CHECK(synth_dataset(p).queries != a.queries);
    p.n_clusters = 0;
    CHECK_THROWS_AS(synth_dataset(p), InvalidArgument);
}

TEST_CASE("single tight cluster keeps neighbors inside it") {
    SynthParams p;
    p.n_o = 300;
    p.dimension = 4;
    p.n_clusters = 1;
    p.cluster_std = 1e-3;
    p.n_queries = 10;
    const auto data = synth_dataset(p);
    const auto gt = ground_truth_oracle(data.base, data.queries, 1, Metric::kL2);
    for (std::size_t i = 0; i < data.queries.size(); ++i) {
        const auto& nn = data.base[gt.nearest[i] - 1].vector;
        CHECK(distance(nn, data.queries[i], Metric::kL2) < 0.05f);
    }
}

TEST_CASE("fresh index on the default mixture reaches high recall at ef 160") {
    SynthParams p;
    p.n_o = 10000;
    p.n_queries = 200;
    const auto data = synth_dataset(p);
    IndexParams ip;
    ip.dimension = p.dimension;
    const auto g = GraphIndex::construct(data.base, ip);
    const auto gt = ground_truth_oracle(data.base, data.queries, 10, Metric::kL2);
    std::vector<SearchResult> results;
    for (const auto& q : data.queries) results.push_back(g.search(q, 10, 160));
    CHECK(recall_at_k(results, gt.nearest, 10).recall >= 0.95);
}

TEST_CASE("snapshot of an empty index") {
    const auto p = scratch("empty.idx");
    save_index(GraphIndex(small_params(3)), FlagSet{}, p);
    const auto [g, f] = load_index(p);
    CHECK(g.empty());
    CHECK(f.empty());
    CHECK(g.dimension() == 3);
}

TEST_CASE("snapshot preserves search behaviour, flags and retired ids") {
    auto g = GraphIndex::construct(random_records(1000, 8, 4), small_params(8));
    const auto gone = deletion_ids(1, 50);
    g.erase(gone);
    FlagSet flags;
    const ExternalId flagged[] = {60, 70};
    delete_logical(g, flags, flagged);
    const auto p = scratch("full.idx");
    save_index(g, flags, p);
    auto [h, f] = load_index(p);
    CHECK(h.adjacency() == g.adjacency());
    CHECK(f == flags);
    CHECK(h.retired_ids() == g.retired_ids());
    for (const auto& q : random_vectors(50, 8, 5)) {
        const auto a = search_filtered(g, flags, q, 10, 40), b = search_filtered(h, f, q, 10, 40);
        CHECK(a.ids == b.ids);
        CHECK(a.distances == b.distances);
    }
    // the level generator continues where it left off
    const auto more = random_records(20, 8, 6, 5000);
    g.add(more);
    h.add(more);
    CHECK(h.adjacency() == g.adjacency());
}

TEST_CASE("damaged snapshots raise corruption errors") {
    const auto p = scratch("damaged.idx");
    save_index(GraphIndex::construct(random_records(100, 4, 4), small_params(4)), FlagSet{}, p);
    const auto bytes = read_bytes(p);
    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        write_bytes(p, bytes.substr(0, cut));
        CHECK_THROWS_AS(load_index(p), CorruptData);
    }
    std::string flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x10;
    write_bytes(p, flipped);
    CHECK_THROWS_AS(load_index(p), CorruptData);
    write_bytes(p, "not a snapshot at all");
    CHECK_THROWS_AS(load_index(p), CorruptData);
}
