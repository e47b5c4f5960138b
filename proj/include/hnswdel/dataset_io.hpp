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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hnswdel/deletion.hpp"

namespace hnswdel {

struct DatasetBundle {
    std::string name;
    std::vector<VectorRecord> base;  // ids 1..|base| in file order
    std::vector<Vector> queries;
    Metric metric = Metric::kL2;
};

// TEXMEX layouts: per record a little-endian int32 dimension followed by
// that many scalars (float32 / uint8 / int32). Every record must share the
// dimension; truncation raises CorruptData.
std::vector<Vector> load_fvecs(const std::filesystem::path& path);
std::vector<Vector> load_bvecs(const std::filesystem::path& path);
std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path);

void write_fvecs(const std::filesystem::path& path, std::span<const Vector> rows);
void write_bvecs(const std::filesystem::path& path, std::span<const std::vector<std::uint8_t>> rows);
void write_ivecs(const std::filesystem::path& path, std::span<const std::vector<std::int32_t>> rows);

// Assigns ids 1..n in order.
std::vector<VectorRecord> to_records(std::vector<Vector> vectors);

// Loads base and query files; the format is picked from the extension
// (.fvecs or .bvecs).
DatasetBundle load_dataset(const std::filesystem::path& base_path, const std::filesystem::path& query_path,
                           Metric metric);

struct SynthParams {
    std::size_t n_o = 20000;
    std::size_t dimension = 32;
    std::size_t n_clusters = 16;
    std::size_t n_queries = 1000;
    double center_spread = 1.0;  // std-dev of cluster centers
    double cluster_std = 1.0;    // std-dev of points around their center
    std::uint64_t seed = 42;
};

// Gaussian mixture; base and queries come from the same mixture.
DatasetBundle synth_dataset(const SynthParams& params);

// Whitespace-separated text, one vector per line, optionally prefixed by a
// token (GloVe layout). Blank lines are skipped.
std::vector<Vector> load_glove_text(const std::filesystem::path& path);

// Binary snapshot with magic, version and CRC-32 over the payload. Captures
// the full graph, retired ids, level-generator state and the flag set.
void save_index(const GraphIndex& index, const FlagSet& flags, const std::filesystem::path& path);
std::pair<GraphIndex, FlagSet> load_index(const std::filesystem::path& path);

}  // namespace hnswdel
