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

#include "hnswdel/dataset_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

namespace hnswdel {

namespace detail {

// Serializes GraphIndex internals for snapshots.
struct SnapshotAccess {
    static void write(const GraphIndex& g, std::string& out);
    static GraphIndex read(std::string_view& in);
};

}  // namespace detail

namespace {

constexpr char kMagic[8] = {'H', 'N', 'S', 'W', 'D', 'E', 'L', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

template <typename Scalar>
std::vector<std::vector<Scalar>> parse_vecs(const std::string& data, const std::filesystem::path& path) {
    std::vector<std::vector<Scalar>> rows;
    std::size_t pos = 0;
    std::int32_t dim = -1;
    while (pos < data.size()) {
        if (data.size() - pos < sizeof(std::int32_t)) throw CorruptData(path.string() + ": truncated header");
        std::int32_t d;
        std::memcpy(&d, data.data() + pos, sizeof d);
        pos += sizeof d;
        if (d <= 0) throw CorruptData(path.string() + ": non-positive dimension " + std::to_string(d));
        if (dim >= 0 && d != dim) {
            throw DimensionMismatch(path.string() + ": record " + std::to_string(rows.size()) + " has dimension " +
                                    std::to_string(d) + ", expected " + std::to_string(dim));
        }
        dim = d;
        const std::size_t bytes = static_cast<std::size_t>(d) * sizeof(Scalar);
        if (data.size() - pos < bytes) throw CorruptData(path.string() + ": truncated record");
        auto& row = rows.emplace_back(static_cast<std::size_t>(d));
        std::memcpy(row.data(), data.data() + pos, bytes);
        pos += bytes;
    }
    return rows;
}

template <typename Scalar>
void write_vecs(const std::filesystem::path& path, std::span<const std::vector<Scalar>> rows) {
    std::string out;
    for (const auto& row : rows) {
        if (row.size() != rows.front().size()) throw DimensionMismatch("write_vecs: rows differ in dimension");
        const auto d = static_cast<std::int32_t>(row.size());
        out.append(reinterpret_cast<const char*>(&d), sizeof d);
        out.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(Scalar));
    }
    write_file(path, out);
}

// Little-endian POD append/consume helpers for the snapshot payload.
template <typename T>
void put(std::string& out, const T& v) {
    out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::string_view& in) {
    if (in.size() < sizeof(T)) throw CorruptData("snapshot payload truncated");
    T v;
    std::memcpy(&v, in.data(), sizeof v);
    in.remove_prefix(sizeof v);
    return v;
}

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), chunk);
        pos += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

namespace detail {

void SnapshotAccess::write(const GraphIndex& g, std::string& out) {
    const auto& p = g.params_;
    put<std::uint64_t>(out, p.dimension);
    put<std::uint8_t>(out, p.metric == Metric::kL2 ? 0 : 1);
    put<std::uint64_t>(out, p.max_degree);
    put<std::uint64_t>(out, p.ef_construction);
    put<std::uint64_t>(out, p.seed);

    std::ostringstream rng;
    rng << g.rng_;
    const std::string rng_state = rng.str();
    put<std::uint64_t>(out, rng_state.size());
    out += rng_state;

    put<std::uint64_t>(out, g.slot_ids_.size());
    for (std::size_t slot = 0; slot < g.slot_ids_.size(); ++slot) {
        put<std::uint64_t>(out, g.slot_ids_[slot]);
        put<std::int32_t>(out, g.slot_levels_[slot]);
        if (g.slot_levels_[slot] < 0) continue;
        const auto v = g.slot_vector(static_cast<std::uint32_t>(slot));
        out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float));
        for (const auto& list : g.links_[slot]) {
            put<std::uint32_t>(out, static_cast<std::uint32_t>(list.size()));
            for (std::uint32_t nb : list) put<std::uint32_t>(out, nb);
        }
    }
    put<std::uint64_t>(out, g.free_slots_.size());
    for (std::uint32_t slot : g.free_slots_) put<std::uint32_t>(out, slot);

    const auto entries = g.ids_.entries();
    put<std::uint64_t>(out, entries.size());
    for (const auto& [id, value] : entries) {
        put<std::uint64_t>(out, id);
        put<std::uint32_t>(out, value);
    }
    put<std::uint8_t>(out, g.entry_slot_ ? 1 : 0);
    put<std::uint32_t>(out, g.entry_slot_.value_or(0));
    put<std::int32_t>(out, g.max_level_);
    put<std::uint64_t>(out, g.live_count_);
}

GraphIndex SnapshotAccess::read(std::string_view& in) {
    IndexParams p;
    p.dimension = take<std::uint64_t>(in);
    const auto metric = take<std::uint8_t>(in);
    if (metric > 1) throw CorruptData("snapshot: unknown metric");
    p.metric = metric == 0 ? Metric::kL2 : Metric::kAngular;
    p.max_degree = take<std::uint64_t>(in);
    p.ef_construction = take<std::uint64_t>(in);
    p.seed = take<std::uint64_t>(in);
    GraphIndex g(p);

    const auto rng_len = take<std::uint64_t>(in);
    if (in.size() < rng_len) throw CorruptData("snapshot payload truncated");
    std::istringstream rng(std::string(in.substr(0, rng_len)));
    rng >> g.rng_;
    if (!rng) throw CorruptData("snapshot: bad generator state");
    in.remove_prefix(rng_len);

    const auto slots = take<std::uint64_t>(in);
    if (slots >= IdMap::kRetired) throw CorruptData("snapshot: slot count out of range");
    g.slot_ids_.resize(slots);
    g.slot_levels_.resize(slots);
    g.links_.resize(slots);
    g.data_.assign(slots * p.dimension, 0.0f);
    std::size_t live = 0;
    for (std::size_t slot = 0; slot < slots; ++slot) {
        g.slot_ids_[slot] = take<std::uint64_t>(in);
        const auto level = take<std::int32_t>(in);
        g.slot_levels_[slot] = level;
        if (level < 0) continue;
        if (level > 64) throw CorruptData("snapshot: implausible level");
        ++live;
        const std::size_t bytes = p.dimension * sizeof(float);
        if (in.size() < bytes) throw CorruptData("snapshot payload truncated");
        std::memcpy(g.data_.data() + slot * p.dimension, in.data(), bytes);
        in.remove_prefix(bytes);
        g.links_[slot].resize(static_cast<std::size_t>(level) + 1);
        for (auto& list : g.links_[slot]) {
            const auto count = take<std::uint32_t>(in);
            if (count > in.size() / sizeof(std::uint32_t)) throw CorruptData("snapshot payload truncated");
            list.resize(count);
            for (auto& nb : list) {
                nb = take<std::uint32_t>(in);
                if (nb >= slots) throw CorruptData("snapshot: neighbor slot out of range");
            }
        }
    }
    const auto n_free = take<std::uint64_t>(in);
    if (n_free > slots) throw CorruptData("snapshot: free list larger than slot table");
    g.free_slots_.resize(n_free);
    for (auto& slot : g.free_slots_) {
        slot = take<std::uint32_t>(in);
        if (slot >= slots || g.slot_levels_[slot] >= 0) throw CorruptData("snapshot: bad free slot");
    }
    const auto n_ids = take<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n_ids; ++i) {
        const auto id = take<std::uint64_t>(in);
        const auto value = take<std::uint32_t>(in);
        if (value != IdMap::kRetired && (value >= slots || g.slot_ids_[value] != id)) {
            throw CorruptData("snapshot: id table disagrees with slots");
        }
        g.ids_.set(id, value);
    }
    const bool has_entry = take<std::uint8_t>(in) != 0;
    const auto entry = take<std::uint32_t>(in);
    g.max_level_ = take<std::int32_t>(in);
    if (has_entry) {
        if (entry >= slots || g.slot_levels_[entry] < 0) throw CorruptData("snapshot: bad entry point");
        g.entry_slot_ = entry;
    }
    g.live_count_ = take<std::uint64_t>(in);
    if (g.live_count_ != live) throw CorruptData("snapshot: live count mismatch");
    for (std::size_t slot = 0; slot < slots; ++slot) {
        for (std::size_t l = 0; l < g.links_[slot].size(); ++l) {
            for (std::uint32_t nb : g.links_[slot][l]) {
                if (g.slot_levels_[nb] < static_cast<int>(l)) throw CorruptData("snapshot: dangling edge");
            }
        }
    }
    return g;
}

}  // namespace detail

std::vector<Vector> load_fvecs(const std::filesystem::path& path) { return parse_vecs<float>(read_file(path), path); }

std::vector<Vector> load_bvecs(const std::filesystem::path& path) {
    const auto raw = parse_vecs<std::uint8_t>(read_file(path), path);
    std::vector<Vector> out;
    out.reserve(raw.size());
    for (const auto& row : raw) out.emplace_back(row.begin(), row.end());
    return out;
}

std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path) {
    return parse_vecs<std::int32_t>(read_file(path), path);
}

void write_fvecs(const std::filesystem::path& path, std::span<const Vector> rows) { write_vecs<float>(path, rows); }

void write_bvecs(const std::filesystem::path& path, std::span<const std::vector<std::uint8_t>> rows) {
    write_vecs<std::uint8_t>(path, rows);
}

void write_ivecs(const std::filesystem::path& path, std::span<const std::vector<std::int32_t>> rows) {
    write_vecs<std::int32_t>(path, rows);
}

std::vector<VectorRecord> to_records(std::vector<Vector> vectors) {
    std::vector<VectorRecord> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) out.push_back({i + 1, std::move(vectors[i])});
    return out;
}

DatasetBundle load_dataset(const std::filesystem::path& base_path, const std::filesystem::path& query_path,
                           Metric metric) {
    auto load = [](const std::filesystem::path& p) {
        const auto ext = p.extension().string();
        if (ext == ".fvecs") return load_fvecs(p);
        if (ext == ".bvecs") return load_bvecs(p);
        throw InvalidArgument("unsupported vector file extension '" + ext + "' (expected .fvecs or .bvecs)");
    };
    DatasetBundle bundle;
    bundle.name = base_path.stem().string();
    bundle.metric = metric;
    bundle.base = to_records(load(base_path));
    bundle.queries = load(query_path);
    if (!bundle.base.empty() && !bundle.queries.empty() &&
        bundle.base.front().vector.size() != bundle.queries.front().size()) {
        throw DimensionMismatch("base and query files differ in dimension");
    }
    return bundle;
}

DatasetBundle synth_dataset(const SynthParams& params) {
    if (params.n_o == 0 || params.dimension == 0 || params.n_clusters == 0) {
        throw InvalidArgument("synth_dataset: n_o, dimension and n_clusters must be positive");
    }
    if (!(params.cluster_std >= 0.0) || !(params.center_spread >= 0.0)) {
        throw InvalidArgument("synth_dataset: spreads must be non-negative");
    }
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t d = params.dimension;

    std::vector<Vector> centers(params.n_clusters, Vector(d));
    for (auto& c : centers) {
        for (auto& x : c) x = static_cast<float>(gauss(rng) * params.center_spread);
    }
    auto draw = [&] {
        const auto& c = centers[rng() % centers.size()];
        Vector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = static_cast<float>(c[i] + gauss(rng) * params.cluster_std);
        return v;
    };

    DatasetBundle bundle;
    bundle.name = "synth";
    bundle.metric = Metric::kL2;
    bundle.base.reserve(params.n_o);
    for (std::size_t i = 0; i < params.n_o; ++i) bundle.base.push_back({i + 1, draw()});
    bundle.queries.reserve(params.n_queries);
    for (std::size_t i = 0; i < params.n_queries; ++i) bundle.queries.push_back(draw());
    return bundle;
}

std::vector<Vector> load_glove_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<Vector> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        Vector row;
        bool first = true;
        while (fields >> token) {
            char* end = nullptr;
            const float v = std::strtof(token.c_str(), &end);
            if (end != token.c_str() + token.size()) {
                if (!first) throw CorruptData(path.string() + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
            } else {
                row.push_back(v);
            }
            first = false;
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DimensionMismatch(path.string() + ":" + std::to_string(line_no) + ": dimension " +
                                    std::to_string(row.size()) + ", expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_index(const GraphIndex& index, const FlagSet& flags, const std::filesystem::path& path) {
    std::string payload;
    detail::SnapshotAccess::write(index, payload);
    const auto flagged = flags.ids();
    put<std::uint64_t>(payload, flagged.size());
    for (ExternalId id : flagged) put<std::uint64_t>(payload, id);

    std::string out(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint64_t>(out, payload.size());
    out += payload;
    put<std::uint32_t>(out, crc32_of(payload));
    write_file(path, out);
}

std::pair<GraphIndex, FlagSet> load_index(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::string_view in(data);
    if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0) {
        throw CorruptData(path.string() + ": not an index snapshot");
    }
    in.remove_prefix(sizeof kMagic);
    const auto version = take<std::uint32_t>(in);
    if (version != kSnapshotVersion) {
        throw CorruptData(path.string() + ": unsupported snapshot version " + std::to_string(version));
    }
    const auto size = take<std::uint64_t>(in);
    if (in.size() < size + sizeof(std::uint32_t)) throw CorruptData(path.string() + ": truncated snapshot");
    std::string_view payload = in.substr(0, size);
    in.remove_prefix(size);
    if (take<std::uint32_t>(in) != crc32_of(payload)) throw CorruptData(path.string() + ": checksum mismatch");
    if (!in.empty()) throw CorruptData(path.string() + ": trailing bytes after snapshot");

    GraphIndex index = detail::SnapshotAccess::read(payload);
    FlagSet flags;
    const auto n_flags = take<std::uint64_t>(payload);
    for (std::uint64_t i = 0; i < n_flags; ++i) {
        const auto id = take<std::uint64_t>(payload);
        if (!index.contains(id)) throw CorruptData(path.string() + ": flag for a node that is not live");
        flags.insert(id);
    }
    if (!payload.empty()) throw CorruptData(path.string() + ": unexpected payload bytes");
    return {std::move(index), std::move(flags)};
}

}  // namespace hnswdel
