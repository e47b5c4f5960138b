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

#include "hnswdel/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hnswdel/distance.hpp"
#include "svg_plot.hpp"

namespace hnswdel {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    // floor at 1 ns
    return std::max(elapsed.count(), 1e-9);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string opt_qps(const std::optional<ThroughputReport>& r) { return r ? num(r->qps) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string strategy_label(const Strategy& strategy) {
    if (const auto* method = std::get_if<DeletionMethod>(&strategy)) return method_name(*method);
    return "controller";
}

void ProtocolConfig::validate(std::size_t base_size) const {
    if (n == 0) throw InvalidArgument("protocol: n must be at least 1");
    if (batch == 0) throw InvalidArgument("protocol: batch size must be at least 1");
    if (steps == 0) throw InvalidArgument("protocol: need at least one update step");
    if (k == 0) throw InvalidArgument("protocol: k must be at least 1");
    if (ef_search < k) throw InvalidArgument("protocol: ef_search must be >= k");
    if (batch > n) throw InvalidArgument("protocol: batch size exceeds the index size");
    if (n + steps * batch > base_size) {
        throw InvalidArgument("protocol: dataset has " + std::to_string(base_size) + " vectors, need n + S*b = " +
                              std::to_string(n + steps * batch));
    }
}

std::vector<ExternalId> deletion_ids(std::size_t step, std::size_t batch) {
    if (step == 0) throw InvalidArgument("deletion_ids: steps start at 1");
    std::vector<ExternalId> ids(batch);
    for (std::size_t i = 0; i < batch; ++i) ids[i] = 1 + (step - 1) * batch + i;
    return ids;
}

std::vector<ExternalId> insertion_ids(std::size_t step, std::size_t n, std::size_t batch) {
    if (step == 0) throw InvalidArgument("insertion_ids: steps start at 1");
    std::vector<ExternalId> ids(batch);
    for (std::size_t i = 0; i < batch; ++i) ids[i] = 1 + n + (step - 1) * batch + i;
    return ids;
}

GroundTruth ground_truth_oracle(std::span<const VectorRecord> points, std::span<const Vector> queries,
                                std::size_t k, Metric metric) {
    if (points.empty()) throw InvalidArgument("ground_truth_oracle: empty point set");
    if (k == 0) throw InvalidArgument("ground_truth_oracle: k must be positive");
    const std::size_t d = points.front().vector.size();
    std::vector<float> flat(points.size() * d);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].vector.size() != d) throw DimensionMismatch("ground_truth_oracle: mixed dimensions");
        std::copy(points[i].vector.begin(), points[i].vector.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * d));
        if (metric == Metric::kAngular) normalize({flat.data() + i * d, d});
    }

    GroundTruth gt;
    gt.nearest.reserve(queries.size());
    gt.top_k.reserve(queries.size());
    const std::size_t take = std::min(k, points.size());
    std::vector<std::pair<float, ExternalId>> scored(points.size());
    Vector q;
    for (const auto& query : queries) {
        if (query.size() != d) throw DimensionMismatch("ground_truth_oracle: query dimension mismatch");
        q = query;
        if (metric == Metric::kAngular) normalize(q);
        for (std::size_t i = 0; i < points.size(); ++i) {
            scored[i] = {l2_squared(q, {flat.data() + i * d, d}), points[i].external_id};
        }
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end());
        auto& top = gt.top_k.emplace_back();
        for (std::size_t i = 0; i < take; ++i) top.push_back(scored[i].second);
        gt.nearest.push_back(top.front());
    }
    return gt;
}

RunRecord run_protocol(std::span<const VectorRecord> base, std::span<const Vector> queries,
                       const ProtocolConfig& cfg) {
    cfg.validate(base.size());
    if (queries.empty()) throw InvalidArgument("protocol: no queries");
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].external_id != i + 1) {
            throw InvalidArgument("protocol: base vector " + std::to_string(i) + " must carry id " +
                                  std::to_string(i + 1));
        }
    }

    RunRecord run;
    run.method = strategy_label(cfg.strategy);
    const auto* method = std::get_if<DeletionMethod>(&cfg.strategy);
    const auto* policy = std::get_if<Policy>(&cfg.strategy);

    IndexState state(GraphIndex::construct(base.first(cfg.n), cfg.index));
    ControllerState controller;

    auto measure = [&](std::size_t step) {
        StepMetrics m;
        m.step = step;
        std::vector<VectorRecord> visible = state.index.records();
        std::erase_if(visible, [&](const VectorRecord& r) { return state.flags.contains(r.external_id); });
        if (visible.size() != cfg.n) {
            throw Error("protocol: visible set has " + std::to_string(visible.size()) + " points, expected " +
                        std::to_string(cfg.n));
        }
        const GroundTruth gt = ground_truth_oracle(visible, queries, cfg.k, cfg.index.metric);

        std::vector<SearchResult> results(queries.size());
        const auto start = Clock::now();
        for (std::size_t i = 0; i < queries.size(); ++i) results[i] = state.search(queries[i], cfg.k, cfg.ef_search);
        m.qps_search = throughput(Operation::kSearch, queries.size(), seconds_since(start));
        m.recall = recall_at_k(results, gt.nearest, cfg.k);
        m.memory = memory_usage(state.index, state.flags);
        if (cfg.record_curve) m.curve = qps_recall_curve(state, queries, gt.nearest, cfg.k, cfg.ef_ladder);
        return m;
    };

    run.steps.push_back(measure(0));
    if (policy) run.steps.back().controller_event = "policy=" + policy->describe();

    for (std::size_t s = 1; s <= cfg.steps; ++s) {
        const auto doomed = deletion_ids(s, cfg.batch);
        ControlAction action = ControlAction::kPhysical;
        auto start = Clock::now();
        if (method) {
            state.remove(*method, doomed);
        } else {
            action = controlled_delete(state, doomed, *policy, controller);
        }
        const double delete_s = seconds_since(start);

        const auto fresh = base.subspan(cfg.n + (s - 1) * cfg.batch, cfg.batch);
        start = Clock::now();
        state.index.add(fresh);
        const double add_s = seconds_since(start);

        StepMetrics m = measure(s);
        m.qps_delete = throughput(Operation::kDelete, cfg.batch, delete_s);
        m.qps_add = throughput(Operation::kAdd, cfg.batch, add_s);
        if (policy) m.controller_event = action_name(action);
        run.steps.push_back(std::move(m));
    }
    return run;
}

std::vector<std::filesystem::path> emit_results(std::span<const RunRecord> runs, const std::filesystem::path& dir,
                                                bool plots) {
    if (runs.empty()) throw InvalidArgument("emit_results: nothing to write");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto open = [&](const std::filesystem::path& p) {
        std::ofstream out(p);
        if (!out) throw IoError("cannot write " + p.string());
        written.push_back(p);
        return out;
    };

    {
        auto out = open(dir / "steps.csv");
        out << "step,method,recall,qps_search,qps_add,qps_delete,vector_bytes,adjacency_bytes,flag_bytes,"
               "total_bytes,controller_event\n";
        for (const auto& run : runs) {
            for (const auto& m : run.steps) {
                out << m.step << ',' << run.method << ',' << num(m.recall.recall) << ',' << num(m.qps_search.qps)
                    << ',' << opt_qps(m.qps_add) << ',' << opt_qps(m.qps_delete) << ',' << m.memory.vector_bytes
                    << ',' << m.memory.adjacency_bytes << ',' << m.memory.flag_bytes << ',' << m.memory.total_bytes
                    << ',' << m.controller_event << '\n';
            }
        }
        if (!out) throw IoError("failed writing steps.csv");
    }
    for (const auto& run : runs) {
        auto out = open(dir / ("curve_" + run.method + ".csv"));
        out << "step,ef,recall,qps\n";
        for (const auto& m : run.steps) {
            for (const auto& p : m.curve) {
                out << m.step << ',' << p.ef << ',' << num(p.recall) << ',' << num(p.qps) << '\n';
            }
        }
        if (!out) throw IoError("failed writing curve file");
    }

    if (plots) {
        using Getter = double (*)(const StepMetrics&);
        struct Family {
            const char* file;
            const char* title;
            const char* y_label;
            Getter get;
            bool skip_step0;
        };
        const Family families[] = {
            {"recall.svg", "1-Recall@k per step", "recall", [](const StepMetrics& m) { return m.recall.recall; },
             false},
            {"qps_search.svg", "Search throughput", "queries / s",
             [](const StepMetrics& m) { return m.qps_search.qps; }, false},
            {"qps_add.svg", "Insertion throughput", "inserts / s",
             [](const StepMetrics& m) { return m.qps_add ? m.qps_add->qps : 0.0; }, true},
            {"qps_delete.svg", "Deletion throughput", "deletes / s",
             [](const StepMetrics& m) { return m.qps_delete ? m.qps_delete->qps : 0.0; }, true},
            {"memory.svg", "Index memory", "bytes",
             [](const StepMetrics& m) { return static_cast<double>(m.memory.total_bytes); }, false},
        };
        for (const auto& fam : families) {
            std::vector<svg::Series> series;
            for (const auto& run : runs) {
                svg::Series s{run.method, {}, {}};
                for (const auto& m : run.steps) {
                    if (fam.skip_step0 && m.step == 0) continue;
                    s.xs.push_back(static_cast<double>(m.step));
                    s.ys.push_back(fam.get(m));
                }
                series.push_back(std::move(s));
            }
            svg::write_line_plot(dir / fam.file, fam.title, "update step", fam.y_label, series);
            written.push_back(dir / fam.file);
        }
        std::vector<svg::Series> curves;
        for (const auto& run : runs) {
            if (run.steps.back().curve.empty()) continue;
            svg::Series s{run.method, {}, {}};
            for (const auto& p : run.steps.back().curve) {
                s.xs.push_back(p.recall);
                s.ys.push_back(p.qps);
            }
            curves.push_back(std::move(s));
        }
        if (!curves.empty()) {
            svg::write_line_plot(dir / "qps_recall.svg", "QPS vs 1-Recall@k (final step)", "recall", "queries / s",
                                 curves);
            written.push_back(dir / "qps_recall.svg");
        }
    }
    return written;
}

std::vector<RunRecord> read_steps_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw CorruptData(path.string() + ": missing header");
    std::vector<RunRecord> runs;
    std::map<std::string, std::size_t> index_of;
    auto parse_qps = [](const std::string& s, Operation op) -> std::optional<ThroughputReport> {
        if (s.empty()) return std::nullopt;
        ThroughputReport r;
        r.operation = op;
        r.qps = std::stod(s);
        return r;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 11) throw CorruptData(path.string() + ": expected 11 columns, got " + std::to_string(f.size()));
        auto [it, inserted] = index_of.emplace(f[1], runs.size());
        if (inserted) runs.push_back({f[1], {}});
        StepMetrics m;
        m.step = std::stoul(f[0]);
        m.recall.recall = std::stod(f[2]);
        m.qps_search.qps = std::stod(f[3]);
        m.qps_add = parse_qps(f[4], Operation::kAdd);
        m.qps_delete = parse_qps(f[5], Operation::kDelete);
        m.memory.vector_bytes = std::stoull(f[6]);
        m.memory.adjacency_bytes = std::stoull(f[7]);
        m.memory.flag_bytes = std::stoull(f[8]);
        m.memory.total_bytes = std::stoull(f[9]);
        m.controller_event = f[10];
        runs[it->second].steps.push_back(std::move(m));
    }
    return runs;
}

}  // namespace hnswdel
