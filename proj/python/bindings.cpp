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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hnswdel/dataset_io.hpp"
#include "hnswdel/deletion_control.hpp"
#include "hnswdel/metrics.hpp"
#include "hnswdel/protocol.hpp"

namespace py = pybind11;
using namespace hnswdel;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using IdArray = py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast>;

std::vector<Vector> rows_of(const FloatArray& a) {
    if (a.ndim() != 2) throw InvalidArgument("expected a 2-d float array");
    const auto n = static_cast<std::size_t>(a.shape(0)), d = static_cast<std::size_t>(a.shape(1));
    std::vector<Vector> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].assign(a.data() + i * d, a.data() + (i + 1) * d);
    return out;
}

std::vector<ExternalId> ids_of(const IdArray& a) {
    if (a.ndim() != 1) throw InvalidArgument("expected a 1-d id array");
    return {a.data(), a.data() + a.size()};
}

std::vector<VectorRecord> records_of(const IdArray& ids, const FloatArray& vectors) {
    auto rows = rows_of(vectors);
    const auto id_list = ids_of(ids);
    if (id_list.size() != rows.size()) throw InvalidArgument("ids and vectors differ in length");
    std::vector<VectorRecord> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = {id_list[i], std::move(rows[i])};
    return out;
}

FloatArray to_array(const std::vector<Vector>& rows) {
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    FloatArray out({rows.size(), d});
    auto* p = out.mutable_data();
    for (const auto& r : rows) p = std::copy(r.begin(), r.end(), p);
    return out;
}

std::vector<float> query_of(const FloatArray& q) {
    if (q.ndim() != 1) throw InvalidArgument("expected a 1-d query");
    return {q.data(), q.data() + q.size()};
}

template <typename T>
py::array_t<T> copy_to_array(const std::vector<T>& v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::tuple result_tuple(const SearchResult& r) {
    return py::make_tuple(copy_to_array(r.ids), copy_to_array(r.distances));
}

py::dict memory_dict(const MemoryReport& m) {
    py::dict d;
    d["vector_bytes"] = m.vector_bytes;
    d["adjacency_bytes"] = m.adjacency_bytes;
    d["flag_bytes"] = m.flag_bytes;
    d["total_bytes"] = m.total_bytes;
    return d;
}

py::list steps_list(const RunRecord& run) {
    py::list out;
    for (const auto& s : run.steps) {
        py::dict d;
        d["step"] = s.step;
        d["method"] = run.method;
        d["recall"] = s.recall.recall;
        d["qps_search"] = s.qps_search.qps;
        d["qps_add"] = s.qps_add ? py::cast(s.qps_add->qps) : py::none();
        d["qps_delete"] = s.qps_delete ? py::cast(s.qps_delete->qps) : py::none();
        d["memory"] = memory_dict(s.memory);
        d["controller_event"] = s.controller_event;
        out.append(d);
    }
    return out;
}

ProtocolConfig protocol_config(std::size_t dimension, Metric metric, std::size_t n, std::size_t batch,
                               std::size_t steps, std::size_t k, std::size_t ef_search, std::size_t max_degree,
                               std::size_t ef_construction, std::uint64_t seed) {
    ProtocolConfig cfg;
    cfg.n = n;
    cfg.batch = batch;
    cfg.steps = steps;
    cfg.k = k;
    cfg.ef_search = ef_search;
    cfg.record_curve = false;
    cfg.index = {dimension, metric, max_degree, ef_construction, seed};
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph ANN index with logical, physical and rebuild deletion";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
    py::register_exception<DuplicateId>(m, "DuplicateId", error);
    py::register_exception<UnknownId>(m, "UnknownId", error);
    py::register_exception<EmptyIndex>(m, "EmptyIndex", error);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
    py::register_exception<IoError>(m, "IoError", error);
    py::register_exception<CorruptData>(m, "CorruptData", error);

    py::enum_<Metric>(m, "Metric").value("L2", Metric::kL2).value("ANGULAR", Metric::kAngular);
    py::enum_<DeletionMethod>(m, "DeletionMethod")
        .value("LOGICAL", DeletionMethod::kLogical)
        .value("PHYSICAL", DeletionMethod::kPhysical)
        .value("REBUILD", DeletionMethod::kRebuild);

    py::class_<IndexParams>(m, "IndexParams")
        .def(py::init([](std::size_t dimension, Metric metric, std::size_t max_degree, std::size_t ef_construction,
                         std::uint64_t seed) { return IndexParams{dimension, metric, max_degree, ef_construction, seed}; }),
             py::arg("dimension"), py::arg("metric") = Metric::kL2, py::arg("max_degree") = 16,
             py::arg("ef_construction") = 200, py::arg("seed") = 42)
        .def_readwrite("dimension", &IndexParams::dimension)
        .def_readwrite("metric", &IndexParams::metric)
        .def_readwrite("max_degree", &IndexParams::max_degree)
        .def_readwrite("ef_construction", &IndexParams::ef_construction)
        .def_readwrite("seed", &IndexParams::seed);

    py::class_<FlagSet>(m, "FlagSet")
        .def(py::init<>())
        .def("__len__", &FlagSet::size)
        .def("__contains__", &FlagSet::contains)
        .def("ids", &FlagSet::ids)
        .def("clear", &FlagSet::clear);

    py::class_<GraphIndex>(m, "GraphIndex")
        .def(py::init<IndexParams>(), py::arg("params"))
        .def_static(
            "construct",
            [](const IdArray& ids, const FloatArray& vectors, const IndexParams& params) {
                const auto recs = records_of(ids, vectors);
                py::gil_scoped_release release;
                return GraphIndex::construct(recs, params);
            },
            py::arg("ids"), py::arg("vectors"), py::arg("params"))
        .def(
            "add",
            [](GraphIndex& g, const IdArray& ids, const FloatArray& vectors) {
                const auto recs = records_of(ids, vectors);
                py::gil_scoped_release release;
                g.add(recs);
            },
            py::arg("ids"), py::arg("vectors"))
        .def(
            "search", [](const GraphIndex& g, const FloatArray& q, std::size_t k, std::size_t ef) {
                return result_tuple(g.search(query_of(q), k, ef));
            },
            py::arg("query"), py::arg("k"), py::arg("ef"))
        .def(
            "erase", [](GraphIndex& g, const IdArray& ids) { g.erase(ids_of(ids)); }, py::arg("ids"))
        .def("__len__", &GraphIndex::size)
        .def("__contains__", &GraphIndex::contains)
        .def_property_readonly("dimension", &GraphIndex::dimension)
        .def_property_readonly("metric", &GraphIndex::metric)
        .def_property_readonly("entry_point",
                               [](const GraphIndex& g) -> py::object {
                                   const auto ep = g.entry_point();
                                   if (!ep) return py::none();
                                   return py::make_tuple(ep->id, ep->level);
                               })
        .def("live_ids", &GraphIndex::live_ids)
        .def("level_of", &GraphIndex::level_of)
        .def("neighbors", &GraphIndex::neighbors, py::arg("id"), py::arg("level") = 0)
        .def("edge_count", &GraphIndex::edge_count)
        .def("adjacency", &GraphIndex::adjacency)
        .def("retired_ids", &GraphIndex::retired_ids);

    m.def(
        "delete_logical",
        [](const GraphIndex& g, FlagSet& flags, const IdArray& ids) { delete_logical(g, flags, ids_of(ids)); },
        py::arg("index"), py::arg("flags"), py::arg("ids"));
    m.def(
        "delete_physical",
        [](GraphIndex& g, const IdArray& ids, FlagSet* flags) { delete_physical(g, ids_of(ids), flags); },
        py::arg("index"), py::arg("ids"), py::arg("flags") = nullptr);
    m.def(
        "delete_rebuild", [](const GraphIndex& g, const IdArray& ids) { return delete_rebuild(g, ids_of(ids)); },
        py::arg("index"), py::arg("ids"));
    m.def(
        "search_filtered",
        [](const GraphIndex& g, const FlagSet& flags, const FloatArray& q, std::size_t k, std::size_t ef) {
            return result_tuple(search_filtered(g, flags, query_of(q), k, ef));
        },
        py::arg("index"), py::arg("flags"), py::arg("query"), py::arg("k"), py::arg("ef"));

    m.def(
        "recall_at_k",
        [](const std::vector<std::vector<ExternalId>>& results, const std::vector<ExternalId>& gt, std::size_t k) {
            std::vector<SearchResult> rs(results.size());
            for (std::size_t i = 0; i < results.size(); ++i) rs[i].ids = results[i];
            return recall_at_k(rs, gt, k).recall;
        },
        py::arg("results"), py::arg("ground_truth"), py::arg("k"));
    m.def("qps", &qps, py::arg("n_ops"), py::arg("elapsed_s"));
    m.def(
        "memory_usage", [](const GraphIndex& g, const FlagSet& f) { return memory_dict(memory_usage(g, f)); },
        py::arg("index"), py::arg("flags"));
    m.def(
        "ground_truth",
        [](const FloatArray& base, const FloatArray& queries, std::size_t k, Metric metric) {
            const auto gt = ground_truth_oracle(to_records(rows_of(base)), rows_of(queries), k, metric);
            return gt.top_k;
        },
        py::arg("base"), py::arg("queries"), py::arg("k"), py::arg("metric") = Metric::kL2);

    m.def(
        "run_protocol",
        [](const FloatArray& base, const FloatArray& queries, DeletionMethod method, std::size_t n, std::size_t batch,
           std::size_t steps, std::size_t k, std::size_t ef_search, Metric metric, std::size_t max_degree,
           std::size_t ef_construction, std::uint64_t seed) {
            const auto records = to_records(rows_of(base));
            const auto qs = rows_of(queries);
            auto cfg = protocol_config(records.empty() ? 0 : records.front().vector.size(), metric, n, batch, steps,
                                       k, ef_search, max_degree, ef_construction, seed);
            cfg.strategy = method;
            RunRecord run;
            {
                py::gil_scoped_release release;
                run = run_protocol(records, qs, cfg);
            }
            return steps_list(run);
        },
        py::arg("base"), py::arg("queries"), py::arg("method"), py::arg("n"), py::arg("batch"), py::arg("steps"),
        py::arg("k") = 10, py::arg("ef_search") = 10, py::arg("metric") = Metric::kL2, py::arg("max_degree") = 16,
        py::arg("ef_construction") = 200, py::arg("seed") = 42);

    m.def("deletion_ids", &deletion_ids, py::arg("step"), py::arg("batch"));
    m.def("insertion_ids", &insertion_ids, py::arg("step"), py::arg("n"), py::arg("batch"));

    m.def(
        "estimate_theta", [](const std::vector<double>& r) { return estimate_theta(r); }, py::arg("recalls"));
    m.def(
        "estimate_pi",
        [](double r0, double rs, std::size_t steps, double alpha) {
            const auto e = estimate_pi(r0, rs, steps, alpha);
            return py::make_tuple(e.delta, e.pi);
        },
        py::arg("r0"), py::arg("r_s"), py::arg("steps"), py::arg("alpha"));
    m.def(
        "select_policy",
        [](double alpha, double theta, std::size_t pi) {
            ControllerParams p;
            p.alpha = alpha;
            p.theta = theta;
            p.pi = pi;
            return select_policy(p).describe();
        },
        py::arg("alpha"), py::arg("theta"), py::arg("pi"));

    m.def(
        "synth_dataset",
        [](std::size_t n_o, std::size_t dimension, std::size_t n_clusters, std::size_t n_queries, double center_spread,
           double cluster_std, std::uint64_t seed) {
            const auto data = synth_dataset({n_o, dimension, n_clusters, n_queries, center_spread, cluster_std, seed});
            std::vector<Vector> base;
            for (const auto& r : data.base) base.push_back(r.vector);
            return py::make_tuple(to_array(base), to_array(data.queries));
        },
        py::arg("n_o") = 20000, py::arg("dimension") = 32, py::arg("n_clusters") = 16, py::arg("n_queries") = 1000,
        py::arg("center_spread") = 1.0, py::arg("cluster_std") = 1.0, py::arg("seed") = 42);
    m.def(
        "load_fvecs", [](const std::filesystem::path& p) { return to_array(load_fvecs(p)); }, py::arg("path"));
    m.def(
        "write_fvecs", [](const std::filesystem::path& p, const FloatArray& rows) { write_fvecs(p, rows_of(rows)); },
        py::arg("path"), py::arg("rows"));
    m.def("save_index", &save_index, py::arg("index"), py::arg("flags"), py::arg("path"));
    m.def("load_index", &load_index, py::arg("path"));
}
