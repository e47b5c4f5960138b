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

#include "hnswdel/config.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace hnswdel {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& v) {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
}

double to_double(const std::string& v) {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

void RunConfig::apply_seed(std::uint64_t value) {
    seed = value;
    synth.seed = value;
    protocol.index.seed = value;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
    RunConfig cfg;
    std::optional<std::uint64_t> seed;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"base", [&](const std::string& v) { cfg.base_path = v; }},
        {"queries", [&](const std::string& v) { cfg.query_path = v; }},
        {"metric", [&](const std::string& v) { cfg.metric = parse_metric(v); }},
        {"synth_n_o", [&](const std::string& v) { cfg.synth.n_o = to_size(v); }},
        {"synth_dim", [&](const std::string& v) { cfg.synth.dimension = to_size(v); }},
        {"synth_clusters", [&](const std::string& v) { cfg.synth.n_clusters = to_size(v); }},
        {"synth_queries", [&](const std::string& v) { cfg.synth.n_queries = to_size(v); }},
        {"synth_center_spread", [&](const std::string& v) { cfg.synth.center_spread = to_double(v); }},
        {"synth_cluster_std", [&](const std::string& v) { cfg.synth.cluster_std = to_double(v); }},
        {"n", [&](const std::string& v) { cfg.protocol.n = to_size(v); }},
        {"batch", [&](const std::string& v) { cfg.protocol.batch = to_size(v); }},
        {"steps", [&](const std::string& v) { cfg.protocol.steps = to_size(v); }},
        {"k", [&](const std::string& v) { cfg.protocol.k = to_size(v); }},
        {"ef_search", [&](const std::string& v) { cfg.protocol.ef_search = to_size(v); }},
        {"ef_ladder",
         [&](const std::string& v) {
             cfg.protocol.ef_ladder.clear();
             for (const auto& item : split_list(v)) cfg.protocol.ef_ladder.push_back(to_size(item));
         }},
        {"curve", [&](const std::string& v) { cfg.protocol.record_curve = to_bool(v); }},
        {"M", [&](const std::string& v) { cfg.protocol.index.max_degree = to_size(v); }},
        {"ef_construction", [&](const std::string& v) { cfg.protocol.index.ef_construction = to_size(v); }},
        {"methods",
         [&](const std::string& v) {
             cfg.methods.clear();
             for (const auto& item : split_list(v)) cfg.methods.push_back(parse_method(item));
         }},
        {"alpha",
         [&](const std::string& v) {
             if (v == "midpoint") {
                 cfg.alpha.reset();
             } else {
                 cfg.alpha = to_double(v);
             }
         }},
        {"train_fraction", [&](const std::string& v) { cfg.train_fraction = to_double(v); }},
        {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
        {"plots", [&](const std::string& v) { cfg.plots = to_bool(v); }},
        {"seed", [&](const std::string& v) { seed = to_size(v); }},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw InvalidArgument(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw InvalidArgument(where + ": unknown key '" + key + "'");
        if (value.empty()) throw InvalidArgument(where + ": empty value for '" + key + "'");
        try {
            it->second(value);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidArgument(where + ": bad value '" + value + "' for '" + key + "'");
        }
    }
    cfg.protocol.index.metric = cfg.metric;
    cfg.apply_seed(seed.value_or(cfg.seed));
    if (cfg.methods.empty()) throw InvalidArgument(source + ": 'methods' lists no deletion method");
    if (cfg.uses_files() && cfg.query_path.empty()) throw InvalidArgument(source + ": 'base' given without 'queries'");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_config(in, path.string());
}

DatasetBundle load_run_dataset(const RunConfig& cfg) {
    if (cfg.uses_files()) return load_dataset(cfg.base_path, cfg.query_path, cfg.metric);
    DatasetBundle bundle = synth_dataset(cfg.synth);
    bundle.metric = cfg.metric;
    return bundle;
}

}  // namespace hnswdel
