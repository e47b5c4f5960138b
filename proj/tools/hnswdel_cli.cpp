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

// Command-line driver: benchmark runs, deletion control, ground truth and
// dataset utilities.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hnswdel/config.hpp"
#include "hnswdel/dataset_io.hpp"
#include "hnswdel/deletion_control.hpp"
#include "hnswdel/protocol.hpp"

namespace {

using namespace hnswdel;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg = flags.config.empty() ? RunConfig{} : load_config(flags.config);
    if (flags.seed) cfg.apply_seed(*flags.seed);
    if (!flags.out.empty()) cfg.output_dir = flags.out;
    return cfg;
}

void print_steps(const RunRecord& run) {
    std::printf("%-10s %4s %8s %12s %12s %12s %12s  %s\n", "method", "step", "recall", "qps_search", "qps_add",
                "qps_delete", "total_bytes", "event");
    for (const auto& m : run.steps) {
        std::printf("%-10s %4zu %8.4f %12.1f %12.1f %12.1f %12zu  %s\n", run.method.c_str(), m.step, m.recall.recall,
                    m.qps_search.qps, m.qps_add ? m.qps_add->qps : 0.0, m.qps_delete ? m.qps_delete->qps : 0.0,
                    m.memory.total_bytes, m.controller_event.c_str());
    }
}

void prepare(RunConfig& cfg, const DatasetBundle& data) {
    if (data.base.empty() || data.queries.empty()) throw InvalidArgument("dataset has no base or query vectors");
    cfg.protocol.index.dimension = data.base.front().vector.size();
    cfg.protocol.index.metric = data.metric;
}

int cmd_bench(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const DatasetBundle data = load_run_dataset(cfg);
    prepare(cfg, data);
    std::vector<RunRecord> runs;
    for (DeletionMethod method : cfg.methods) {
        ProtocolConfig pc = cfg.protocol;
        pc.strategy = method;
        runs.push_back(run_protocol(data.base, data.queries, pc));
        print_steps(runs.back());
    }
    for (const auto& p : emit_results(runs, cfg.output_dir, cfg.plots)) std::cout << "wrote " << p.string() << '\n';
    return 0;
}

int cmd_control(const CommonFlags& flags) {
    RunConfig cfg = resolve_config(flags);
    const DatasetBundle data = load_run_dataset(cfg);
    prepare(cfg, data);
    ControlConfig cc;
    cc.protocol = cfg.protocol;
    cc.alpha = cfg.alpha;
    cc.train_fraction = cfg.train_fraction;
    cc.split_seed = cfg.seed;
    const ControlOutcome outcome = run_deletion_control(data.base, data.queries, cc);
    const auto& p = outcome.params;
    std::printf("theta  = %.6f\nR0     = %.6f\ndelta  = %.6f\npi     = %zu\nalpha  = %.6f\npolicy = %s\n", p.theta,
                p.r0, p.delta, p.pi, p.alpha, outcome.policy.describe().c_str());
    print_steps(outcome.controlled);
    const RunRecord training[] = {outcome.physical_training, outcome.logical_training};
    emit_results(training, cfg.output_dir / "training", false);
    const RunRecord controlled[] = {outcome.controlled};
    for (const auto& path : emit_results(controlled, cfg.output_dir, cfg.plots)) {
        std::cout << "wrote " << path.string() << '\n';
    }
    return 0;
}

int cmd_gt(const std::string& base, const std::string& queries, std::size_t k, const std::string& metric,
           const std::string& out) {
    const DatasetBundle data = load_dataset(base, queries, parse_metric(metric));
    const GroundTruth gt = ground_truth_oracle(data.base, data.queries, k, data.metric);
    std::vector<std::vector<std::int32_t>> rows;
    for (const auto& top : gt.top_k) rows.emplace_back(top.begin(), top.end());
    write_ivecs(out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
    return 0;
}

int cmd_synth(const SynthParams& params, const std::string& out) {
    const DatasetBundle data = synth_dataset(params);
    std::filesystem::create_directories(out);
    std::vector<Vector> base;
    base.reserve(data.base.size());
    for (const auto& r : data.base) base.push_back(r.vector);
    write_fvecs(std::filesystem::path(out) / "base.fvecs", base);
    write_fvecs(std::filesystem::path(out) / "query.fvecs", data.queries);
    std::cout << "wrote " << base.size() << " base and " << data.queries.size() << " query vectors to " << out << '\n';
    return 0;
}

int cmd_convert(const std::string& in, const std::string& out) {
    const auto rows = load_glove_text(in);
    write_fvecs(out, rows);
    std::cout << "wrote " << rows.size() << " vectors to " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph ANN index deletion benchmark"};
    app.require_subcommand(1);

    CommonFlags bench_flags, control_flags;
    auto add_common = [](CLI::App* sub, CommonFlags& f) {
        sub->add_option("--config", f.config, "flat key = value configuration file");
        sub->add_option("--out", f.out, "output directory (overrides output_dir)");
        sub->add_option("--seed", f.seed, "random seed (overrides seed)");
    };
    auto* bench = app.add_subcommand("bench", "run the delete/insert protocol for each configured method");
    add_common(bench, bench_flags);
    auto* control = app.add_subcommand("control", "estimate theta/pi, pick a policy and run it");
    add_common(control, control_flags);

    std::string gt_base, gt_queries, gt_out, gt_metric = "l2";
    std::size_t gt_k = 10;
    auto* gt = app.add_subcommand("gt", "exact k-NN ground truth as ivecs");
    gt->add_option("--base", gt_base, "base vectors (.fvecs/.bvecs)")->required();
    gt->add_option("--queries", gt_queries, "query vectors (.fvecs/.bvecs)")->required();
    gt->add_option("--k", gt_k, "neighbors per query");
    gt->add_option("--metric", gt_metric, "l2 or angular");
    gt->add_option("--out", gt_out, "output .ivecs path")->required();

    SynthParams synth_params;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a Gaussian-mixture dataset");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--n", synth_params.n_o, "base vectors");
    synth->add_option("--dim", synth_params.dimension, "dimension");
    synth->add_option("--clusters", synth_params.n_clusters, "mixture components");
    synth->add_option("--queries", synth_params.n_queries, "query vectors");
    synth->add_option("--center-spread", synth_params.center_spread, "std-dev of cluster centers");
    synth->add_option("--cluster-std", synth_params.cluster_std, "std-dev within a cluster");
    synth->add_option("--seed", synth_params.seed, "random seed");

    std::string convert_in, convert_out;
    auto* convert = app.add_subcommand("convert", "convert GloVe-style text vectors to fvecs");
    convert->add_option("--in", convert_in, "text file")->required();
    convert->add_option("--out", convert_out, "output .fvecs path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) return cmd_bench(bench_flags);
        if (control->parsed()) return cmd_control(control_flags);
        if (gt->parsed()) return cmd_gt(gt_base, gt_queries, gt_k, gt_metric, gt_out);
        if (synth->parsed()) return cmd_synth(synth_params, synth_out);
        if (convert->parsed()) return cmd_convert(convert_in, convert_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
