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

#include "doctest.h"
#include "hnswdel/dataset_io.hpp"
#include "hnswdel/deletion_control.hpp"
#include "hnswdel/protocol.hpp"
#include "support.hpp"

using namespace hnswdel;
using namespace hnswdel::testing;

namespace {

RunRecord run_with_recalls(const std::string& method, std::vector<double> recalls) {
    RunRecord run;
    run.method = method;
    for (std::size_t s = 0; s < recalls.size(); ++s) {
        StepMetrics m;
        m.step = s;
        m.recall.recall = recalls[s];
        run.steps.push_back(m);
    }
    return run;
}

}  // namespace

TEST_CASE("theta is the minimum recall") {
    const double r[] = {0.90, 0.85, 0.82, 0.83, 0.82};
    CHECK(estimate_theta(r) == 0.82);
    const double c[] = {0.9, 0.9};
    CHECK(estimate_theta(c) == 0.9);
    CHECK_THROWS_AS(estimate_theta(std::span<const double>{}), InvalidArgument);
}

TEST_CASE("theta from a run skips the initial step") {
    const auto run = run_with_recalls("physical", {0.70, 0.85, 0.82, 0.83});
    CHECK(estimate_theta(run) == 0.82);
    CHECK_THROWS_AS(estimate_theta(run_with_recalls("logical", {0.9, 0.8})), InvalidArgument);
    CHECK_THROWS_AS(estimate_theta(run_with_recalls("physical", {0.9})), InvalidArgument);
}

TEST_CASE("pi estimate examples") {
    const auto e = estimate_pi(0.95, 0.80, 5, 0.86);
    CHECK(e.delta == doctest::Approx(-0.03));
    CHECK(e.pi == 3);
    CHECK(estimate_pi(0.95, 0.80, 5, 0.95).pi == 0);
    CHECK(estimate_pi(0.90, 0.60, 3, 0.90).pi == 0);
    CHECK(estimate_pi(0.9, 0.8, 5, 0.99).pi == 0);
    CHECK(estimate_pi(0.9, 0.95, 5, 0.5).pi == 5);
    CHECK(estimate_pi(0.9, 0.9, 4, 0.5).pi == 4);
    CHECK_THROWS_AS(estimate_pi(0.9, 0.8, 0, 0.5), InvalidArgument);
}

TEST_CASE("pi from a logical run uses the first and last step") {
    const auto run = run_with_recalls("logical", {0.95, 0.9, 0.88, 0.86, 0.83, 0.80});
    const auto e = estimate_pi(run, 0.86);
    CHECK(e.pi == 3);
    CHECK_THROWS_AS(estimate_pi(run_with_recalls("physical", {0.9, 0.8}), 0.5), InvalidArgument);
}

TEST_CASE("property: pi never lets the linear model drop below alpha") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double r0 = 0.5 + 0.5 * u(rng), rs = r0 * u(rng);
        const std::size_t steps = 1 + rng() % 10;
        const double alpha = r0 * u(rng);
        const auto e = estimate_pi(r0, rs, steps, alpha);
        if (e.delta < 0.0) {
            CHECK(r0 + e.delta * static_cast<double>(e.pi) >= alpha - 1e-9);
            CHECK(r0 + e.delta * static_cast<double>(e.pi + 1) < alpha + 1e-9);
        }
    }
}

TEST_CASE("policy selection") {
    CHECK(select_policy({0.5, 0.816, 0.0, 1, 0.9}) == Policy::physical_only());
    CHECK(select_policy({0.84, 0.816, 0.0, 1, 0.9}) == Policy::logical_then_rebuild(1));
    CHECK(select_policy({0.816, 0.816, 0.0, 3, 0.9}) == Policy::physical_only());
    CHECK(Policy::logical_then_rebuild(1).describe() == "LogicalThenRebuild(1)");
    CHECK(Policy::physical_only().describe() == "PhysicalOnly");
}

TEST_CASE("physical-only control delegates to physical deletion") {
    const std::vector<VectorRecord> recs{{1, {0.0f}}, {2, {1.0f}}, {3, {2.0f}}};
    IndexState a(GraphIndex::construct(recs, small_params(1)));
    IndexState b(GraphIndex::construct(recs, small_params(1)));
    ControllerState st;
    const ExternalId d[] = {2};
    CHECK(controlled_delete(a, d, Policy::physical_only(), st) == ControlAction::kPhysical);
    delete_physical(b.index, d);
    CHECK(a.index.adjacency() == b.index.adjacency());
    CHECK(a.flags.empty());
    CHECK(st.rebuilds == 0);
}

TEST_CASE("pi of one rebuilds after every step") {
    IndexState s(GraphIndex::construct(random_records(200, 4, 2), small_params(4)));
    ControllerState st;
    for (std::size_t step = 1; step <= 3; ++step) {
        const auto batch = deletion_ids(step, 20);
        CHECK(controlled_delete(s, batch, Policy::logical_then_rebuild(1), st) == ControlAction::kLogicalAndRebuild);
        CHECK(s.flags.empty());
        CHECK(s.index.size() == 200 - 20 * step);
        CHECK(st.rebuilds == step);
    }
}

TEST_CASE("pi of zero flags and rebuilds in the same call") {
    IndexState s(GraphIndex::construct(random_records(100, 4, 2), small_params(4)));
    ControllerState st;
    const auto batch = deletion_ids(1, 10);
    CHECK(controlled_delete(s, batch, Policy::logical_then_rebuild(0), st) == ControlAction::kLogicalAndRebuild);
    CHECK(s.flags.empty());
    CHECK(s.index.size() == 90);
}

TEST_CASE("pi of two over four steps") {
    SynthParams sp;
    sp.n_o = 1000;
    sp.dimension = 8;
    sp.n_queries = 1;
    const auto data = synth_dataset(sp);
    const std::size_t b = 100;
    IndexState s(GraphIndex::construct(data.base, small_params(8)));
    ControllerState st;
    const ControlAction expected[] = {ControlAction::kLogical, ControlAction::kLogicalAndRebuild,
                                      ControlAction::kLogical, ControlAction::kLogicalAndRebuild};
    const std::size_t flags_after[] = {b, 0, b, 0};
    for (std::size_t step = 1; step <= 4; ++step) {
        const auto batch = deletion_ids(step, b);
        const std::size_t before = s.flags.size();
        CHECK(controlled_delete(s, batch, Policy::logical_then_rebuild(2), st) == expected[step - 1]);
        if (expected[step - 1] == ControlAction::kLogicalAndRebuild) CHECK(before + b == 2 * b);
        CHECK(s.flags.size() == flags_after[step - 1]);
        CHECK(s.visible_count() == 1000 - step * b);
    }
    CHECK(st.rebuilds == 2);
}

TEST_CASE("query split is deterministic and disjoint") {
    const auto q = random_vectors(50, 3, 1);
    const auto a = split_queries(q, 0.1, 9);
    const auto b = split_queries(q, 0.1, 9);
    CHECK(a.train == b.train);
    CHECK(a.train.size() == 5);
    CHECK(a.test.size() == 45);
    std::set<Vector> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    CHECK(all.size() == 50);
    CHECK(split_queries(q, 0.01, 1).train.size() == 1);
    CHECK(split_queries(q, 0.999, 1).test.size() == 1);
    CHECK_THROWS_AS(split_queries(q, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(split_queries(q, 1.0, 1), InvalidArgument);
}

TEST_CASE("deletion control end to end on a small mixture") {
    SynthParams sp;
    sp.n_o = 1400;
    sp.dimension = 8;
    sp.n_queries = 100;
    const auto data = synth_dataset(sp);
    ControlConfig cfg;
    cfg.protocol.n = 1000;
    cfg.protocol.batch = 200;
    cfg.protocol.steps = 2;
    cfg.protocol.record_curve = false;
    cfg.protocol.index = small_params(8);
    cfg.train_fraction = 0.3;

    SUBCASE("tiny alpha keeps physical deletion") {
        cfg.alpha = 0.01;
        const auto out = run_deletion_control(data.base, data.queries, cfg);
        CHECK(out.policy == Policy::physical_only());
        CHECK(out.controlled.steps.size() == 3);
        CHECK(out.controlled.steps[0].controller_event.find("policy=PhysicalOnly") != std::string::npos);
    }
    SUBCASE("alpha above the initial recall rebuilds every step") {
        cfg.alpha = 1.0;
        const auto out = run_deletion_control(data.base, data.queries, cfg);
        if (out.params.r0 < 1.0) {
            CHECK(out.policy == Policy::logical_then_rebuild(0));
            for (std::size_t s = 1; s < out.controlled.steps.size(); ++s)
                CHECK(out.controlled.steps[s].controller_event.find("rebuild") != std::string::npos);
        }
    }
    SUBCASE("midpoint alpha lies between theta and r0") {
        const auto out = run_deletion_control(data.base, data.queries, cfg);
        CHECK(out.params.alpha == doctest::Approx(0.5 * (out.params.theta + out.params.r0)));
        CHECK(out.physical_training.method == "physical");
        CHECK(out.logical_training.method == "logical");
        CHECK(out.controlled.method == "controller");
        CHECK(out.physical_training.steps[0].recall.n_q == 30);
        CHECK(out.controlled.steps[0].recall.n_q == 70);
    }
}
