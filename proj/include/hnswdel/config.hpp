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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hnswdel/dataset_io.hpp"
#include "hnswdel/protocol.hpp"

namespace hnswdel {

// Settings for the command-line driver, read from a flat "key = value" file.
// '#' starts a comment. Unknown keys are rejected.
struct RunConfig {
    // dataset: files when base_path is set, synthetic mixture otherwise
    std::filesystem::path base_path;
    std::filesystem::path query_path;
    Metric metric = Metric::kL2;
    SynthParams synth;

    ProtocolConfig protocol;
    std::vector<DeletionMethod> methods{DeletionMethod::kLogical, DeletionMethod::kPhysical,
                                        DeletionMethod::kRebuild};

    std::optional<double> alpha;  // unset or "midpoint": halfway between theta and R0
    double train_fraction = 0.1;

    std::filesystem::path output_dir = "results";
    bool plots = true;
    std::uint64_t seed = 42;

    // Pushes the seed into every randomized component.
    void apply_seed(std::uint64_t value);
    bool uses_files() const { return !base_path.empty(); }
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

DatasetBundle load_run_dataset(const RunConfig& cfg);

}  // namespace hnswdel
