# Copyright 2026 The hnswdel Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Graph ANN index with logical, physical and rebuild deletion."""

from ._core import (
    CorruptData,
    DeletionMethod,
    DimensionMismatch,
    DuplicateId,
    EmptyIndex,
    Error,
    FlagSet,
    GraphIndex,
    IndexParams,
    InvalidArgument,
    IoError,
    Metric,
    UnknownId,
    delete_logical,
    delete_physical,
    delete_rebuild,
    deletion_ids,
    estimate_pi,
    estimate_theta,
    ground_truth,
    insertion_ids,
    load_fvecs,
    load_index,
    memory_usage,
    qps,
    recall_at_k,
    run_protocol,
    save_index,
    search_filtered,
    select_policy,
    synth_dataset,
    write_fvecs,
)

__version__ = "0.1.0"
