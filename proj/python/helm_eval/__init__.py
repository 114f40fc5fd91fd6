# Copyright 2026 The HELM Eval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python access to the HELM evaluation core."""

from ._helm import (
    DegenerateInputError,
    UndefinedMetricError,
    anchor_text,
    constructs,
    cosine,
    coverage_at_k,
    dimension_score,
    faithfulness,
    fleiss_kappa,
    gini,
    hcs,
    hit_at_k,
    icc,
    jaccard,
    ndcg_at_k,
    pearson,
    run,
)

__all__ = [
    "DegenerateInputError",
    "UndefinedMetricError",
    "anchor_text",
    "constructs",
    "cosine",
    "coverage_at_k",
    "dimension_score",
    "faithfulness",
    "fleiss_kappa",
    "gini",
    "hcs",
    "hit_at_k",
    "icc",
    "jaccard",
    "ndcg_at_k",
    "pearson",
    "run",
]
