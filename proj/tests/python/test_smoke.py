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

import json
import math

import pytest

import helm_eval as h


def test_gini_and_coverage():
    assert h.gini([5, 5, 5, 5]) == 0.0
    assert h.gini([0, 0, 0, 10]) == pytest.approx(0.75)
    assert h.coverage_at_k([["a", "b"], ["b", "c"]], 2, 10) == pytest.approx(0.3)


def test_ranking():
    assert h.hit_at_k(["x", "y", "z"], {"z"}, 3) == 1.0
    assert h.hit_at_k(["x", "y", "z"], {"z"}, 2) == 0.0
    assert h.ndcg_at_k(["r", "x"], {"r"}, 2) == 1.0
    assert h.ndcg_at_k(["x", "r"], {"r"}, 2) == pytest.approx(1 / math.log2(3))
    with pytest.raises(h.UndefinedMetricError):
        h.ndcg_at_k(["x"], set(), 1)


def test_scores():
    assert h.hcs([4, 4, 4, 4, 4]) == 4.0
    assert f"{h.hcs([3.67, 3.72, 3.91, 3.45, 3.34]):.2f}" == "3.61"
    assert f"{h.dimension_score([4.21, 4.34, 4.02, 4.15]):.2f}" == "4.18"
    assert h.dimension_score([3.0, None, 5.0, None]) == 4.0
    assert h.dimension_score([None] * 4) is None
    with pytest.raises(ValueError):
        h.hcs([1, 2, 3])


def test_reliability():
    assert h.fleiss_kappa([[3, 0], [0, 3], [1, 2]], 3) == 22 / 40
    r = h.icc([[9, 2, 5, 8], [6, 1, 3, 2], [8, 4, 6, 8],
               [7, 1, 2, 6], [10, 5, 6, 9], [6, 2, 4, 7]])
    assert r["icc"] == pytest.approx(0.62, abs=0.005)
    assert r["ci"][0] <= r["icc_single"] <= r["ci"][1]
    with pytest.raises(h.DegenerateInputError):
        h.icc([[3, 3], [3, 3]])


def test_misc():
    assert h.pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert h.cosine([1.0, 2.0], [2.0, 4.0]) == pytest.approx(1.0)
    assert h.jaccard({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)
    assert h.faithfulness(["verifiable_correct", "verifiable_correct", "verifiable_incorrect",
                          "unverifiable"]) == pytest.approx(2 / 3)
    assert h.faithfulness(["verifiable_correct", "unverifiable"], "all_claims") == 0.5
    assert h.anchor_text(5) == "5 - Strongly Agree / Excellent"
    assert len(h.constructs()) == 20


def test_run_commands(mini):
    rc, out, err = h.run("validate", str(mini / "run.json"))
    assert rc == 0, err
    rc, out, err = h.run("metrics", str(mini / "run.json"))
    assert rc == 0, err
    report = json.loads(out)
    assert report["report"] == "metrics"
    assert (mini / "out" / "metrics.json").exists()
    rc, _, _ = h.run("validate", str(mini / "missing.json"))
    assert rc == 1
