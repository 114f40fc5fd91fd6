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

"""Regenerates tests/data/mini, a small but complete evaluation bundle."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent / "mini"

MOVIES = [
    ("m1", "Arrival", "sci-fi", "Denis Villeneuve", "2016"),
    ("m2", "Dune", "sci-fi", "Denis Villeneuve", "2021"),
    ("m3", "Heat", "crime", "Michael Mann", "1995"),
    ("m4", "Collateral", "crime", "Michael Mann", "2004"),
    ("m5", "Amelie", "comedy", "Jean-Pierre Jeunet", "2001"),
    ("m6", "Paddington", "comedy", "Paul King", "2014"),
    ("m7", "Alien", "horror", "Ridley Scott", "1979"),
    ("m8", "Gravity", "sci-fi", "Alfonso Cuaron", "2013"),
]

SCENARIOS = [
    ("s1", "cold_start", [("genre", "sci-fi")], True),
    ("s2", "preference_refinement", [("director", "Michael Mann")], False),
    ("s3", "contextual", [], True),
    ("s4", "exploratory", [("genre", "comedy")], False),
    ("s5", "comparison", [], False),
]

# Recommended items per (scenario, system), rank order.
RECS = {
    ("s1", "alpha"): ["m1", "m2", "m8"],
    ("s1", "beta"): ["m1", "m3", "m5"],
    ("s2", "alpha"): ["m3", "m4", "m7"],
    ("s2", "beta"): ["m1", "m3", "m6"],
    ("s3", "alpha"): ["m5", "m6", "m2"],
    ("s3", "beta"): ["m1", "m2", "m3"],
    ("s4", "alpha"): ["m5", "m6", "m3"],
    ("s4", "beta"): ["m1", "m7", "m5"],
    ("s5", "alpha"): ["m7", "m8", "m4"],
    ("s5", "beta"): ["m1", "m2", "m4"],
}

RELEVANT = {
    "s1": ["m1", "m2", "m8"],
    "s2": ["m3", "m4"],
    "s3": ["m5"],
    "s4": ["m5", "m6"],
    "s5": ["m4"],
}

# alpha explains faithfully; beta sometimes gets the genre wrong.
WRONG_GENRE = {("s1", "beta", "m3"): "sci-fi", ("s2", "beta", "m1"): "crime",
               ("s4", "beta", "m7"): "comedy"}

CONSTRUCTS = ["EIS", "IIR", "ICQ", "GCS", "INF", "PER", "FAI", "ACT",
              "COH", "FLU", "VER", "ADA", "UNC", "CON", "ATR", "LIM",
              "DEM", "POP", "PRO", "DIV"]


def movie(mid):
    return next(m for m in MOVIES if m[0] == mid)


def explanation(scenario, system, mid):
    _, title, genre, director, _ = movie(mid)
    genre = WRONG_GENRE.get((scenario, system, mid), genre)
    return f"{title} is a {genre} film directed by {director}."


def vec(*xs):
    return list(xs)


def main():
    OUT.mkdir(exist_ok=True)
    with open(OUT / "catalog.jsonl", "w") as f:
        for i, (mid, title, genre, director, year) in enumerate(MOVIES):
            f.write(json.dumps({
                "item_id": mid, "domain": "movies", "title": title,
                "attributes": {"genre": [genre], "director": [director],
                               "year": [year]},
                "popularity_rank": i + 1}) + "\n")

    scenarios = []
    for sid, cat, tags, calib in SCENARIOS:
        scenarios.append({
            "scenario_id": sid, "domain": "movies", "category": cat,
            "user_profile": f"viewer profile for {sid}",
            "interaction_history": ["m3"] if sid != "s1" else [],
            "requirement_tags": [{"attribute": a, "value": v} for a, v in tags],
            "rubric": "rate how well the recommendations fit the request",
            "calibration_flag": calib})
    (OUT / "scenarios.json").write_text(json.dumps(scenarios, indent=2) + "\n")

    transcripts, embeddings = [], []
    for (sid, system), items in RECS.items():
        key = f"{sid}.{system}"
        turns = [
            {"role": "user", "text": "I want something to watch tonight.",
             "embedding_ref": f"{key}.t0"},
            {"role": "system", "text": "Happy to help. Any mood you are after?",
             "embedding_ref": f"{key}.t1"},
            {"role": "user", "text": "Something thoughtful.",
             "embedding_ref": f"{key}.t2"},
            {"role": "system",
             "text": "Here are a few picks that match a thoughtful mood.",
             "embedding_ref": f"{key}.t3"},
        ]
        base = 1.0 if system == "alpha" else 0.5
        for t in range(4):
            embeddings.append({"key": f"{key}.t{t}",
                               "vector": vec(base, 0.1 * (t + 1), 0.2 if t % 2 else 0.3)})
        recs = [{"item_id": m, "rank": r + 1, "explanation": explanation(sid, system, m)}
                for r, m in enumerate(items)]
        transcripts.append({"scenario_id": sid, "system_id": system,
                            "turns": turns, "recommendations": recs})
    (OUT / "transcripts.json").write_text(json.dumps(transcripts, indent=2) + "\n")

    paraphrases = []
    for system, spread in (("alpha", 0.05), ("beta", 0.6)):
        embeddings.append({"key": f"q1.{system}.orig", "vector": vec(1.0, 0.0, 0.0)})
        embeddings.append({"key": f"q1.{system}.p1", "vector": vec(1.0, spread, 0.0)})
        embeddings.append({"key": f"q1.{system}.p2", "vector": vec(1.0, 0.0, spread)})
        paraphrases.append({"query_id": f"q1.{system}", "original": f"q1.{system}.orig",
                            "paraphrases": [f"q1.{system}.p1", f"q1.{system}.p2"],
                            "system_id": system})
    with open(OUT / "embeddings.jsonl", "w") as f:
        for e in embeddings:
            f.write(json.dumps(e) + "\n")
    with open(OUT / "paraphrases.jsonl", "w") as f:
        for p in paraphrases:
            f.write(json.dumps(p) + "\n")

    with open(OUT / "judgments.jsonl", "w") as f:
        for sid, rel in RELEVANT.items():
            f.write(json.dumps({"scenario_id": sid, "relevant": rel}) + "\n")

    # Calibration scenarios (s1, s3) are rated by every evaluator; the rest
    # by e1 only. Values follow a fixed pattern so reports are reproducible.
    ratings = []
    ts = 1767225600000
    for sid, _, _, calib in SCENARIOS:
        raters = ["e1", "e2", "e3"] if calib else ["e1"]
        for system in ("alpha", "beta"):
            for ei, ev in enumerate(raters):
                for ci, code in enumerate(CONSTRUCTS):
                    hi = 4 if system == "alpha" else 3
                    value = hi + ((ci + ei + int(sid[1:])) % 3 == 0) - ((ci * 7 + ei) % 5 == 0)
                    value = max(1, min(5, value))
                    ratings.append({"evaluator_id": ev, "scenario_id": sid,
                                    "system_id": system, "construct_id": code,
                                    "value": value, "timestamp": ts,
                                    "session_id": f"s-{ev}-1"})
                    ts += 1000
    with open(OUT / "ratings.jsonl", "w") as f:
        for r in ratings:
            f.write(json.dumps(r) + "\n")

    rules = {"rules": [
        {"attribute": "genre", "patterns": ["is a {value} film"]},
        {"attribute": "director", "patterns": ["directed by {value}"]},
    ]}
    (OUT / "rules.json").write_text(json.dumps(rules, indent=2) + "\n")

    evaluators = [{"id": "e1", "panel": "movies"},
                  {"id": "e2", "panel": "movies", "token": "tok-e2"},
                  {"id": "e3", "panel": "movies"}]
    (OUT / "evaluators.json").write_text(json.dumps(evaluators, indent=2) + "\n")
    (OUT / "applicability.json").write_text(json.dumps(
        {"excluded": {}, "icq_requires_clarification": True}, indent=2) + "\n")

    config = {
        "catalog": "catalog.jsonl", "scenarios": "scenarios.json",
        "transcripts": "transcripts.json", "ratings": "ratings.jsonl",
        "embeddings": "embeddings.jsonl", "judgments": "judgments.jsonl",
        "paraphrases": "paraphrases.jsonl", "applicability": "applicability.json",
        "rules": "rules.json", "evaluators": "evaluators.json",
        "k": 3, "coverage_k": 3, "seed": 7, "format": "json",
        "quota": 5, "quota_min": 1, "quota_max": 5,
        "out_dir": "out",
    }
    (OUT / "run.json").write_text(json.dumps(config, indent=2) + "\n")

    # Same bundle with one recommendation pointing at an unknown item.
    dangling = OUT.parent / "dangling"
    dangling.mkdir(exist_ok=True)
    transcripts[0]["recommendations"][0]["item_id"] = "x9"
    (dangling / "transcripts.json").write_text(json.dumps(transcripts, indent=2) + "\n")
    broken = {key: ("transcripts.json" if key == "transcripts" else "../mini/" + value)
              for key, value in config.items()
              if key in ("catalog", "scenarios", "transcripts", "embeddings")}
    broken["out_dir"] = "out"
    (dangling / "run.json").write_text(json.dumps(broken, indent=2) + "\n")


if __name__ == "__main__":
    main()
