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
import os
import re
import signal
import subprocess
import urllib.error
import urllib.request

import pytest

CLI = os.environ.get("HELM_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="HELM_CLI not set")


def start(config):
    proc = subprocess.Popen([CLI, "serve", "--config", str(config), "--port", "0"],
                            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
    line = proc.stdout.readline()
    m = re.search(r"http://[^:]+:(\d+)", line)
    if not m:
        proc.kill()
        raise AssertionError("server did not start: " + line + proc.stderr.read())
    return proc, f"http://127.0.0.1:{m.group(1)}/api/v1"


def stop(proc):
    proc.send_signal(signal.SIGINT)
    assert proc.wait(timeout=30) == 0


def call(method, url, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=10) as res:
            return res.status, res.read().decode()
    except urllib.error.HTTPError as e:
        return e.code, e.read().decode()


def test_serve_persists_across_restart(mini):
    config = mini / "run.json"
    proc, base = start(config)
    try:
        status, body = call("GET", f"{base}/tasks/e1")
        assert status == 200
        task = json.loads(body)
        status, body = call("POST", f"{base}/sessions/e1", {})
        assert status == 200
        session = json.loads(body)["session_id"]
        rating = {"session_id": session, "evaluator_id": "e1",
                  "scenario_id": task["scenario"]["scenario_id"],
                  "system_id": task["transcript"]["system_id"],
                  "construct_id": "EIS", "value": 4}
        assert call("POST", f"{base}/ratings", rating)[0] == 200
        assert call("POST", f"{base}/ratings", dict(rating, value=7))[0] == 422
        assert call("POST", f"{base}/sessions/e1", {})[0] == 409
        status, exported = call("GET", f"{base}/export")
        assert status == 200
        assert len(exported.strip().splitlines()) == 1
    finally:
        stop(proc)

    assert (mini / "out" / "events.jsonl").exists()
    proc, base = start(config)
    try:
        status, again = call("GET", f"{base}/export")
        assert status == 200
        assert again == exported
        status, body = call("GET", f"{base}/progress/e1")
        assert json.loads(body)["session_state"] == "active"
    finally:
        stop(proc)
