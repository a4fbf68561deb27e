import time

import pytest
from fastapi.testclient import TestClient

from prewet.runio import sha256_file
from prewet.service import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "ws")
    with TestClient(app) as c:
        yield c


def _wait(client, job_id, timeout=120.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        info = client.get(f"/runs/{job_id}").json()
        if info["state"] in ("done", "error"):
            return info
        time.sleep(0.05)
    raise TimeoutError


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_eval_airy(client):
    body = client.post("/eval/airy", json={"x": 0.0}).json()
    assert body["value"] == pytest.approx(0.3550280539, abs=1e-9)
    assert body["deriv"] == pytest.approx(-0.2588194038, abs=1e-9)
    assert body["method"] == "series"
    assert client.post("/eval/airy", json={"x": 1e6}).status_code == 422


def test_eval_density(client):
    body = client.post("/eval/fs-density",
                       json={"lam": 0.5, "chi": 1.0, "m_star": 1.0,
                             "r": [0.0, 1.0, 2.0]}).json()
    assert body["c"] == pytest.approx(1.0)
    assert body["density"][0] == pytest.approx(0.0, abs=1e-12)
    assert body["density"][1] > 0
    assert client.post("/eval/fs-density",
                       json={"lam": -1, "chi": 1, "r": [1.0]}).status_code == 422


def test_run_job_roundtrip(client, tmp_path):
    req = {"command": "walk", "seed": 4, "replicas": 1,
           "options": {"lambda": 0.5, "n": 16, "samples": 3}}
    body = client.post("/runs/walk", json=req).json()
    info = _wait(client, body["job_id"])
    assert info["state"] == "done"
    names = client.get(f"/runs/{body['job_id']}/files").json()["files"]
    assert {"walks.csv", "walk_stats.csv", "step_law.csv",
            "manifest.json", "config.ini"} <= set(names)
    text = client.get(f"/runs/{body['job_id']}/files/walks.csv").text
    assert text.startswith("replica,sample,k,T,Z\n")
    # service output matches a direct in-process run byte for byte
    from prewet.runio import RunConfig
    from prewet.runner import run_command

    cfg = RunConfig(command="walk", seed=4, replicas=1,
                    out=str(tmp_path / "direct"),
                    options={"lambda": 0.5, "n": 16, "samples": 3})
    run_command(cfg)
    direct = (tmp_path / "direct" / "walks.csv").read_bytes().decode()
    assert text == direct


def test_run_job_error_state(client):
    req = {"command": "ising", "seed": 0, "replicas": 1,
           "options": {"beta": 1.0, "lambda": 1.0, "n": 8}}  # samples missing
    body = client.post("/runs/ising", json=req).json()
    info = _wait(client, body["job_id"])
    assert info["state"] == "error"
    assert "samples" in info["error"]


def test_unknown_job_and_file(client):
    assert client.get("/runs/deadbeef").status_code == 404
    req = {"command": "walk", "seed": 1, "replicas": 1,
           "options": {"lambda": 1.0, "n": 8, "samples": 1}}
    body = client.post("/runs/walk", json=req).json()
    _wait(client, body["job_id"])
    assert client.get(f"/runs/{body['job_id']}/files/nope.csv").status_code == 404
    assert client.post("/runs/ising", json=req).status_code == 422


def test_cli_thin_client_against_service(tmp_path):
    # the CLI --server path downloads the same bytes the engine writes
    import threading

    import uvicorn

    from prewet.cli import main

    app = create_app(tmp_path / "ws")
    config = uvicorn.Config(app, host="127.0.0.1", port=8731, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    for _ in range(100):
        if server.started:
            break
        time.sleep(0.05)
    try:
        out = tmp_path / "dl"
        rc = main(["simulate-walk", "--lambda", "0.5", "--n", "12", "--samples", "2",
                   "--seed", "6", "--out", str(out), "--server",
                   "http://127.0.0.1:8731"])
        assert rc == 0
        assert (out / "walks.csv").exists()
        direct = tmp_path / "direct"
        assert main(["simulate-walk", "--lambda", "0.5", "--n", "12", "--samples",
                     "2", "--seed", "6", "--out", str(direct)]) == 0
        assert (out / "walks.csv").read_bytes() == (direct / "walks.csv").read_bytes()
    finally:
        server.should_exit = True
        thread.join(timeout=5)
