import base64
import json
import time

import pytest
from fastapi.testclient import TestClient

from clihost.service import create_app


@pytest.fixture
def client(spec_path, tmp_path):
    app = create_app(spec_path("argv-echo.xml"), cwd=str(tmp_path))
    with TestClient(app) as c:
        yield c


def wait_for_terminal(client, run_id, timeout=15):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = client.get(f"/api/runs/{run_id}/status").json()
        if status["status"] != "running":
            return status
        time.sleep(0.02)
    raise TimeoutError("run did not finish")


def read_events(client, run_id):
    events = []
    with client.stream("GET", f"/api/runs/{run_id}/events") as response:
        for line in response.iter_lines():
            if line.startswith("data: "):
                events.append(json.loads(line[len("data: "):]))
    return events


def test_get_session_shape(client):
    body = client.get("/api/session").json()
    assert body["name"] == "argv-echo"
    assert body["title"] == "Argument Echo"
    states = {o["id"]: o["state"] for o in body["options"]}
    assert states["t"] == "required-unset"
    assert states["name"] == "optional-unset"
    assert body["active_run"] is None


def test_put_value_sets_option(client):
    r = client.put("/api/options/t/value", json={"raw": "4.0"})
    assert r.status_code == 200
    assert r.json()["state"] == "set"
    assert r.json()["value"] == "4"
    session = client.get("/api/session").json()
    assert {o["id"]: o["state"] for o in session["options"]}["t"] == "set"


def test_put_invalid_value(client):
    r = client.put("/api/options/t/value", json={"raw": "abc"})
    assert r.status_code == 422
    assert r.json()["error"] == "ValueError"
    assert client.get("/api/session").json()["options"][0]["state"] == "required-unset"


def test_put_unknown_option(client):
    r = client.put("/api/options/zz/value", json={"raw": "1"})
    assert r.status_code == 404
    assert r.json()["error"] == "UnknownOption"


def test_delete_clears(client):
    client.put("/api/options/t/value", json={"raw": "4.0"})
    r = client.delete("/api/options/t/value")
    assert r.json()["state"] == "required-unset"


def test_reset(client):
    client.put("/api/options/t/value", json={"raw": "4.0"})
    client.put("/api/options/name/value", json={"raw": "x"})
    body = client.post("/api/reset").json()
    assert all(o["state"] != "set" for o in body["options"])


def test_preview_with_missing(client):
    body = client.get("/api/preview").json()
    assert body["missing"] == ["t"]
    assert "MISSING REQUIRED: t" in body["text"]
    client.put("/api/options/t/value", json={"raw": "4.0"})
    body = client.get("/api/preview").json()
    assert body == {"text": "argv-echo -t 4", "missing": []}


def test_run_requires_required_options(client):
    r = client.post("/api/run")
    assert r.status_code == 409
    assert r.json()["error"] == "MissingRequired"
    assert r.json()["missing"] == ["t"]


def test_run_and_stream(client):
    client.put("/api/options/t/value", json={"raw": "4.0"})
    run_id = client.post("/api/run").json()["run_id"]
    status = wait_for_terminal(client, run_id)
    assert status == {"status": "exited", "code": 0, "error_notification": False}

    events = read_events(client, run_id)
    chunks = [e for e in events if e["type"] == "chunk" and e["stream"] == "stdout"]
    data = b"".join(base64.b64decode(e["b64"]) for e in chunks)
    assert data == b"-t\n4\n"
    # stream matches the raw transcript endpoint
    raw = client.get(f"/api/runs/{run_id}/output", params={"stream": "stdout"})
    assert raw.content == b"-t\n4\n"
    assert events[-1]["type"] == "status"
    assert events[-1]["status"] == "exited"
    seqs = [e["seq"] for e in chunks]
    assert seqs == list(range(len(seqs)))
    # session is usable again
    assert client.get("/api/session").json()["active_run"] is None


def test_stderr_run(spec_path, tmp_path):
    app = create_app(spec_path("stderr-emitter.xml"), cwd=str(tmp_path))
    with TestClient(app) as client:
        run_id = client.post("/api/run").json()["run_id"]
        status = wait_for_terminal(client, run_id)
        assert status["error_notification"] is True
        out = client.get(f"/api/runs/{run_id}/output", params={"stream": "stdout"})
        err = client.get(f"/api/runs/{run_id}/output", params={"stream": "stderr"})
        assert out.content == b""
        assert b"err line 0" in err.content


def test_kill_endpoint(spec_path, tmp_path):
    app = create_app(spec_path("sleeper.xml"), cwd=str(tmp_path))
    with TestClient(app) as client:
        run_id = client.post("/api/run").json()["run_id"]
        deadline = time.time() + 10
        while True:
            out = client.get(f"/api/runs/{run_id}/output",
                             params={"stream": "stdout"}).content
            if b"sleeping" in out:
                break
            assert time.time() < deadline
            time.sleep(0.02)
        r = client.post(f"/api/runs/{run_id}/kill")
        assert r.json() == {"status": "killed"}
        r = client.post(f"/api/runs/{run_id}/kill")
        assert r.status_code == 409


def test_mutation_during_run_rejected(spec_path, tmp_path):
    app = create_app(spec_path("sleeper.xml"), cwd=str(tmp_path))
    with TestClient(app) as client:
        run_id = client.post("/api/run").json()["run_id"]
        r = client.put("/api/options/marker/value", json={"raw": "x"})
        assert r.status_code == 409
        r2 = client.post("/api/run")
        assert r2.status_code == 409
        assert r2.json()["error"] == "RunAlreadyActive"
        client.post(f"/api/runs/{run_id}/kill")
        wait_for_terminal(client, run_id)


def test_export_round_trip(client, spec_path, tmp_path):
    client.put("/api/options/t/value", json={"raw": "4.0"})
    client.put("/api/options/mode/value", json={"raw": "slow"})
    exported = client.get("/api/spec/export").content

    from clihost.specxml import parse_spec, session_from_document

    session = session_from_document(parse_spec(exported), str(tmp_path))
    assert [v.value for v in session.states["t"].values] == [4.0]
    assert [v.value for v in session.states["mode"].values] == ["slow"]


def test_doc_endpoint(client):
    body = client.get("/api/doc/t").json()
    assert body == {"doc": "Threshold value between 0 and 100."}
    assert client.get("/api/doc/zz").status_code == 404


def test_get_does_not_mutate(client):
    before = client.get("/api/session").json()
    client.get("/api/preview")
    client.get("/api/doc/t")
    assert client.get("/api/session").json() == before


def test_startup_rejects_invalid_spec(tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("<guiliner version='1.0'><group name=''/></guiliner>")
    from clihost.errors import SchemaError

    with pytest.raises(SchemaError):
        create_app(str(bad))
