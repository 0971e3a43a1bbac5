from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from sandhitutor.curriculum import MODULE_ORDER
from sandhitutor.service import ServiceConfig, create_app


@pytest.fixture()
def client(tmp_path, rb):
    config = ServiceConfig(progress_path=str(tmp_path / "progress.json"))
    app = create_app(config, rb=rb)
    with TestClient(app) as c:
        c.app = app
        yield c


def test_modules_index(client):
    res = client.get("/api/modules")
    assert res.status_code == 200
    mods = res.json()["modules"]
    assert [m["id"] for m in mods] == MODULE_ORDER
    assert len(mods) == 16


def test_module_detail_both_scripts(client):
    res = client.get("/api/modules/M3")
    assert res.status_code == 200
    body = res.json()
    rules = [i for i in body["lesson_items"] if "ref" in i]
    assert rules and all(i["text_deva"] for i in rules)
    assert any(i["ref"] == "6.1.87" for i in rules)
    assert client.get("/api/modules/M99").status_code == 404


def test_rule_endpoint(client):
    res = client.get("/api/rules/42")
    assert res.status_code == 200
    body = res.json()
    assert body["ref"] == "8.2.39" and body["module"] == "M5"
    assert body["text"]["deva"]
    assert client.get("/api/rules/8.4.45").json()["lambda"] == 86
    assert client.get("/api/rules/999").status_code == 404


def test_join_endpoint(client):
    res = client.post("/api/join", json={"left": "ramā", "right": "iva"})
    assert res.status_code == 200
    results = res.json()["results"]
    assert [r["final"]["iast"] for r in results] == ["rameva"]
    assert results[0]["final"]["deva"] == "रमेव"
    assert results[0]["trace"][0]["ref"] == "6.1.87"


def test_join_flagship_over_http(client):
    res = client.post("/api/join", json={
        "left": "mṛt", "right": "mayam", "suppress": ["doubling"]})
    body = res.json()["results"]
    finals = {r["final"]["iast"] for r in body}
    assert finals == {"mṛd mayam", "mṛn mayam"}
    nasal = next(r for r in body if r["final"]["iast"] == "mṛn mayam")
    assert [(s["lambda"], s["ref"]) for s in nasal["trace"]] == \
        [(42, "8.2.39"), (86, "8.4.45")]


def test_join_validation(client):
    res = client.post("/api/join", json={"left": "ramXa", "right": "iva"})
    assert res.status_code == 400
    res = client.post("/api/join", json={"left": "ramā", "right": "iva",
                                         "hints": ["nonsense"]})
    assert res.status_code == 400


def test_quiz_gate_and_flow(client):
    # fresh user: a later module is locked
    res = client.post("/api/quiz/M4/start", json={"user": "u1"})
    assert res.status_code == 409

    res = client.post("/api/quiz/P1/start", json={"user": "u1", "seed": 3})
    assert res.status_code == 200
    body = res.json()
    sid = body["session"]
    assert body["questions"]
    # answers are withheld from the question payload
    assert all("answer_key" not in q for q in body["questions"])

    store = client.app.state.progress
    last = {}
    for q in body["questions"]:
        res = client.post(f"/api/quiz/{sid}/answer",
                          json={"index": q["index"], "answer": "i u"})
        assert res.status_code == 200
        last = res.json()
    assert "quiz_score" in last
    assert store.module_state("u1", "P1").attempts == 1

    # a finished session refuses more answers
    res = client.post(f"/api/quiz/{sid}/answer", json={"index": 0, "answer": "x"})
    assert res.status_code == 409


def test_gate_flips_after_passing(client):
    store = client.app.state.progress
    store.record_score("u2", "P1", 1.0)
    res = client.post("/api/quiz/P2/start", json={"user": "u2"})
    assert res.status_code == 200
    summary = client.get("/api/progress/u2").json()
    states = {m["module"]: m["state"] for m in summary["modules"]}
    assert states["P1"] == "completed" and states["P2"] == "available"
    assert states["P3"] == "locked"


def test_final_exam_gate(client):
    res = client.post("/api/quiz/FINAL/start", json={"user": "u3"})
    assert res.status_code == 409
    store = client.app.state.progress
    for mid in MODULE_ORDER:
        store.record_score("u3", mid, 1.0)
    res = client.post("/api/quiz/FINAL/start", json={"user": "u3", "seed": 2})
    assert res.status_code == 200
    assert len(res.json()["questions"]) >= 16


def test_progress_endpoint(client):
    res = client.get("/api/progress/nobody")
    assert res.status_code == 200
    body = res.json()
    assert len(body["modules"]) == 16
    assert body["finalExam"] is None


def test_startup_fails_closed_on_bad_rule_file(tmp_path):
    from sandhitutor.rules import RuleBaseError
    bad = tmp_path / "bad.txt"
    bad.write_text("lambda=1 | ref=1.1.1\n", encoding="utf-8")
    config = ServiceConfig(rule_file=str(bad),
                           progress_path=str(tmp_path / "p.json"))
    with pytest.raises(RuleBaseError):
        create_app(config)


def test_cli_and_http_joins_agree(client, rb):
    from sandhitutor.engine import join, make_options
    for left, right in [("ramā", "iva"), ("tat", "ca"), ("hariḥ", "śete")]:
        cli = [r.final for r in join(left, right, make_options(), rb)]
        http = [r["final"]["iast"] for r in
                client.post("/api/join", json={"left": left, "right": right}).json()["results"]]
        assert cli == http
