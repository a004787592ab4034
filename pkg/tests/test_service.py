"""Session service contract tests with mock providers."""

import json
import threading
import time

import pytest
from fastapi.testclient import TestClient

from respkit.config import Config
from respkit.mocks import MockModelChat
from respkit.service import create_app


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(Config(), data_dir=tmp_path / "data"))


def create_session(client, review="Is the threshold tuned? The baselines are weak."):
    resp = client.post("/v1/sessions", json={"review_segment": review, "venue_mode": "conference"})
    assert resp.status_code == 201
    return resp.json()["session_id"]


def add_inputs(client, sid):
    resp = client.put(
        f"/v1/sessions/{sid}/inputs",
        json={
            "author_edits": [
                {"edit": "We added a pilot-set tuning study.", "paragraph": None, "section_title": None}
            ],
            "v1_paragraphs": ["Method\nThe threshold controls matching."],
        },
    )
    assert resp.status_code == 200


def test_create_generate_fetch_one_draft(client):
    sid = create_session(client)
    add_inputs(client, sid)
    resp = client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"})
    assert resp.status_code == 200
    fetched = client.get(f"/v1/sessions/{sid}").json()
    assert len(fetched["drafts"]) == 1
    assert fetched["drafts"][0]["result"]["setting"] == "S2"
    assert fetched["status"] == "idle"


def test_unknown_session_404(client):
    assert client.get("/v1/sessions/nope").status_code == 404


def test_refine_before_any_draft_409(client):
    sid = create_session(client)
    assert client.post(f"/v1/sessions/{sid}/refine", json={}).status_code == 409


def test_refine_requires_evaluated_draft(client):
    sid = create_session(client)
    add_inputs(client, sid)
    client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"})
    assert client.post(f"/v1/sessions/{sid}/refine", json={}).status_code == 409


def test_full_author_loop(client):
    sid = create_session(client)
    add_inputs(client, sid)

    items = client.post(f"/v1/sessions/{sid}/annotate").json()["review_items"]
    assert items

    plan = {item["id"]: ["answer question"] for item in items}
    resp = client.put(f"/v1/sessions/{sid}/plan", json={"plan": plan, "length_limit": 120})
    assert resp.status_code == 200

    assert client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S6"}).status_code == 200
    evaluated = client.post(f"/v1/sessions/{sid}/evaluate", json={})
    assert evaluated.status_code == 200
    report = evaluated.json()["report"]
    assert set(report["quality"]) == {"targeting", "specificity", "convincingness"}

    refined = client.post(f"/v1/sessions/{sid}/refine", json={})
    assert refined.status_code == 200
    assert refined.json()["result"]["setting"] == "S8"

    fetched = client.get(f"/v1/sessions/{sid}").json()
    assert len(fetched["drafts"]) == 2


def test_generate_validation_error_names_field(client):
    sid = create_session(client)
    # S2 requires author edits, none set yet
    resp = client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"})
    assert resp.status_code == 400
    assert resp.json()["detail"]["field"] == "author_edits"


def test_plan_rejects_unknown_label(client):
    sid = create_session(client)
    resp = client.put(
        f"/v1/sessions/{sid}/plan", json={"plan": {"1": ["make excuses"]}, "length_limit": None}
    )
    assert resp.status_code >= 400


def test_taxonomy_endpoint(client):
    payload = client.get("/v1/taxonomy").json()
    assert payload["item_types"] == ["Criticism", "Question", "Request"]
    assert sum(len(v) for v in payload["actions_by_stance"].values()) == 16
    assert payload["ui_settings"] == ["S2", "S3", "S6", "S7"]


def test_persistence_across_restart(tmp_path):
    config = Config()
    data_dir = tmp_path / "data"
    client1 = TestClient(create_app(config, data_dir=data_dir))
    sid = create_session(client1)
    add_inputs(client1, sid)
    client1.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"})
    client1.post(f"/v1/sessions/{sid}/evaluate", json={})
    before = client1.get(f"/v1/sessions/{sid}").json()

    client2 = TestClient(create_app(config, data_dir=data_dir))
    after = client2.get(f"/v1/sessions/{sid}").json()
    assert after == before


def test_provider_call_audited_with_reference(tmp_path):
    data_dir = tmp_path / "data"
    client = TestClient(create_app(Config(), data_dir=data_dir))
    sid = create_session(client)
    add_inputs(client, sid)
    result = client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"}).json()["result"]
    audit_ids = {
        json.loads(line)["audit_id"]
        for line in (data_dir / "audit.jsonl").read_text().splitlines()
    }
    assert result["audit_id"] in audit_ids


def test_concurrent_generate_second_rejected(tmp_path):
    class SlowChat:
        def complete(self, system, user):
            time.sleep(0.6)
            return "slow draft"

    config = Config()
    config.make_generation = lambda audit=None: SlowChat()
    config.make_judge = lambda audit=None: MockModelChat()
    client = TestClient(create_app(config, data_dir=tmp_path / "data"))
    sid = create_session(client)
    add_inputs(client, sid)

    codes = []

    def call():
        codes.append(client.post(f"/v1/sessions/{sid}/generate", json={"setting": "S2"}).status_code)

    first = threading.Thread(target=call)
    first.start()
    time.sleep(0.2)
    second = threading.Thread(target=call)
    second.start()
    first.join()
    second.join()
    assert sorted(codes) == [200, 409]
