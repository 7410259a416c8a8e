import threading
import time

import pytest
from fastapi.testclient import TestClient

from medclarify.datafiles import data_path
from medclarify.faq import build_index, load_faq_entries
from medclarify.service import ServiceConfig, create_app


@pytest.fixture(scope="module")
def faq_index():
    return build_index(load_faq_entries(data_path("faq.jsonl").read_bytes()))


@pytest.fixture()
def client(fixture_model, fixture_kb, faq_index):
    app = create_app(
        ServiceConfig(), model=fixture_model, kb=fixture_kb, faq_index=faq_index
    )
    return TestClient(app)


@pytest.fixture()
def bare_client():
    return TestClient(create_app(ServiceConfig()))


def start_session(client):
    response = client.post("/api/sessions")
    assert response.status_code == 201
    return response.json()["session_id"]


class TestSessions:
    def test_create(self, client):
        response = client.post("/api/sessions")
        assert response.status_code == 201
        assert response.json()["session_id"]

    def test_distinct_ids(self, client):
        assert start_session(client) != start_session(client)

    def test_create_without_model_503(self, bare_client):
        response = bare_client.post("/api/sessions")
        assert response.status_code == 503
        body = response.json()
        assert set(body) == {"error", "detail"}

    def test_message_fixture_flow(self, client):
        sid = start_session(client)
        response = client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        assert response.status_code == 200
        assert response.json() == {
            "kind": "ask",
            "symptom": "cough",
            "question": "Do you also have cough?",
        }

    def test_message_unknown_session_404(self, client):
        response = client.post("/api/sessions/nope/message", json={"text": "hi"})
        assert response.status_code == 404
        assert response.json()["error"] == "unknown_session"

    def test_double_message_409(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        response = client.post(f"/api/sessions/{sid}/message", json={"text": "again"})
        assert response.status_code == 409
        assert response.json()["error"] == "wrong_status"

    def test_answer_no_then_next_ask(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        response = client.post(f"/api/sessions/{sid}/answer", json={"answer": "no"})
        assert response.status_code == 200
        assert response.json()["symptom"] == "rash"

    def test_answer_variants_accepted(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        response = client.post(f"/api/sessions/{sid}/answer", json={"answer": " Y "})
        assert response.status_code == 200
        assert response.json()["kind"] == "diagnose"

    def test_unrecognized_answer_422(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        response = client.post(f"/api/sessions/{sid}/answer", json={"answer": "maybe"})
        assert response.status_code == 422
        body = response.json()
        assert body["error"] == "unrecognized_answer"
        assert "yes or no" in body["detail"]

    def test_answer_after_conclusion_409(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
        response = client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
        assert response.status_code == 409

    def test_full_session_ranking_sums_to_one(self, client):
        sid = start_session(client)
        client.post(f"/api/sessions/{sid}/message", json={"text": "I have a fever"})
        client.post(f"/api/sessions/{sid}/answer", json={"answer": "no"})
        response = client.post(f"/api/sessions/{sid}/answer", json={"answer": "yes"})
        body = response.json()
        assert body["kind"] == "diagnose"
        assert abs(sum(r["probability"] for r in body["ranking"]) - 1.0) < 1e-9

    def test_restart_forgets_sessions(self, fixture_model, fixture_kb):
        first = TestClient(create_app(ServiceConfig(), model=fixture_model, kb=fixture_kb))
        sid = start_session(first)
        second = TestClient(create_app(ServiceConfig(), model=fixture_model, kb=fixture_kb))
        response = second.post(f"/api/sessions/{sid}/message", json={"text": "hi"})
        assert response.status_code == 404

    def test_idle_eviction(self, fixture_model, fixture_kb):
        app = create_app(
            ServiceConfig(session_ttl_seconds=0.05), model=fixture_model, kb=fixture_kb
        )
        client = TestClient(app)
        sid = start_session(client)
        time.sleep(0.1)
        response = client.post(f"/api/sessions/{sid}/message", json={"text": "hi"})
        assert response.status_code == 404

    def test_validation_error_shape(self, client):
        sid = start_session(client)
        response = client.post(f"/api/sessions/{sid}/message", json={})
        assert response.status_code == 422
        assert set(response.json()) == {"error", "detail"}

    def test_concurrent_messages_serialize_per_session(self, client):
        sid = start_session(client)
        barrier = threading.Barrier(2)
        codes = []

        def fire():
            barrier.wait()
            response = client.post(
                f"/api/sessions/{sid}/message", json={"text": "I have a fever"}
            )
            codes.append(response.status_code)

        workers = [threading.Thread(target=fire) for _ in range(2)]
        for w in workers:
            w.start()
        for w in workers:
            w.join()
        # exactly one transition wins; the loser observes the wrong status
        assert sorted(codes) == [200, 409]


class TestFaqEndpoint:
    def test_clarify_payload(self, client):
        response = client.post("/api/faq", json={"question": "Should I still get a TSH test?"})
        assert response.status_code == 200
        body = response.json()
        assert body["kind"] == "clarify"
        assert "pregnant" in body["clarification"]
        assert body["matched_entry"] == "faq-001"

    def test_no_match(self, client):
        response = client.post("/api/faq", json={"question": "zorp glibble frangle"})
        assert response.json()["kind"] == "no_match"

    def test_not_configured_503(self, fixture_model, fixture_kb):
        client = TestClient(
            create_app(ServiceConfig(), model=fixture_model, kb=fixture_kb)
        )
        response = client.post("/api/faq", json={"question": "anything"})
        assert response.status_code == 503


class TestHealthz:
    def test_fully_loaded(self, client):
        body = client.get("/healthz").json()
        assert body == {"status": "ok", "model_loaded": True, "faq_loaded": True}

    def test_nothing_loaded(self, bare_client):
        response = bare_client.get("/healthz")
        assert response.status_code == 200
        body = response.json()
        assert body["model_loaded"] is False
        assert body["faq_loaded"] is False


class TestConfig:
    def test_bad_tau(self):
        with pytest.raises(ValueError, match="tau"):
            ServiceConfig(tau=1.5)

    def test_bad_max_turns(self):
        with pytest.raises(ValueError, match="max-turns"):
            ServiceConfig(max_turns=0)

    def test_bad_theta(self):
        with pytest.raises(ValueError, match="theta"):
            ServiceConfig(theta=-0.1)
