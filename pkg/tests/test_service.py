from __future__ import annotations

import json
import threading
import urllib.request

import pytest

from cranno import fixtures
from cranno.recipe import replay, serialize_log
from cranno.service import AnnotationService, make_http_server


@pytest.fixture
def service(tmp_path, fragment):
    return AnnotationService({"scare_frag": fragment}, tmp_path / "sessions")


def create_session(service, corpus="scare_frag", dialogue="s2",
                   annotator="a1", entries=None):
    body = {"corpus": corpus, "dialogue": dialogue, "annotator": annotator}
    if entries is not None:
        body["entries"] = entries
    status, payload, _ = service.handle_request(
        "POST", "/sessions", json.dumps(body)
    )
    return status, json.loads(payload)


def get_json(service, path):
    status, payload, _ = service.handle_request("GET", path)
    return status, json.loads(payload)


def post_answer(service, session_id, version, answer, gp_tag=None):
    body = {"version": version, "answer": answer}
    if gp_tag is not None:
        body["gp_tag"] = gp_tag
    status, payload, _ = service.handle_request(
        "POST", f"/sessions/{session_id}/answer", json.dumps(body)
    )
    return status, json.loads(payload)


class TestSessionLifecycle:
    def test_create_returns_handle(self, service):
        status, handle = create_session(service)
        assert status == 201
        assert handle["version"] == 0
        assert handle["session_id"]

    def test_unknown_corpus_404(self, service):
        status, body = create_session(service, corpus="nope")
        assert status == 404

    def test_unknown_dialogue_404(self, service):
        status, body = create_session(service, dialogue="zz")
        assert status == 404

    def test_unknown_session_404(self, service):
        status, body = get_json(service, "/sessions/deadbeef")
        assert status == 404

    def test_unknown_route_404(self, service):
        status, _, _ = service.handle_request("GET", "/nope")
        assert status == 404

    def test_session_view_shape(self, service):
        _, handle = create_session(service)
        status, view = get_json(service, f"/sessions/{handle['session_id']}")
        assert status == 200
        assert view["dialogue"] == "s2"
        assert view["cursor"] == 0
        assert len(view["turns"]) == 17
        assert view["turns"][0]["text"] == "we have to put it in cabinet nine"
        assert view["stack"] == {"entries": [], "closed": []}
        assert view["annotations"] == []

    def test_prompt_view(self, service):
        _, handle = create_session(service)
        status, prompt = get_json(
            service, f"/sessions/{handle['session_id']}/prompt"
        )
        assert status == 200
        assert prompt["point"] == "PUSH"
        assert prompt["turn"] == 0
        assert prompt["answers"] == ["yes", "no"]


class TestAnswers:
    def test_accepted_answer_bumps_version(self, service):
        _, handle = create_session(service)
        status, result = post_answer(service, handle["session_id"], 0, "yes")
        assert status == 200
        assert result["version"] == 1
        assert result["finished"] is False

    def test_stale_version_409_and_unchanged(self, service):
        _, handle = create_session(service)
        post_answer(service, handle["session_id"], 0, "yes")
        status, result = post_answer(service, handle["session_id"], 0, "yes")
        assert status == 409
        assert result["version"] == 1
        _, view = get_json(service, f"/sessions/{handle['session_id']}")
        assert view["version"] == 1

    def test_illegal_answer_422_and_unchanged(self, service):
        _, handle = create_session(service)
        status, result = post_answer(service, handle["session_id"], 0, "maybe")
        assert status == 422
        _, view = get_json(service, f"/sessions/{handle['session_id']}")
        assert view["version"] == 0

    def test_bad_body_400(self, service):
        _, handle = create_session(service)
        status, _, _ = service.handle_request(
            "POST", f"/sessions/{handle['session_id']}/answer", "not json"
        )
        assert status == 400

    def test_race_on_one_version_admits_one_winner(self, service):
        _, handle = create_session(service)
        session_id = handle["session_id"]
        results = []

        def fire():
            results.append(post_answer(service, session_id, 0, "yes")[0])

        threads = [threading.Thread(target=fire) for _ in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert results.count(200) == 1
        assert results.count(409) == 15


class TestGoldenOverHttpApi:
    def drive_golden(self, service):
        _, handle = create_session(service, annotator="golden")
        session_id = handle["session_id"]
        version = 0
        for entry in fixtures.golden_log().entries:
            status, result = post_answer(service, session_id, version, entry.answer)
            assert status == 200
            version = result["version"]
        return session_id, version

    def test_export_equals_cli_golden_file(self, service):
        session_id, version = self.drive_golden(service)
        status, body, content_type = service.handle_request(
            "GET", f"/sessions/{session_id}/export"
        )
        assert status == 200
        assert content_type == "application/x-ndjson"
        assert body == serialize_log(fixtures.golden_log())

    def test_view_matches_replay(self, service, fragment):
        session_id, _ = self.drive_golden(service)
        _, view = get_json(service, f"/sessions/{session_id}")
        session = replay(fragment, fixtures.golden_log())
        assert view["finished"] is True
        assert view["cursor"] == 17
        assert len(view["annotations"]) == len(session.annotations)
        assert view["stack"]["entries"] == []
        closed_sources = [p["source"] for p in view["stack"]["closed"]]
        assert closed_sources == [2, 3, 11, 0]

    def test_prompt_after_finish(self, service):
        session_id, _ = self.drive_golden(service)
        status, prompt = get_json(service, f"/sessions/{session_id}/prompt")
        assert status == 200
        assert prompt["finished"] is True

    def test_stack_view_midway(self, service):
        # Stop right after the evidence event at turn 10 closes the route
        # proposal: exactly one proposal must remain open.
        _, handle = create_session(service, annotator="mid")
        session_id = handle["session_id"]
        version = 0
        entries = fixtures.golden_log().entries
        for entry in entries[:45]:
            status, result = post_answer(service, session_id, version, entry.answer)
            assert status == 200
            version = result["version"]
        _, view = get_json(service, f"/sessions/{session_id}")
        assert view["cursor"] == 11
        assert [p["source"] for p in view["stack"]["entries"]] == [0]
        assert [p["source"] for p in view["stack"]["closed"]] == [2, 3]


class TestPersistence:
    def test_sessions_survive_restart(self, tmp_path, fragment):
        directory = tmp_path / "sessions"
        service = AnnotationService({"scare_frag": fragment}, directory)
        _, handle = create_session(service)
        session_id = handle["session_id"]
        post_answer(service, session_id, 0, "yes")
        post_answer(service, session_id, 1, "yes")

        reloaded = AnnotationService({"scare_frag": fragment}, directory)
        status, view = get_json(reloaded, f"/sessions/{session_id}")
        assert status == 200
        assert view["version"] == 2
        assert view["cursor"] == 1

    def test_replay_on_create(self, service):
        entries = [
            {"turn": e.turn, "point": e.point.value, "answer": e.answer}
            for e in fixtures.golden_log().entries[:5]
        ]
        status, handle = create_session(service, annotator="undo",
                                        entries=entries)
        assert status == 201
        assert handle["version"] == 5

    def test_replay_on_create_rejects_illegal(self, service):
        entries = [{"turn": 0, "point": "PUSH", "answer": "maybe"}]
        status, body = create_session(service, entries=entries)
        assert status == 422


class TestReports:
    def test_dialogue_index(self, service):
        status, body, content_type = service.handle_request("GET", "/dialogues")
        assert status == 200
        assert content_type == "application/x-ndjson"
        records = [json.loads(line) for line in body.strip().splitlines()]
        assert records == [{"corpus": "scare_frag", "dialogue": "s2", "turns": 17}]

    def test_stats_report(self, service):
        golden = TestGoldenOverHttpApi()
        golden.drive_golden(service)
        status, body, _ = service.handle_request(
            "GET", "/reports/stats?dialogue=s2"
        )
        assert status == 200
        records = [json.loads(line) for line in body.strip().splitlines()]
        assert len(records) == 1
        assert records[0]["crs"] == 6
        assert records[0]["annotator"] == "golden"

    def test_stats_report_filters(self, service):
        status, body, _ = service.handle_request(
            "GET", "/reports/stats?dialogue=zz"
        )
        assert status == 200
        assert body == ""


class TestLiveHttpServer:
    def test_round_trip_over_real_socket(self, tmp_path, fragment):
        service = AnnotationService({"scare_frag": fragment}, tmp_path / "s")
        server = make_http_server(service, 0)
        port = server.server_address[1]
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            request = urllib.request.Request(
                f"http://127.0.0.1:{port}/sessions",
                data=json.dumps({
                    "corpus": "scare_frag", "dialogue": "s2", "annotator": "a1",
                }).encode("utf-8"),
                headers={"Content-Type": "application/json"},
                method="POST",
            )
            with urllib.request.urlopen(request) as response:
                assert response.status == 201
                handle = json.loads(response.read().decode("utf-8"))
            with urllib.request.urlopen(
                f"http://127.0.0.1:{port}/sessions/{handle['session_id']}/prompt"
            ) as response:
                prompt = json.loads(response.read().decode("utf-8"))
                assert prompt["point"] == "PUSH"
            with urllib.request.urlopen(
                f"http://127.0.0.1:{port}/dialogues"
            ) as response:
                assert response.headers.get_content_type() == "application/x-ndjson"
        finally:
            server.shutdown()
            server.server_close()
