"""HTTP facade: sessions, error mapping, replay equality, interaction log."""

import csv
import io

import pytest
from fastapi.testclient import TestClient

from annocamp.api import create_app
from annocamp.rdfio import parse_turtle
from tests.support import IOC

BIRD1 = "urn:annocamp:object:bird-01"


@pytest.fixture
def client(full_campaign):
    return TestClient(create_app(full_campaign))


def register(client, login="erika", credential="correct horse"):
    response = client.post(
        "/api/users/register",
        json={"login": login, "display_name": login.title(), "credential": credential, "language": "nl"},
    )
    assert response.status_code == 201, response.text
    return response.json()


def login(client, name="erika", credential="correct horse"):
    register(client, name, credential)
    response = client.post("/api/login", json={"login": name, "credential": credential})
    assert response.status_code == 200, response.text
    return {"Authorization": f"Bearer {response.json()['token']}"}


def post_annotation(client, headers, **overrides):
    payload = {
        "domain": "birds",
        "object": BIRD1,
        "field": "common-name",
        "body": {"kind": "concept", "concept": IOC + "bubo-bubo", "entered_text": "oeh"},
        "region": {"x": 100, "y": 120, "w": 300, "h": 200},
    }
    payload.update(overrides)
    return client.post("/api/annotations", json=payload, headers=headers)


class TestSessions:
    def test_register_login_and_use_token(self, client):
        created = register(client)
        assert created == {
            "user": "urn:annocamp:user:erika",
            "login": "erika",
            "display_name": "Erika",
            "language": "nl",
        }
        headers = {"Authorization": client.post(
            "/api/login", json={"login": "erika", "credential": "correct horse"}
        ).json()["token"]}
        # raw token without the Bearer scheme is refused
        assert client.get("/api/stats?domain=birds", headers=headers).status_code == 401
        response = client.post("/api/login", json={"login": "erika", "credential": "correct horse"})
        token = response.json()["token"]
        assert len(token) >= 43  # 32 url-safe bytes
        ok = client.get(
            "/api/stats?domain=birds", headers={"Authorization": f"Bearer {token}"}
        )
        assert ok.status_code == 200

    def test_duplicate_registration_conflicts(self, client):
        register(client)
        response = client.post(
            "/api/users/register",
            json={"login": "erika", "display_name": "E", "credential": "correct horse"},
        )
        assert response.status_code == 409
        assert response.json() == {
            "code": "conflict",
            "message": "login 'erika' is already registered",
        }

    def test_wrong_credential_is_401(self, client):
        register(client)
        response = client.post("/api/login", json={"login": "erika", "credential": "nope nope"})
        assert response.status_code == 401
        assert response.json()["code"] == "unauthenticated"

    def test_protected_routes_refuse_anonymous_calls(self, client):
        for method, route in [
            ("get", "/api/tasks/next?domain=birds"),
            ("get", f"/api/objects/{BIRD1}"),
            ("get", "/api/annotations"),
            ("get", "/api/autocomplete?domain=birds&field=common-name&q=x"),
            ("get", "/api/stats?domain=birds"),
            ("get", "/api/export/annotations?format=csv"),
            ("post", "/api/expertise"),
            ("post", "/api/reviews"),
            ("post", "/api/feedback"),
        ]:
            response = getattr(client, method)(route, **({"json": {}} if method == "post" else {}))
            assert response.status_code == 401, route
            assert response.json()["code"] == "unauthenticated"

    def test_public_routes_work_anonymously(self, client):
        assert client.get("/api/domains").status_code == 200
        assert client.get("/api/search?q=owls").status_code == 200

    def test_expired_session_is_evicted(self, full_campaign):
        stale = TestClient(create_app(full_campaign, session_ttl_seconds=-1))
        headers = login(stale)
        response = stale.get("/api/stats?domain=birds", headers=headers)
        assert response.status_code == 401
        assert "expired" in response.json()["message"]
        assert stale.app.state.sessions == {}


class TestDomains:
    def test_listing_shows_roots_only(self, client):
        domains = client.get("/api/domains").json()["domains"]
        assert [d["id"] for d in domains] == ["bible", "birds", "fashion"]
        fashion = next(d for d in domains if d["id"] == "fashion")
        assert "jewelry" in fashion["subdomains"]

    def test_detail_resolves_language_and_overrides(self, client):
        lace = client.get("/api/domains/lace?lang=nl").json()
        material = next(f for f in lace["fields"] if f["id"] == "material")
        assert material["subset"]["seed"] == "urn:annocamp:material:lace"
        assert lace["parent"] == "fashion"
        birds = client.get("/api/domains/birds?lang=nl").json()
        assert birds["assignment_mode"] == "recommendation"
        assert birds["expertise_topics"][0]["label"]
        tree = client.get("/api/domains/fashion").json()["tree"]
        assert {n["domain"] for n in tree} >= {"fashion", "lace", "jewelry"}

    def test_unknown_domain_404(self, client):
        response = client.get("/api/domains/couture")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestTasks:
    def test_task_payload_shape(self, client):
        headers = login(client)
        response = client.get("/api/tasks/next?domain=birds&n=3&lang=nl", headers=headers)
        assert response.status_code == 200
        body = response.json()
        assert body["domain"] == "birds" and body["mode"] == "recommendation"
        assert len(body["tasks"]) == 3
        task = body["tasks"][0]
        assert set(task) == {"object", "title", "image", "annotator_count", "score"}
        assert task["image"]["width"] > 0

    def test_reads_replay_identically(self, client):
        headers = login(client)
        url = "/api/tasks/next?domain=birds&mode=ranked&n=12"
        first = client.get(url, headers=headers).json()
        second = client.get(url, headers=headers).json()
        assert first == second

    def test_seed_parameter_is_inert_unless_exposed(self, full_campaign):
        client = TestClient(create_app(full_campaign))
        headers = login(client)
        url = "/api/tasks/next?domain=birds&mode=ranked&n=12"
        plain = client.get(url, headers=headers).json()
        assert client.get(url + "&seed=1", headers=headers).json() == plain
        assert client.get(url + "&seed=2", headers=headers).json() == plain

        exposed = TestClient(create_app(full_campaign, expose_seed=True))
        headers = login(exposed, name="jan")
        orders = {
            tuple(t["object"] for t in exposed.get(url + f"&seed={s}", headers=headers).json()["tasks"])
            for s in range(8)
        }
        assert len(orders) > 1

    def test_bad_n_and_unknown_domain(self, client):
        headers = login(client)
        assert client.get("/api/tasks/next?domain=birds&n=0", headers=headers).status_code == 422
        assert client.get("/api/tasks/next?domain=nope", headers=headers).status_code == 404


class TestObjects:
    def test_object_detail_in_language(self, client):
        headers = login(client)
        response = client.get(f"/api/objects/{BIRD1}?lang=nl", headers=headers)
        assert response.status_code == 200
        body = response.json()
        assert body["title"] == "Oehoe op magnoliatak"
        assert body["subjects"] == [{"concept": IOC + "bubo-bubo", "label": "Oehoe"}]
        assert body["image"]["width"] == 1200
        assert body["domains"] == ["birds"]

    def test_unknown_object_404(self, client):
        headers = login(client)
        response = client.get("/api/objects/urn:t:object:ghost", headers=headers)
        assert response.status_code == 404


class TestAnnotations:
    def test_submit_and_list(self, client):
        headers = login(client)
        created = post_annotation(client, headers)
        assert created.status_code == 201, created.text
        body = created.json()
        assert body["status"] == "submitted"
        assert body["body"]["label"] == "Eurasian eagle-owl"
        assert body["region"] == {"x": 100, "y": 120, "w": 300, "h": 200}
        assert body["user"] == "erika"

        listed = client.get(
            f"/api/annotations?object={BIRD1}&user=erika&status=submitted&lang=nl",
            headers=headers,
        ).json()["annotations"]
        assert [a["id"] for a in listed] == [body["id"]]
        assert listed[0]["body"]["label"] == "Oehoe"

    def test_validation_failures_are_422(self, client):
        headers = login(client)
        out_of_bounds = post_annotation(
            client, headers, region={"x": 1150, "y": 0, "w": 100, "h": 50}
        )
        assert out_of_bounds.status_code == 422
        assert out_of_bounds.json()["code"] == "validation"
        foreign = post_annotation(client, headers, object="urn:annocamp:object:lace-01")
        assert foreign.status_code == 422
        missing = client.post("/api/annotations", json={"domain": "birds"}, headers=headers)
        assert missing.status_code == 422

    def test_unknown_field_is_404(self, client):
        headers = login(client)
        response = post_annotation(client, headers, field="wingspan")
        assert response.status_code == 404

    def test_malformed_json_body_is_422(self, client):
        headers = dict(login(client))
        headers["Content-Type"] = "application/json"
        response = client.post("/api/annotations", content="{not json", headers=headers)
        assert response.status_code == 422
        assert response.json()["code"] == "validation"


class TestAutocomplete:
    def test_concepts_with_display_labels(self, client):
        headers = login(client)
        response = client.get(
            "/api/autocomplete?domain=birds&field=common-name&q=oeho&lang=nl",
            headers=headers,
        )
        suggestions = response.json()["suggestions"]
        # both prefix matches, shorter label first
        assert suggestions == [
            {"label": "Oehoe", "concept": IOC + "bubo-bubo", "matched_label": "Oehoe"},
            {"label": "Oehoes", "concept": IOC + "bubo", "matched_label": "Oehoes"},
        ]

    def test_value_list_fields_suggest_their_values(self, client):
        headers = login(client)
        response = client.get(
            "/api/autocomplete?domain=birds&field=gender&q=f", headers=headers
        )
        assert response.json()["suggestions"] == [
            {"label": "female", "concept": None, "matched_label": "female"}
        ]

    def test_free_text_fields_have_no_suggestions(self, client):
        headers = login(client)
        response = client.get(
            "/api/autocomplete?domain=birds&field=iconography&q=x", headers=headers
        )
        assert response.status_code == 422
        assert "offers no suggestions" in response.json()["message"]

    def test_respects_subdomain_override(self, client):
        headers = login(client)
        response = client.get(
            "/api/autocomplete?domain=lace&field=material&q=lace", headers=headers
        )
        concepts = {s["concept"] for s in response.json()["suggestions"]}
        assert "urn:annocamp:material:needle-lace" in concepts
        assert "urn:annocamp:material:gold" not in concepts


class TestExpertiseAndReviews:
    def test_expertise_round_trip(self, client):
        headers = login(client)
        response = client.post(
            "/api/expertise",
            json={"domain": "birds", "levels": {IOC + "bubo": 4}},
            headers=headers,
        )
        assert response.status_code == 200
        assert response.json()["expertise"] == {IOC + "bubo": 4}
        bad = client.post(
            "/api/expertise",
            json={"domain": "birds", "levels": {IOC + "falconiformes": 4}},
            headers=headers,
        )
        assert bad.status_code == 422

    def test_review_then_finalize_changes_status(self, client):
        erika = login(client)
        annotation = post_annotation(client, erika).json()["id"]
        reviewer = login(client, name="rev")
        decided = client.post(
            "/api/reviews", json={"annotation": annotation, "verdict": "correct"}, headers=reviewer
        )
        assert decided.status_code == 201
        assert decided.json()["reviewer"] == "rev"
        again = client.post(
            "/api/reviews", json={"annotation": annotation, "verdict": "incorrect"}, headers=reviewer
        )
        assert again.status_code == 409

        finalized = client.post(
            "/api/reviews/finalize", json={"policy": "single-reviewer"}, headers=reviewer
        )
        assert finalized.json()["changes"] == [
            {"annotation": annotation, "old": "submitted", "new": "accepted"}
        ]
        listed = client.get(
            f"/api/annotations?object={BIRD1}&status=accepted", headers=erika
        ).json()["annotations"]
        assert [a["id"] for a in listed] == [annotation]


class TestExportAndStats:
    def test_csv_export(self, client):
        headers = login(client)
        post_annotation(client, headers)
        response = client.get(
            "/api/export/annotations?format=csv&status=submitted&user=erika", headers=headers
        )
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/csv")
        rows = list(csv.reader(io.StringIO(response.text)))
        assert rows[0][0] == "annotation_id" and len(rows) == 2

    def test_triples_export_parses(self, client):
        headers = login(client)
        post_annotation(client, headers)
        response = client.get("/api/export/annotations?format=nt", headers=headers)
        assert response.headers["content-type"].startswith("application/n-triples")
        assert len(parse_turtle(response.text)) >= 13

    def test_unknown_format_is_usage_error(self, client):
        headers = login(client)
        response = client.get("/api/export/annotations?format=xml", headers=headers)
        assert response.status_code == 400
        assert response.json()["code"] == "usage"

    def test_stats_requires_domain(self, client):
        headers = login(client)
        missing = client.get("/api/stats", headers=headers)
        assert missing.status_code == 422
        assert missing.json()["code"] == "validation"
        post_annotation(client, headers)
        stats = client.get("/api/stats?domain=birds", headers=headers).json()
        assert stats["total"] == 1
        assert stats["per_user"] == {"erika": 1}
        assert stats["cells"] == [
            {"field": "common-name", "body_kind": "concept", "context": "online", "count": 1}
        ]


class TestFeedbackAndLog:
    def test_feedback_stored(self, client):
        headers = login(client)
        response = client.post(
            "/api/feedback",
            json={"message": "instructions unclear", "domain": "birds"},
            headers=headers,
        )
        assert response.status_code == 201
        assert response.json()["id"].startswith("urn:annocamp:feedback:")
        unknown = client.post(
            "/api/feedback", json={"message": "x", "domain": "nope"}, headers=headers
        )
        assert unknown.status_code == 404

    def test_every_post_writes_exactly_one_log_entry(self, client):
        posts = 0
        register(client); posts += 1
        response = client.post("/api/login", json={"login": "erika", "credential": "correct horse"})
        posts += 1
        headers = {"Authorization": f"Bearer {response.json()['token']}"}
        assert post_annotation(client, headers).status_code == 201
        posts += 1
        # failures are interactions too
        assert post_annotation(client, headers, field="wingspan").status_code == 404
        posts += 1
        assert client.post("/api/feedback", json={}, headers=headers).status_code == 422
        posts += 1
        assert client.post("/api/reviews", json={"annotation": "x", "verdict": "correct"}).status_code == 401
        posts += 1
        # reads do not log
        client.get("/api/domains")
        client.get("/api/annotations", headers=headers)

        log = client.app.state.interaction_log
        assert len(log) == posts
        assert [e.outcome for e in log] == [201, 200, 201, 404, 422, 401]
        assert log[2].user == "urn:annocamp:user:erika"
        assert log[0].user is None
        assert log[3].route == "/api/annotations"
        assert all(e.latency >= 0 for e in log)
