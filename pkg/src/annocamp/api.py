"""HTTP/JSON facade over the campaign modules.

Bearer-token sessions guard everything except registration, login,
domain listings, and search. Errors come back as {"code", "message"}
with 401/404/409/422 mapped from the module exceptions, and every POST
request appends one entry to the in-memory interaction log.
"""

from __future__ import annotations

import hashlib
import threading
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta
from secrets import token_urlsafe
from typing import Optional

from fastapi import Body, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from . import annotations, assignment, collection, ns, quality, search as search_mod, users, vocab
from .campaign import Campaign
from .errors import AnnocampError, AuthError, ValidationError
from .store import Iri, Literal, Triple, choose_language
from .util import format_utc, utc_now

DEFAULT_SESSION_TTL = 24 * 3600
DEFAULT_TASK_COUNT = 5

_STATUS_BY_CODE = {
    "validation": 422,
    "not_found": 404,
    "conflict": 409,
    "unauthenticated": 401,
    "usage": 400,
    "load": 422,
}


@dataclass(frozen=True)
class Session:
    token: str
    user: str
    created_at: datetime
    expires_at: datetime


@dataclass(frozen=True)
class InteractionLogEntry:
    timestamp: datetime
    user: Optional[str]
    route: str
    outcome: int
    latency: float


def _bearer_token(header: Optional[str]) -> Optional[str]:
    if not header:
        return None
    scheme, _, token = header.partition(" ")
    if scheme.lower() != "bearer" or not token.strip():
        return None
    return token.strip()


def _field_json(spec, language: Optional[str]) -> dict:
    out = {
        "id": spec.id,
        "name": choose_language(spec.name, language),
        "instruction": choose_language(spec.instruction, language),
        "type": spec.field_type,
        "scope": spec.scope,
    }
    if spec.values is not None:
        out["values"] = list(spec.values)
    if spec.subset is not None:
        out["subset"] = {
            "scheme": spec.subset.scheme,
            "seed": spec.subset.seed,
            "size": len(spec.subset.members),
        }
    return out


def _image_json(info) -> Optional[dict]:
    if info is None:
        return None
    return {"location": info.location, "width": info.width, "height": info.height}


def _annotation_json(store, annotation, language: Optional[str]) -> dict:
    body = {
        "kind": annotation.body.kind,
        "concept": annotation.body.concept,
        "text": annotation.body.text,
        "entered_text": annotation.body.entered_text,
    }
    if annotation.body.concept:
        body["label"] = store.label_of(annotation.body.concept, language)
    region = None
    if annotation.region is not None:
        region = {
            "x": annotation.region.x,
            "y": annotation.region.y,
            "w": annotation.region.w,
            "h": annotation.region.h,
        }
    return {
        "id": annotation.id,
        "object": annotation.object,
        "field": annotation.field,
        "body": body,
        "region": region,
        "user": annotations.login_of(annotation.user),
        "created_at": format_utc(annotation.created_at),
        "status": annotation.status,
    }


def _need(payload: dict, key: str) -> object:
    value = payload.get(key)
    if value is None or (isinstance(value, str) and not value.strip()):
        raise ValidationError(f"request body needs {key!r}")
    return value


def create_app(
    campaign: Campaign,
    session_ttl_seconds: int = DEFAULT_SESSION_TTL,
    expose_seed: bool = False,
) -> FastAPI:
    app = FastAPI(title="annocamp", docs_url=None, redoc_url=None, openapi_url=None)
    store = campaign.store
    registry = campaign.registry

    sessions: dict[str, Session] = {}
    interaction_log: list[InteractionLogEntry] = []
    log_lock = threading.Lock()
    app.state.campaign = campaign
    app.state.sessions = sessions
    app.state.interaction_log = interaction_log

    def session_user(request: Request) -> str:
        token = _bearer_token(request.headers.get("authorization"))
        session = sessions.get(token) if token else None
        if session is None:
            raise AuthError("session token missing or unknown")
        if session.expires_at < utc_now():
            sessions.pop(session.token, None)
            raise AuthError("session expired")
        return session.user

    # -- plumbing -------------------------------------------------------

    @app.exception_handler(AnnocampError)
    async def on_module_error(request: Request, exc: AnnocampError):
        status = _STATUS_BY_CODE.get(exc.code, 422)
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def on_request_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422, content={"code": "validation", "message": str(exc.errors())}
        )

    @app.middleware("http")
    async def log_mutations(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        if request.method == "POST":
            token = _bearer_token(request.headers.get("authorization"))
            session = sessions.get(token) if token else None
            entry = InteractionLogEntry(
                timestamp=utc_now(),
                user=session.user if session else None,
                route=request.url.path,
                outcome=response.status_code,
                latency=time.perf_counter() - start,
            )
            with log_lock:
                interaction_log.append(entry)
        return response

    # -- accounts and sessions -------------------------------------------

    @app.post("/api/users/register", status_code=201)
    def register(payload: dict = Body(...)):
        user = users.register(
            store,
            login=str(_need(payload, "login")),
            display_name=str(_need(payload, "display_name")),
            credential=str(payload.get("credential") or ""),
            language=str(payload.get("language") or "en"),
        )
        profile = users.get_profile(store, user)
        return {
            "user": user,
            "login": profile.login,
            "display_name": profile.display_name,
            "language": profile.language,
        }

    @app.post("/api/login")
    def login(payload: dict = Body(...)):
        login_id = str(_need(payload, "login"))
        user = users.verify_credential(store, login_id, str(payload.get("credential") or ""))
        if user is None:
            raise AuthError("unknown login or wrong credential")
        now = utc_now()
        session = Session(
            token=token_urlsafe(32),
            user=user,
            created_at=now,
            expires_at=now + timedelta(seconds=session_ttl_seconds),
        )
        sessions[session.token] = session
        profile = users.get_profile(store, user)
        return {
            "token": session.token,
            "user": user,
            "login": profile.login,
            "display_name": profile.display_name,
            "language": profile.language,
            "expires_at": format_utc(session.expires_at),
        }

    # -- domains ----------------------------------------------------------

    @app.get("/api/domains")
    def list_domains(lang: Optional[str] = None):
        out = []
        for domain_id in registry.roots():
            config = registry.get(domain_id)
            out.append(
                {
                    "id": config.id,
                    "display": choose_language(config.display, lang),
                    "tagline": choose_language(config.tagline, lang),
                    "brand_images": list(config.brand_images),
                    "assignment_mode": config.assignment_mode,
                    "subdomains": list(config.subdomains),
                }
            )
        return {"domains": out}

    @app.get("/api/domains/{domain_id}")
    def get_domain(domain_id: str, lang: Optional[str] = None):
        config = registry.get(domain_id)
        expertise_topics = []
        if config.expertise is not None:
            for topic in sorted(config.expertise.members):
                expertise_topics.append({"concept": topic, "label": store.label_of(topic, lang)})
        tree = [
            {
                "domain": node.domain,
                "depth": node.depth,
                "object_count": node.object_count,
                "display": choose_language(node.display, lang),
            }
            for node in registry.subdomain_tree(store, domain_id)
        ]
        return {
            "id": config.id,
            "display": choose_language(config.display, lang),
            "tagline": choose_language(config.tagline, lang),
            "brand_images": list(config.brand_images),
            "assignment_mode": config.assignment_mode,
            "default_language": config.default_language,
            "parent": registry.parent_of(domain_id),
            "subdomains": list(config.subdomains),
            "fields": [_field_json(spec, lang) for spec in registry.effective_fields(domain_id)],
            "expertise_topics": expertise_topics,
            "tree": tree,
        }

    # -- tasks and objects --------------------------------------------------

    @app.get("/api/tasks/next")
    def next_tasks(
        request: Request,
        domain: str = Query(...),
        mode: Optional[str] = None,
        n: int = DEFAULT_TASK_COUNT,
        lang: Optional[str] = None,
        seed: Optional[int] = None,
    ):
        user = session_user(request)
        if n < 1:
            raise ValidationError("n must be at least 1")
        if not expose_seed or seed is None:
            # reads must replay identically for unchanged store state, so
            # the shuffle seed is derived from the request itself
            digest = hashlib.sha256(f"{user}|{domain}|{mode or ''}|{n}".encode()).digest()
            seed = int.from_bytes(digest[:8], "big")
        config = registry.get(domain)
        tasks = assignment.assign(store, registry, user, domain, n, seed=seed, mode=mode)
        out = []
        for task in tasks:
            out.append(
                {
                    "object": task.object,
                    "title": collection.object_title(store, task.object, lang),
                    "image": _image_json(collection.image_of(store, task.object)),
                    "annotator_count": task.annotator_count,
                    "score": task.score,
                }
            )
        return {"domain": domain, "mode": mode or config.assignment_mode, "tasks": out}

    @app.get("/api/objects/{object_id:path}")
    def get_object(object_id: str, request: Request, lang: Optional[str] = None):
        session_user(request)
        view = collection.get_object(store, object_id, lang)
        return {
            "id": view.id,
            "title": view.title,
            "description": view.description,
            "creator": view.creator,
            "image": _image_json(view.image),
            "subjects": [{"concept": s.id, "label": s.label} for s in view.subjects],
            "annotation_count": view.annotation_count,
            "domains": list(view.domains),
        }

    # -- annotations -------------------------------------------------------

    @app.post("/api/annotations", status_code=201)
    def post_annotation(request: Request, payload: dict = Body(...)):
        user = session_user(request)
        body = payload.get("body")
        if not isinstance(body, dict):
            raise ValidationError("request body needs 'body' with a kind")
        region = payload.get("region")
        if region is not None and not isinstance(region, dict):
            raise ValidationError("region must be an object with x, y, w, h")
        annotation = annotations.submit_annotation(
            store,
            registry,
            user=user,
            domain=str(_need(payload, "domain")),
            object_id=str(_need(payload, "object")),
            field_id=str(_need(payload, "field")),
            body_kind=str(_need(body, "kind")),
            concept=body.get("concept"),
            text=body.get("text"),
            entered_text=body.get("entered_text"),
            region=region,
        )
        return _annotation_json(store, annotation, None)

    @app.get("/api/annotations")
    def get_annotations(
        request: Request,
        object: Optional[str] = None,
        user: Optional[str] = None,
        status: Optional[str] = None,
        field: Optional[str] = None,
        lang: Optional[str] = None,
    ):
        session_user(request)
        found = annotations.list_annotations(
            store,
            object_id=object,
            user=ns.user_iri(user) if user else None,
            field=field,
            status=status,
        )
        return {"annotations": [_annotation_json(store, a, lang) for a in found]}

    # -- vocabulary services -------------------------------------------------

    @app.get("/api/autocomplete")
    def autocomplete(
        request: Request,
        domain: str = Query(...),
        field: str = Query(...),
        q: str = Query(""),
        lang: Optional[str] = None,
        limit: int = 10,
    ):
        session_user(request)
        spec = registry.resolve_field(domain, field)
        source = spec.subset if spec.subset is not None else spec.values
        if source is None:
            raise ValidationError(f"field {field!r} offers no suggestions")
        found = vocab.autocomplete(store, source, q, language=lang, limit=limit)
        return {
            "suggestions": [
                {"label": s.label, "concept": s.concept, "matched_label": s.matched_label}
                for s in found
            ]
        }

    @app.post("/api/expertise")
    def post_expertise(request: Request, payload: dict = Body(...)):
        user = session_user(request)
        levels = payload.get("levels")
        if not isinstance(levels, dict) or not levels:
            raise ValidationError("request body needs 'levels' mapping topics to 1..5")
        profile = users.set_expertise(store, registry, user, str(_need(payload, "domain")), levels)
        return {"user": user, "login": profile.login, "expertise": dict(profile.expertise)}

    @app.get("/api/search")
    def run_search(
        q: str = Query(...),
        lang: Optional[str] = None,
        domain: Optional[str] = None,
    ):
        if domain is not None:
            registry.get(domain)
        result = search_mod.search(store, registry, query=q, language=lang, domain=domain)
        clusters = []
        for cluster in result.clusters:
            clusters.append(
                {
                    "key": cluster.key,
                    "hits": [
                        {
                            "object": hit.object,
                            "path_length": hit.path_length,
                            "matched_label": hit.matched_label,
                            "title": hit.title,
                        }
                        for hit in cluster.hits
                    ],
                }
            )
        return {"query": result.query, "clusters": clusters}

    # -- review and reporting ------------------------------------------------

    @app.post("/api/reviews", status_code=201)
    def post_review(request: Request, payload: dict = Body(...)):
        reviewer = session_user(request)
        decision = quality.review(
            store,
            annotation_id=str(_need(payload, "annotation")),
            reviewer=reviewer,
            verdict=str(_need(payload, "verdict")),
        )
        return {
            "annotation": decision.annotation,
            "reviewer": annotations.login_of(decision.reviewer),
            "verdict": decision.verdict,
            "created_at": format_utc(decision.created_at),
        }

    @app.post("/api/reviews/finalize")
    def post_finalize(request: Request, payload: dict = Body(...)):
        session_user(request)
        changes = quality.finalize_reviews(store, str(_need(payload, "policy")))
        return {
            "changes": [
                {"annotation": c.annotation, "old": c.old, "new": c.new} for c in changes
            ]
        }

    @app.get("/api/export/annotations")
    def export(
        request: Request,
        format: str = Query(...),
        status: Optional[str] = None,
        object: Optional[str] = None,
        user: Optional[str] = None,
        lang: Optional[str] = None,
    ):
        session_user(request)
        text = annotations.export_annotations(
            store,
            format,
            language=lang,
            object_id=object,
            user=ns.user_iri(user) if user else None,
            status=status,
        )
        media = "text/csv" if format in ("csv", "spreadsheet") else "application/n-triples"
        return PlainTextResponse(text, media_type=f"{media}; charset=utf-8")

    @app.get("/api/stats")
    def stats(request: Request, domain: str = Query(...)):
        session_user(request)
        computed = quality.compute_stats(store, registry, domain)
        cells = [
            {"field": key[0], "body_kind": key[1], "context": key[2], "count": count}
            for key, count in sorted(computed.cells.items())
        ]
        return {
            "domain": computed.domain,
            "total": computed.total,
            "event_total": computed.event_total,
            "online_total": computed.online_total,
            "contributors": computed.contributors,
            "event_contributors": computed.event_contributors,
            "online_contributors": computed.online_contributors,
            "event_average": computed.event_average,
            "online_average": computed.online_average,
            "cells": cells,
            "per_user": {
                annotations.login_of(user): count for user, count in computed.per_user.items()
            },
        }

    @app.post("/api/feedback", status_code=201)
    def post_feedback(request: Request, payload: dict = Body(...)):
        user = session_user(request)
        message = str(_need(payload, "message"))
        domain = payload.get("domain")
        if domain is not None:
            registry.get(str(domain))
        node = Iri(ns.feedback_iri(uuid.uuid4().hex))
        triples = [
            Triple(node, Iri(ns.RDF_TYPE), Iri(ns.C_FEEDBACK)),
            Triple(node, Iri(ns.P_MESSAGE), Literal(message)),
            Triple(node, Iri(ns.DCT_CREATOR), Iri(user)),
            Triple(
                node,
                Iri(ns.DCT_CREATED),
                Literal(format_utc(utc_now()), datatype=Iri(ns.XSD_DATETIME)),
            ),
        ]
        if domain is not None:
            triples.append(Triple(node, Iri(ns.P_IN_DOMAIN), Iri(ns.domain_iri(str(domain)))))
        store.insert_triples(ns.GRAPH_USERS, triples)
        return {"id": node.value}

    return app
