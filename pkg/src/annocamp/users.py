"""Contributor accounts, credentials, and expertise profiles.

Registration asks for the minimum: a login identifier, a display name,
a credential, and a preferred language. Credentials are stored only as
salted PBKDF2 hashes. Expertise is a per-topic level on a 1..5 scale,
restricted to the domain's configured topic branch.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

from . import ns
from .errors import ConflictError, NotFoundError, ValidationError
from .store import Iri, Literal, Triple, TripleStore
from .util import format_utc, parse_utc, utc_now

_TYPE = Iri(ns.RDF_TYPE)
_USER = Iri(ns.C_USER)
_LOGIN = Iri(ns.P_LOGIN)
_CREDENTIAL = Iri(ns.P_CREDENTIAL)
_DISPLAY = Iri(ns.P_DISPLAY_NAME)
_LANGUAGE = Iri(ns.P_LANGUAGE)
_REGISTERED = Iri(ns.P_REGISTERED_AT)
_EXPERTISE = Iri(ns.P_EXPERTISE)
_TOPIC = Iri(ns.P_TOPIC)
_LEVEL = Iri(ns.P_LEVEL)
_INTEGER = Iri(ns.XSD_INTEGER)
_DATETIME = Iri(ns.XSD_DATETIME)

MIN_CREDENTIAL_LENGTH = 8
EXPERTISE_SCALE = (1, 5)

_PBKDF2_ITERATIONS = 120_000


@dataclass(frozen=True)
class UserProfile:
    user: str
    login: str
    display_name: str
    language: str
    registered_at: Optional[datetime]
    expertise: dict


def _hash_credential(credential: str, salt: Optional[bytes] = None) -> str:
    salt = salt if salt is not None else secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", credential.encode("utf-8"), salt, _PBKDF2_ITERATIONS)
    return f"pbkdf2-sha256${_PBKDF2_ITERATIONS}${salt.hex()}${digest.hex()}"


def _verify_hash(credential: str, stored: str) -> bool:
    try:
        _algo, iterations, salt_hex, digest_hex = stored.split("$")
        digest = hashlib.pbkdf2_hmac(
            "sha256", credential.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return secrets.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


def register(
    store: TripleStore,
    login: str,
    display_name: str,
    credential: str,
    language: str = "en",
) -> str:
    """Create an account; duplicate display names are fine, duplicate
    login identifiers are not. Returns the user id."""
    login = (login or "").strip()
    if not login or any(ch.isspace() for ch in login):
        raise ValidationError("login identifier must be non-empty without spaces")
    if not (display_name or "").strip():
        raise ValidationError("display name must be non-empty")
    if len(credential or "") < MIN_CREDENTIAL_LENGTH:
        raise ValidationError(f"credential must be at least {MIN_CREDENTIAL_LENGTH} characters")

    user = Iri(ns.user_iri(login))
    with store.writing():
        if store.query_pattern(ns.GRAPH_USERS, s=user, p=_TYPE, o=_USER):
            raise ConflictError(f"login {login!r} is already registered")
        store.insert_triples(
            ns.GRAPH_USERS,
            [
                Triple(user, _TYPE, _USER),
                Triple(user, _LOGIN, Literal(login)),
                Triple(user, _CREDENTIAL, Literal(_hash_credential(credential))),
                Triple(user, _DISPLAY, Literal(display_name.strip())),
                Triple(user, _LANGUAGE, Literal(language or "en")),
                Triple(user, _REGISTERED, Literal(format_utc(utc_now()), datatype=_DATETIME)),
            ],
        )
    return user.value


def verify_credential(store: TripleStore, login: str, credential: str) -> Optional[str]:
    """User id when the login/credential pair is valid, else None."""
    user = Iri(ns.user_iri((login or "").strip()))
    stored = [
        t.object.lexical
        for t in store.query_pattern(ns.GRAPH_USERS, s=user, p=_CREDENTIAL)
        if isinstance(t.object, Literal)
    ]
    if stored and _verify_hash(credential or "", stored[0]):
        return user.value
    return None


def get_profile(store: TripleStore, user_id: str) -> UserProfile:
    subject = Iri(user_id)
    facts = store.query_pattern(ns.GRAPH_USERS, s=subject)
    if not any(t.predicate == _TYPE and t.object == _USER for t in facts):
        raise NotFoundError(f"unknown user {user_id}")
    login = display = language = None
    registered = None
    for t in facts:
        if not isinstance(t.object, Literal):
            continue
        if t.predicate == _LOGIN:
            login = t.object.lexical
        elif t.predicate == _DISPLAY:
            display = t.object.lexical
        elif t.predicate == _LANGUAGE:
            language = t.object.lexical
        elif t.predicate == _REGISTERED:
            registered = parse_utc(t.object.lexical)
    return UserProfile(
        user=user_id,
        login=login or "",
        display_name=display or "",
        language=language or "en",
        registered_at=registered,
        expertise=get_expertise(store, user_id),
    )


def get_expertise(store: TripleStore, user_id: str) -> dict:
    levels: dict = {}
    for t in store.query_pattern(ns.GRAPH_USERS, s=Iri(user_id), p=_EXPERTISE):
        if not isinstance(t.object, Iri):
            continue
        node = t.object
        topic = None
        level = None
        for fact in store.query_pattern(ns.GRAPH_USERS, s=node):
            if fact.predicate == _TOPIC and isinstance(fact.object, Iri):
                topic = fact.object.value
            elif fact.predicate == _LEVEL and isinstance(fact.object, Literal):
                level = int(fact.object.lexical)
        if topic is not None and level is not None:
            levels[topic] = level
    return levels


def set_expertise(store: TripleStore, registry, user_id: str, domain_id: str, levels: dict) -> UserProfile:
    """Store per-topic levels; re-setting a topic overwrites its level."""
    config = registry.get(domain_id)
    if config.expertise is None:
        raise ValidationError(f"domain {domain_id!r} has no expertise topics configured")
    get_profile(store, user_id)

    low, high = EXPERTISE_SCALE
    cleaned: dict = {}
    for topic, level in levels.items():
        if topic not in config.expertise.members:
            raise ValidationError(
                f"topic {topic} is outside the expertise branch rooted at {config.expertise.seed}"
            )
        if not isinstance(level, int) or isinstance(level, bool) or not low <= level <= high:
            raise ValidationError(f"expertise level for {topic} must be an integer {low}..{high}")
        cleaned[topic] = level

    subject = Iri(user_id)
    with store.writing():
        for topic, level in cleaned.items():
            node = Iri(ns.expertise_iri(user_id, topic))
            old = store.query_pattern(ns.GRAPH_USERS, s=node, p=_LEVEL)
            store.remove_triples(ns.GRAPH_USERS, old)
            store.insert_triples(
                ns.GRAPH_USERS,
                [
                    Triple(subject, _EXPERTISE, node),
                    Triple(node, _TOPIC, Iri(topic)),
                    Triple(node, _LEVEL, Literal(str(level), datatype=_INTEGER)),
                ],
            )
    return get_profile(store, user_id)
