"""Task assignment: which objects a contributor is asked to annotate.

Three modes. Ranked hands out the least-annotated objects first, picking
randomly (seeded) inside each annotator-count stratum and never skipping
a less-annotated stratum. Sub-domain mode is ranked restricted to the
chosen sub-domain's objects. Recommendation walks the graph from the
contributor's strongest expertise topics down the hierarchy and across
subject and annotation edges into objects, scoring each reached path
with the topic level damped by path length. Every mode excludes objects
the contributor already annotated and is deterministic for a fixed seed
and store state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional

from . import ns
from .collection import objects_in_domain
from .errors import NotFoundError
from .store import Iri, TripleStore
from .users import get_expertise
from .vocab import narrower_of

_TARGET = Iri(ns.OA_HAS_TARGET)
_BODY = Iri(ns.OA_HAS_BODY)
_SOURCE = Iri(ns.OA_HAS_SOURCE)
_CREATOR = Iri(ns.DCT_CREATOR)
_STATUS = Iri(ns.P_STATUS)
_SUBJECT = Iri(ns.DCT_SUBJECT)

TOP_TOPICS = 3
MAX_DEPTH = 4
DECAY = 0.5


@dataclass(frozen=True)
class TaskCandidate:
    object: str
    annotator_count: int
    score: Optional[float] = None


def _annotation_edges(store: TripleStore) -> list[tuple[str, str, str]]:
    """(annotation, object, user) for every stored annotation; region
    targets are skipped in favour of the plain object target."""
    region_nodes = {
        t.subject for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_SOURCE)
    }
    creators = {
        t.subject.value: t.object.value
        for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_CREATOR)
        if isinstance(t.object, Iri)
    }
    edges = []
    for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_TARGET):
        if not isinstance(t.object, Iri) or t.object in region_nodes:
            continue
        user = creators.get(t.subject.value)
        if user is not None:
            edges.append((t.subject.value, t.object.value, user))
    return edges


def annotator_counts(store: TripleStore, objects: Iterable[str]) -> dict:
    """Distinct users who annotated each object, any review status."""
    wanted = set(objects)
    users_per_object: dict = {obj: set() for obj in wanted}
    for _annotation, obj, user in _annotation_edges(store):
        if obj in wanted:
            users_per_object[obj].add(user)
    return {obj: len(users) for obj, users in users_per_object.items()}


def user_annotated_objects(store: TripleStore, user_id: str) -> set:
    return {obj for _a, obj, user in _annotation_edges(store) if user == user_id}


def assign_ranked(
    store: TripleStore,
    registry,
    user_id: str,
    domain_id: str,
    n: int,
    seed: Optional[int] = None,
) -> list[TaskCandidate]:
    """Up to n objects the user has not annotated, drawn from the
    minimal-annotator-count stratum first, seeded-random within a stratum."""
    annotated = user_annotated_objects(store, user_id)
    pool = [obj for obj in objects_in_domain(store, registry, domain_id) if obj not in annotated]
    counts = annotator_counts(store, pool)
    rng = random.Random(seed)
    out: list[TaskCandidate] = []
    for count in sorted(set(counts.values())):
        stratum = sorted(obj for obj in pool if counts[obj] == count)
        rng.shuffle(stratum)
        for obj in stratum:
            out.append(TaskCandidate(obj, count))
            if len(out) == n:
                return out
    return out


def assign_subdomain(
    store: TripleStore,
    registry,
    user_id: str,
    subdomain_id: str,
    n: int,
    seed: Optional[int] = None,
) -> list[TaskCandidate]:
    registry.get(subdomain_id)
    return assign_ranked(store, registry, user_id, subdomain_id, n, seed)


def _paths_to_objects(store: TripleStore, topic: str, searchable: set) -> list[tuple[str, int]]:
    """Every (object, path length) reachable from the topic concept within
    MAX_DEPTH edges: narrower steps inside the vocabulary, then one
    subject edge or an annotation's body+target edge pair into an object."""
    annotation_targets: dict = {}
    region_nodes = {t.subject for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_SOURCE)}
    statuses = {
        t.subject.value: str(t.object)
        for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_STATUS)
    }
    for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_TARGET):
        if isinstance(t.object, Iri) and t.object not in region_nodes:
            annotation_targets.setdefault(t.subject.value, []).append(t.object.value)

    reached: list[tuple[str, int]] = []

    def visit(concept: str, depth: int, on_path: frozenset) -> None:
        if depth + 1 <= MAX_DEPTH:
            for t in store.query_pattern(None, p=_SUBJECT, o=Iri(concept)):
                if t.subject.value in searchable:
                    reached.append((t.subject.value, depth + 1))
        if depth + 2 <= MAX_DEPTH:
            for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_BODY, o=Iri(concept)):
                annotation = t.subject.value
                if statuses.get(annotation) == "rejected":
                    continue
                for obj in annotation_targets.get(annotation, ()):
                    if obj in searchable:
                        reached.append((obj, depth + 2))
        if depth + 2 <= MAX_DEPTH:
            for child in narrower_of(store, concept):
                if child not in on_path:
                    visit(child, depth + 1, on_path | {child})

    visit(topic, 0, frozenset([topic]))
    return reached


def assign_recommend(
    store: TripleStore,
    registry,
    user_id: str,
    domain_id: str,
    n: int,
    seed: Optional[int] = None,
) -> list[TaskCandidate]:
    """Score objects by expertise-weighted graph proximity; falls back to
    ranked assignment when the user has no expertise profile."""
    levels = get_expertise(store, user_id)
    if not levels:
        return assign_ranked(store, registry, user_id, domain_id, n, seed)

    topics = sorted(levels, key=lambda t: (-levels[t], t))[:TOP_TOPICS]
    annotated = user_annotated_objects(store, user_id)
    eligible = {
        obj for obj in objects_in_domain(store, registry, domain_id) if obj not in annotated
    }

    scores: dict = {}
    for topic in topics:
        for obj, length in _paths_to_objects(store, topic, eligible):
            scores[obj] = scores.get(obj, 0.0) + levels[topic] * DECAY**length

    counts = annotator_counts(store, scores)
    rng = random.Random(seed)
    shuffle_key = {obj: rng.random() for obj in sorted(scores)}
    ordered = sorted(scores, key=lambda o: (-scores[o], counts[o], shuffle_key[o]))
    return [TaskCandidate(obj, counts[obj], scores[obj]) for obj in ordered[:n]]


def assign(
    store: TripleStore,
    registry,
    user_id: str,
    domain_id: str,
    n: int,
    seed: Optional[int] = None,
    mode: Optional[str] = None,
) -> list[TaskCandidate]:
    """Dispatch on the requested mode, defaulting to the domain's own."""
    config = registry.get(domain_id)
    mode = mode or config.assignment_mode
    if mode == "ranked":
        return assign_ranked(store, registry, user_id, domain_id, n, seed)
    if mode == "subdomain":
        return assign_subdomain(store, registry, user_id, domain_id, n, seed)
    if mode == "recommendation":
        return assign_recommend(store, registry, user_id, domain_id, n, seed)
    raise NotFoundError(f"unknown assignment mode {mode!r}")
