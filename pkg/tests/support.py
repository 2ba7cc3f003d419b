"""Shared builders and independent oracles for the test suite.

The oracles deliberately use different algorithms from the library code:
reachability by fixpoint iteration instead of BFS, ancestor distance by
Bellman-Ford-style relaxation, and vote counting by brute-force
comparison.
"""

from __future__ import annotations

import random
import uuid
from datetime import datetime, timezone
from typing import Iterable, Optional

from annocamp import ns
from annocamp.annotations import Annotation, AnnotationBody, RegionSelector, annotation_triples
from annocamp.store import Iri, Literal, Triple, TripleStore

SKOS_CONCEPT = Iri(ns.SKOS_CONCEPT)
SKOS_BROADER = Iri(ns.SKOS_BROADER)
SKOS_IN_SCHEME = Iri(ns.SKOS_IN_SCHEME)
SKOS_PREF = Iri(ns.SKOS_PREF_LABEL)
RDF_TYPE = Iri(ns.RDF_TYPE)

IOC = "urn:annocamp:ioc:"
IOC_SCHEME = "urn:annocamp:scheme:ioc"


def utc(year, month, day, hour=12, minute=0) -> datetime:
    return datetime(year, month, day, hour, minute, tzinfo=timezone.utc)


# -- vocabulary builders -----------------------------------------------------


def install_dag(store: TripleStore, scheme: str, broader: dict, labels: Optional[dict] = None) -> None:
    """Insert a concept scheme directly (no Turtle round-trip): keys of
    `broader` are concept ids, values are iterables of broader ids."""
    triples = []
    scheme_iri = Iri(scheme)
    for concept, parents in broader.items():
        subject = Iri(concept)
        triples.append(Triple(subject, RDF_TYPE, SKOS_CONCEPT))
        triples.append(Triple(subject, SKOS_IN_SCHEME, scheme_iri))
        for parent in parents:
            triples.append(Triple(subject, SKOS_BROADER, Iri(parent)))
        for tag, text in (labels or {}).get(concept, {}).items():
            triples.append(Triple(subject, SKOS_PREF, Literal(text, language=tag or None)))
    store.insert_triples(ns.GRAPH_VOCABULARY, triples)


def random_dag(rng: random.Random, size: int, max_parents: int = 3) -> dict:
    """Random polyhierarchy, acyclic by construction (edges only point to
    lower-numbered concepts)."""
    broader: dict = {}
    for i in range(size):
        concept = f"urn:test:c{i}"
        parents = []
        if i > 0:
            for _ in range(rng.randint(0, max_parents)):
                parents.append(f"urn:test:c{rng.randrange(i)}")
        broader[concept] = sorted(set(parents))
    return broader


def narrower_closure_oracle(broader: dict, seed: str) -> set:
    """Reachability over inverted edges by fixpoint iteration."""
    narrower: dict = {c: set() for c in broader}
    for child, parents in broader.items():
        for parent in parents:
            narrower.setdefault(parent, set()).add(child)
    member = {seed}
    changed = True
    while changed:
        changed = False
        for concept in list(member):
            for child in narrower.get(concept, ()):
                if child not in member:
                    member.add(child)
                    changed = True
    return member


def ancestor_steps_oracle(broader: dict, start: str, ancestor: str) -> Optional[int]:
    """Shortest broader-chain length by relaxation until stable."""
    if start == ancestor:
        return 0
    dist = {start: 0}
    for _ in range(len(broader) + 1):
        updated = False
        for concept, d in list(dist.items()):
            for parent in broader.get(concept, ()):
                if parent not in dist or d + 1 < dist[parent]:
                    dist[parent] = d + 1
                    updated = True
        if not updated:
            break
    return dist.get(ancestor)


def majority_oracle(votes: Iterable) -> Optional[str]:
    """Strictly most frequent value by brute-force pairwise counting."""
    votes = list(votes)
    best_value, best_count, tie = None, 0, False
    for candidate in sorted(set(votes)):
        count = sum(1 for v in votes if v == candidate)
        if count > best_count:
            best_value, best_count, tie = candidate, count, False
        elif count == best_count:
            tie = True
    if best_value is None or tie:
        return None
    return best_value


# -- annotation builders -----------------------------------------------------


def make_annotation(
    object_id: str,
    field: str = "common-name",
    concept: Optional[str] = None,
    text: Optional[str] = None,
    user: str = "urn:annocamp:user:tester",
    created_at: Optional[datetime] = None,
    status: str = "submitted",
    region: Optional[tuple] = None,
) -> Annotation:
    if concept is not None:
        body = AnnotationBody(kind="concept", concept=concept, text=None, entered_text=concept)
    else:
        body = AnnotationBody(kind="text", concept=None, text=text, entered_text=text or "")
    selector = None
    if region is not None:
        x, y, w, h = region
        selector = RegionSelector(image=f"{object_id}#image", x=x, y=y, w=w, h=h)
    return Annotation(
        id=ns.annotation_iri(uuid.uuid4().hex),
        object=object_id,
        region=selector,
        field=field,
        body=body,
        user=user,
        created_at=created_at or utc(2026, 3, 1),
        status=status,
    )


def insert_annotations(store: TripleStore, annotations: Iterable[Annotation]) -> int:
    triples = [t for a in annotations for t in annotation_triples(a)]
    return store.insert_triples(ns.GRAPH_ANNOTATIONS, triples)


def make_objects(store: TripleStore, ids: Iterable[str], domain: Optional[str] = None, size=(1000, 800)) -> None:
    """Minimal collection objects: type, title, aggregation, image facts."""
    triples = []
    width, height = size
    for object_id in ids:
        subject = Iri(object_id)
        aggregation = Iri(ns.aggregation_iri(object_id))
        image = Iri(ns.image_iri(object_id, f"img/{object_id.rsplit(':', 1)[-1]}.jpg"))
        triples += [
            Triple(subject, RDF_TYPE, Iri(ns.EDM_PROVIDED_CHO)),
            Triple(subject, Iri(ns.DCT_TITLE), Literal(f"Object {object_id.rsplit(':', 1)[-1]}", language="en")),
            Triple(aggregation, RDF_TYPE, Iri(ns.ORE_AGGREGATION)),
            Triple(aggregation, Iri(ns.EDM_AGGREGATED_CHO), subject),
            Triple(aggregation, Iri(ns.EDM_IS_SHOWN_BY), image),
            Triple(image, RDF_TYPE, Iri(ns.EDM_WEB_RESOURCE)),
            Triple(image, Iri(ns.P_LOCATION), Literal(f"img/{object_id}.jpg")),
            Triple(image, Iri(ns.EBUCORE_WIDTH), Literal(str(width), datatype=Iri(ns.XSD_INTEGER))),
            Triple(image, Iri(ns.EBUCORE_HEIGHT), Literal(str(height), datatype=Iri(ns.XSD_INTEGER))),
        ]
        if domain:
            triples.append(Triple(subject, Iri(ns.P_IN_DOMAIN), Iri(ns.domain_iri(domain))))
    store.insert_triples(ns.GRAPH_COLLECTION, triples)
