"""Keyword search over the graph, with contributed annotations treated
as subject metadata.

A query matches literal labels (titles, descriptions, concept labels,
annotation texts) in any language, so a concept annotated under its
English label is found through its Dutch label too. From each matched
resource the search walks toward collection objects, at most three edges
away, and clusters the objects by the path that reached them: a matched
title, a pre-existing subject concept, an annotation body, or a narrower
concept below the matched one. Submitted and accepted annotations count;
rejected ones do not. Every object lands in exactly one cluster, the one
with the shortest path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import ns
from .collection import object_title, objects_in_domain
from .store import Iri, Literal, TripleStore
from .util import fold_text
from .vocab import narrower_of

_TITLE = Iri(ns.DCT_TITLE)
_DESCRIPTION = Iri(ns.DCT_DESCRIPTION)
_PREF = Iri(ns.SKOS_PREF_LABEL)
_ALT = Iri(ns.SKOS_ALT_LABEL)
_VALUE = Iri(ns.RDF_VALUE)
_TYPE = Iri(ns.RDF_TYPE)
_TEXTUAL_BODY = Iri(ns.OA_TEXTUAL_BODY)
_CHO = Iri(ns.EDM_PROVIDED_CHO)
_SUBJECT = Iri(ns.DCT_SUBJECT)
_BODY = Iri(ns.OA_HAS_BODY)
_TARGET = Iri(ns.OA_HAS_TARGET)
_SOURCE = Iri(ns.OA_HAS_SOURCE)
_STATUS = Iri(ns.P_STATUS)

MAX_PATH_LENGTH = 3

# cluster presentation order when path lengths tie
_SIGNATURES = (
    "matched-title",
    "matched-description",
    "subject-concept",
    "annotation-body",
    "annotation-text",
    "subject-concept-narrower",
    "annotation-body-narrower",
)


@dataclass(frozen=True)
class SearchHit:
    object: str
    path_length: int
    matched_label: str
    title: Optional[str]


@dataclass(frozen=True)
class SearchCluster:
    key: str
    hits: tuple


@dataclass(frozen=True)
class SearchResult:
    query: str
    clusters: tuple

    def objects(self) -> set:
        return {hit.object for cluster in self.clusters for hit in cluster.hits}


def _annotation_objects(store: TripleStore, concept_or_body: str) -> list[str]:
    """Objects targeted by non-rejected annotations whose body is the
    given resource."""
    found = []
    region_nodes = {t.subject for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_SOURCE)}
    for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_BODY, o=Iri(concept_or_body)):
        annotation = t.subject
        statuses = [
            str(s.object)
            for s in store.query_pattern(ns.GRAPH_ANNOTATIONS, s=annotation, p=_STATUS)
        ]
        if "rejected" in statuses:
            continue
        for target in store.query_pattern(ns.GRAPH_ANNOTATIONS, s=annotation, p=_TARGET):
            if isinstance(target.object, Iri) and target.object not in region_nodes:
                found.append(target.object.value)
    return found


def search(
    store: TripleStore,
    registry=None,
    query: str = "",
    language: Optional[str] = None,
    domain: Optional[str] = None,
    max_path: int = MAX_PATH_LENGTH,
) -> SearchResult:
    needle = fold_text(query.strip())
    if not needle:
        return SearchResult(query=query, clusters=())

    collection_objects = {
        t.subject.value for t in store.query_pattern(ns.GRAPH_COLLECTION, p=_TYPE, o=_CHO)
    }
    allowed = collection_objects
    if domain is not None and registry is not None:
        allowed = set(objects_in_domain(store, registry, domain)) & collection_objects

    # object -> best (path length, signature rank, matched label)
    best: dict = {}

    def offer(obj: str, length: int, signature: str, label: str) -> None:
        if obj not in allowed or length > max_path:
            return
        candidate = (length, _SIGNATURES.index(signature), label)
        if obj not in best or candidate < best[obj]:
            best[obj] = candidate

    matched_concepts: dict = {}
    textual_bodies = {
        t.subject for t in store.query_pattern(p=_TYPE, o=_TEXTUAL_BODY)
    }

    for predicate, role in (
        (_TITLE, "title"),
        (_DESCRIPTION, "description"),
        (_PREF, "concept"),
        (_ALT, "concept"),
        (_VALUE, "text"),
    ):
        for t in store.query_pattern(p=predicate):
            if not isinstance(t.object, Literal) or fold_text(t.object.lexical) != needle:
                continue
            label = t.object.lexical
            if role == "title":
                offer(t.subject.value, 0, "matched-title", label)
            elif role == "description":
                offer(t.subject.value, 0, "matched-description", label)
            elif role == "concept":
                previous = matched_concepts.get(t.subject.value)
                if previous is None or label < previous:
                    matched_concepts[t.subject.value] = label
            elif t.subject in textual_bodies:
                for obj in _annotation_objects(store, t.subject.value):
                    offer(obj, 2, "annotation-text", label)

    for concept, label in sorted(matched_concepts.items()):
        # walk down the hierarchy; objects hang one subject edge or one
        # annotation body+target edge pair below a concept
        frontier = {concept}
        seen = {concept}
        for depth in range(0, max_path):
            for node in sorted(frontier):
                if depth + 1 <= max_path:
                    signature = "subject-concept" if depth == 0 else "subject-concept-narrower"
                    for t in store.query_pattern(p=_SUBJECT, o=Iri(node)):
                        offer(t.subject.value, depth + 1, signature, label)
                if depth + 2 <= max_path:
                    signature = "annotation-body" if depth == 0 else "annotation-body-narrower"
                    for obj in _annotation_objects(store, node):
                        offer(obj, depth + 2, signature, label)
            next_frontier = set()
            for node in frontier:
                for child in narrower_of(store, node):
                    if child not in seen:
                        seen.add(child)
                        next_frontier.add(child)
            frontier = next_frontier
            if not frontier:
                break

    grouped: dict = {}
    for obj, (length, signature_rank, label) in best.items():
        grouped.setdefault(_SIGNATURES[signature_rank], []).append((obj, length, label))

    clusters = []
    for signature, members in grouped.items():
        hits = [
            SearchHit(
                object=obj,
                path_length=length,
                matched_label=label,
                title=object_title(store, obj, language),
            )
            for obj, length, label in members
        ]
        hits.sort(key=lambda h: (h.path_length, h.title or "", h.object))
        clusters.append(SearchCluster(key=signature, hits=tuple(hits)))
    clusters.sort(key=lambda c: (c.hits[0].path_length, _SIGNATURES.index(c.key)))
    return SearchResult(query=query, clusters=tuple(clusters))
