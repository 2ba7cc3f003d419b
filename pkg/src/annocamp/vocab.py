"""Concept schemes: multilingual labels, broader/narrower hierarchy,
branch subsets, and autocomplete suggestion.

A scheme is loaded from SKOS-shaped triples into the vocabulary graph and
is read-only afterwards. Hierarchies may be polyhierarchical (multiple
broader links) but never cyclic; the load rejects cycles outright.
Literal value lists (radio buttons and the like) reuse the autocomplete
path as ad-hoc label sets without minted concepts.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import ns
from .errors import LoadError, NotFoundError, ValidationError
from .rdfio import parse_turtle
from .store import Iri, Literal, Triple, TripleStore
from .util import find_cycle, fold_text

log = logging.getLogger(__name__)

_PREF = Iri(ns.SKOS_PREF_LABEL)
_ALT = Iri(ns.SKOS_ALT_LABEL)
_BROADER = Iri(ns.SKOS_BROADER)
_IN_SCHEME = Iri(ns.SKOS_IN_SCHEME)
_TYPE = Iri(ns.RDF_TYPE)
_CONCEPT = Iri(ns.SKOS_CONCEPT)
_SCHEME_TYPE = Iri(ns.SKOS_CONCEPT_SCHEME)


@dataclass(frozen=True)
class Concept:
    id: str
    preferred_labels: dict
    alternative_labels: dict
    broader: frozenset
    scheme: Optional[str]


@dataclass(frozen=True)
class ConceptScheme:
    id: str
    concepts: frozenset
    roots: frozenset


@dataclass(frozen=True)
class VocabularySubset:
    scheme: str
    seed: str
    members: frozenset


@dataclass(frozen=True)
class Suggestion:
    label: str
    concept: Optional[str]
    matched_label: str


def load_scheme(store: TripleStore, scheme: str, text: str, source: str = "<vocabulary>") -> ConceptScheme:
    """Register a concept scheme from Turtle/N-Triples text. Concepts in
    the file that carry no explicit scheme membership are assigned to
    `scheme`. Loading the same text twice is a no-op."""
    scheme_iri = Iri(scheme)
    triples = parse_turtle(text, source)

    subjects: dict[Iri, list[Triple]] = {}
    for t in triples:
        subjects.setdefault(t.subject, []).append(t)

    def has(subject: Iri, predicate: Iri, obj=None) -> bool:
        return any(
            t.predicate == predicate and (obj is None or t.object == obj)
            for t in subjects.get(subject, ())
        )

    concepts: set[Iri] = set()
    for subject, facts in subjects.items():
        if subject == scheme_iri:
            continue
        if has(subject, _TYPE, _CONCEPT) or has(subject, _PREF) or has(subject, _IN_SCHEME):
            concepts.add(subject)

    additions: list[Triple] = [Triple(scheme_iri, _TYPE, _SCHEME_TYPE)]
    for concept in concepts:
        if has(concept, _TYPE, _CONCEPT) and not has(concept, _PREF):
            raise LoadError(f"{source}: concept {concept.value} has no preferred label")
        if not has(concept, _IN_SCHEME):
            additions.append(Triple(concept, _IN_SCHEME, scheme_iri))
        if not has(concept, _TYPE, _CONCEPT):
            additions.append(Triple(concept, _TYPE, _CONCEPT))

    incoming = {c for c in concepts if has(c, _IN_SCHEME, scheme_iri)} | {
        c for c in concepts if not has(c, _IN_SCHEME)
    }
    existing = {
        t.subject for t in store.query_pattern(ns.GRAPH_VOCABULARY, p=_IN_SCHEME, o=scheme_iri)
    }
    in_scheme = {c.value for c in incoming} | {s.value for s in existing}

    # broader edges among this scheme's concepts, new and already stored
    adjacency: dict[str, set[str]] = {c: set() for c in in_scheme}
    for t in triples:
        if t.predicate == _BROADER and isinstance(t.object, Iri) and t.subject.value in adjacency:
            if t.object.value in adjacency:
                adjacency[t.subject.value].add(t.object.value)
            else:
                log.warning(
                    "%s: broader target %s of %s is outside scheme %s; kept as external link",
                    source,
                    t.object.value,
                    t.subject.value,
                    scheme,
                )
    for t in store.query_pattern(ns.GRAPH_VOCABULARY, p=_BROADER):
        if t.subject.value in adjacency and isinstance(t.object, Iri) and t.object.value in adjacency:
            adjacency[t.subject.value].add(t.object.value)

    cycle = find_cycle(adjacency)
    if cycle:
        raise LoadError(f"{source}: broader hierarchy contains a cycle: {' -> '.join(cycle)}")

    store.insert_triples(ns.GRAPH_VOCABULARY, triples + additions)
    return scheme_view(store, scheme)


def scheme_view(store: TripleStore, scheme: str) -> ConceptScheme:
    members = {
        t.subject.value
        for t in store.query_pattern(ns.GRAPH_VOCABULARY, p=_IN_SCHEME, o=Iri(scheme))
    }
    roots = {
        c
        for c in members
        if not any(
            isinstance(t.object, Iri) and t.object.value in members
            for t in store.query_pattern(ns.GRAPH_VOCABULARY, s=Iri(c), p=_BROADER)
        )
    }
    return ConceptScheme(id=scheme, concepts=frozenset(members), roots=frozenset(roots))


def concept_view(store: TripleStore, concept: str) -> Concept:
    subject = Iri(concept)
    preferred: dict[Optional[str], str] = {}
    alternatives: dict[Optional[str], list[str]] = {}
    broader: set[str] = set()
    schemes: list[str] = []
    for t in store.query_pattern(ns.GRAPH_VOCABULARY, s=subject):
        if t.predicate == _PREF and isinstance(t.object, Literal):
            tag = t.object.language
            if tag not in preferred or t.object.lexical < preferred[tag]:
                preferred[tag] = t.object.lexical
        elif t.predicate == _ALT and isinstance(t.object, Literal):
            alternatives.setdefault(t.object.language, []).append(t.object.lexical)
        elif t.predicate == _BROADER and isinstance(t.object, Iri):
            broader.add(t.object.value)
        elif t.predicate == _IN_SCHEME and isinstance(t.object, Iri):
            schemes.append(t.object.value)
    for values in alternatives.values():
        values.sort()
    return Concept(
        id=concept,
        preferred_labels=preferred,
        alternative_labels=alternatives,
        broader=frozenset(broader),
        scheme=min(schemes) if schemes else None,
    )


def narrower_of(store: TripleStore, concept: str) -> list[str]:
    return sorted(
        t.subject.value
        for t in store.query_pattern(ns.GRAPH_VOCABULARY, p=_BROADER, o=Iri(concept))
    )


def _require_in_scheme(store: TripleStore, scheme: str, concept: str) -> frozenset:
    view = scheme_view(store, scheme)
    if concept not in view.concepts:
        raise NotFoundError(f"concept {concept} is not in scheme {scheme}")
    return view.concepts


def branch_subset(store: TripleStore, scheme: str, seed: str) -> VocabularySubset:
    """The seed concept plus its full narrower-closure within the scheme."""
    members = _require_in_scheme(store, scheme, seed)
    reached = {seed}
    frontier = deque([seed])
    while frontier:
        current = frontier.popleft()
        for child in narrower_of(store, current):
            if child in members and child not in reached:
                reached.add(child)
                frontier.append(child)
    return VocabularySubset(scheme=scheme, seed=seed, members=frozenset(reached))


def generalization_steps(store: TripleStore, scheme: str, start: str, ancestor: str) -> Optional[int]:
    """Length of the shortest broader-chain from `start` up to `ancestor`;
    0 when identical, absent when `ancestor` is not above `start`."""
    _require_in_scheme(store, scheme, start)
    _require_in_scheme(store, scheme, ancestor)
    if start == ancestor:
        return 0
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        current, steps = frontier.popleft()
        for t in store.query_pattern(ns.GRAPH_VOCABULARY, s=Iri(current), p=_BROADER):
            if not isinstance(t.object, Iri):
                continue
            parent = t.object.value
            if parent == ancestor:
                return steps + 1
            if parent not in seen:
                seen.add(parent)
                frontier.append((parent, steps + 1))
    return None


def _labels_for_matching(
    preferred: dict, alternatives: dict, language: Optional[str]
) -> list[str]:
    """Labels considered by autocomplete: the requested language, falling
    back to English, then to the smallest tagged language; untagged labels
    always participate."""

    def tagged(tag: str) -> list[str]:
        out = []
        for lang, label in preferred.items():
            if lang is not None and lang.lower() == tag:
                out.append(label)
        for lang, labels in alternatives.items():
            if lang is not None and lang.lower() == tag:
                out.extend(labels)
        return out

    untagged = [label for lang, label in preferred.items() if lang is None]
    for lang, labels in alternatives.items():
        if lang is None:
            untagged.extend(labels)

    chosen: list[str] = []
    if language:
        chosen = tagged(language.lower())
    if not chosen:
        chosen = tagged("en")
    if not chosen:
        tags = sorted(
            {lang.lower() for lang in preferred if lang is not None}
            | {lang.lower() for lang in alternatives if lang is not None}
        )
        if tags:
            chosen = tagged(tags[0])
    return chosen + untagged


def autocomplete(
    store: TripleStore,
    source: Union[VocabularySubset, Sequence[str]],
    query: str,
    language: Optional[str] = None,
    limit: int = 10,
) -> list[Suggestion]:
    """Rank suggestions for a partial input: prefix matches first, then
    shorter labels, then lexicographic. Matching is case- and
    diacritics-insensitive."""
    if limit < 1:
        raise ValidationError("autocomplete limit must be at least 1")
    needle = fold_text(query.strip())
    if not needle:
        return []

    ranked: list[tuple[tuple, Suggestion]] = []
    if isinstance(source, VocabularySubset):
        for concept in source.members:
            view = concept_view(store, concept)
            best: Optional[tuple] = None
            best_label: Optional[str] = None
            for label in _labels_for_matching(view.preferred_labels, view.alternative_labels, language):
                folded = fold_text(label)
                position = folded.find(needle)
                if position < 0:
                    continue
                rank = (0 if position == 0 else 1, len(label), folded, label)
                if best is None or rank < best:
                    best = rank
                    best_label = label
            if best is not None and best_label is not None:
                display = store.label_of(concept, language) or best_label
                ranked.append((best + (concept,), Suggestion(display, concept, best_label)))
    else:
        for value in source:
            folded = fold_text(value)
            position = folded.find(needle)
            if position < 0:
                continue
            rank = (0 if position == 0 else 1, len(value), folded, value, value)
            ranked.append((rank, Suggestion(value, None, value)))

    ranked.sort(key=lambda pair: pair[0])
    return [suggestion for _, suggestion in ranked[:limit]]
