"""Collection objects: ingest of metadata records, object views, and
domain-filtered object listings.

Each record becomes the aggregation structure the rest of the system
expects: the object proper (metadata), one image representation with
pixel dimensions, and an aggregation node linking the two. Records are
line-delimited JSON; a record without a usable image is skipped and
reported rather than ingested half-way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import ns
from .errors import LoadError, NotFoundError, ValidationError
from .store import Iri, Literal, Triple, TripleStore, choose_language

_TYPE = Iri(ns.RDF_TYPE)
_CHO = Iri(ns.EDM_PROVIDED_CHO)
_WEB_RESOURCE = Iri(ns.EDM_WEB_RESOURCE)
_AGGREGATION = Iri(ns.ORE_AGGREGATION)
_AGGREGATED = Iri(ns.EDM_AGGREGATED_CHO)
_SHOWN_BY = Iri(ns.EDM_IS_SHOWN_BY)
_TITLE = Iri(ns.DCT_TITLE)
_DESCRIPTION = Iri(ns.DCT_DESCRIPTION)
_SUBJECT = Iri(ns.DCT_SUBJECT)
_CREATOR = Iri(ns.DCT_CREATOR)
_IS_PART_OF = Iri(ns.DCT_IS_PART_OF)
_LOCATION = Iri(ns.P_LOCATION)
_WIDTH = Iri(ns.EBUCORE_WIDTH)
_HEIGHT = Iri(ns.EBUCORE_HEIGHT)
_IN_DOMAIN = Iri(ns.P_IN_DOMAIN)
_INTEGER = Iri(ns.XSD_INTEGER)


@dataclass(frozen=True)
class ImageInfo:
    id: str
    location: str
    width: int
    height: int


@dataclass(frozen=True)
class SubjectInfo:
    id: str
    label: Optional[str]


@dataclass(frozen=True)
class ObjectView:
    id: str
    title: str
    description: Optional[str]
    creator: Optional[str]
    image: Optional[ImageInfo]
    subjects: tuple
    annotation_count: int
    domains: tuple


@dataclass
class IngestReport:
    ingested: int = 0
    skipped: list = field(default_factory=list)


def _language_map(value, where: str) -> dict:
    if not isinstance(value, dict) or not value:
        raise ValueError(f"{where} must be a non-empty object of language-tagged strings")
    out = {}
    for tag, text in value.items():
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"{where}[{tag}] must be a non-empty string")
        out[tag] = text
    return out


def _record_triples(record: dict, domain: Optional[str]) -> list[Triple]:
    object_iri = Iri(str(record["id"]))
    titles = _language_map(record["title"], "title")

    image = record.get("image")
    if not isinstance(image, dict):
        raise ValueError("record has no image")
    location = image.get("path") or image.get("url")
    width = image.get("width")
    height = image.get("height")
    if not isinstance(location, str) or not location.strip():
        raise ValueError("image needs a path")
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise ValueError("image needs positive integer width and height")

    image_iri = Iri(ns.image_iri(object_iri.value, location))
    aggregation_iri = Iri(ns.aggregation_iri(object_iri.value))

    triples = [
        Triple(object_iri, _TYPE, _CHO),
        Triple(aggregation_iri, _TYPE, _AGGREGATION),
        Triple(aggregation_iri, _AGGREGATED, object_iri),
        Triple(aggregation_iri, _SHOWN_BY, image_iri),
        Triple(image_iri, _TYPE, _WEB_RESOURCE),
        Triple(image_iri, _LOCATION, Literal(location)),
        Triple(image_iri, _WIDTH, Literal(str(width), datatype=_INTEGER)),
        Triple(image_iri, _HEIGHT, Literal(str(height), datatype=_INTEGER)),
    ]
    for tag, text in titles.items():
        triples.append(Triple(object_iri, _TITLE, Literal(text, language=tag)))
    if record.get("description"):
        for tag, text in _language_map(record["description"], "description").items():
            triples.append(Triple(object_iri, _DESCRIPTION, Literal(text, language=tag)))
    for subject in record.get("subjects", ()):
        triples.append(Triple(object_iri, _SUBJECT, Iri(str(subject))))
    creator = record.get("creator")
    if creator:
        triples.append(Triple(object_iri, _CREATOR, Literal(str(creator))))
    source = record.get("source")
    if source:
        triples.append(Triple(object_iri, _IS_PART_OF, Iri(str(source))))
    if domain:
        triples.append(Triple(object_iri, _IN_DOMAIN, Iri(ns.domain_iri(domain))))
    return triples


def ingest_objects(
    store: TripleStore,
    text: str,
    domain: Optional[str] = None,
    source: str = "<collection>",
) -> IngestReport:
    """Ingest line-delimited JSON records; skips and reports records that
    lack a usable image or otherwise violate the record contract.
    Re-ingesting the same file is a no-op."""
    report = IngestReport()
    triples: list[Triple] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{source}:{number}: not valid JSON: {exc}") from exc
        if not isinstance(record, dict) or "id" not in record or "title" not in record:
            report.skipped.append((number, "record needs id and title"))
            continue
        try:
            triples.extend(_record_triples(record, domain))
        except (ValueError, KeyError, TypeError, ValidationError) as exc:
            report.skipped.append((number, str(exc)))
            continue
        report.ingested += 1
    store.insert_triples(ns.GRAPH_COLLECTION, triples)
    return report


def object_exists(store: TripleStore, object_id: str) -> bool:
    return bool(store.query_pattern(ns.GRAPH_COLLECTION, s=Iri(object_id), p=_TYPE, o=_CHO))


def all_objects(store: TripleStore) -> list[str]:
    return sorted(
        t.subject.value for t in store.query_pattern(ns.GRAPH_COLLECTION, p=_TYPE, o=_CHO)
    )


def object_titles(store: TripleStore, object_id: str) -> dict:
    titles = {}
    for t in store.query_pattern(ns.GRAPH_COLLECTION, s=Iri(object_id), p=_TITLE):
        if isinstance(t.object, Literal):
            tag = t.object.language
            if tag not in titles or t.object.lexical < titles[tag]:
                titles[tag] = t.object.lexical
    return titles


def object_title(store: TripleStore, object_id: str, language: Optional[str] = None) -> Optional[str]:
    return choose_language(object_titles(store, object_id), language)


def image_of(store: TripleStore, object_id: str) -> Optional[ImageInfo]:
    aggregations = sorted(
        t.subject.value
        for t in store.query_pattern(ns.GRAPH_COLLECTION, p=_AGGREGATED, o=Iri(object_id))
    )
    for aggregation in aggregations:
        shown = sorted(
            t.object.value
            for t in store.query_pattern(ns.GRAPH_COLLECTION, s=Iri(aggregation), p=_SHOWN_BY)
            if isinstance(t.object, Iri)
        )
        for image in shown:
            facts = {
                t.predicate.value: t.object
                for t in store.query_pattern(ns.GRAPH_COLLECTION, s=Iri(image))
            }
            location = facts.get(ns.P_LOCATION)
            width = facts.get(ns.EBUCORE_WIDTH)
            height = facts.get(ns.EBUCORE_HEIGHT)
            if location is None or width is None or height is None:
                continue
            return ImageInfo(
                id=image,
                location=str(location),
                width=int(str(width)),
                height=int(str(height)),
            )
    return None


def get_object(store: TripleStore, object_id: str, language: Optional[str] = None) -> ObjectView:
    """Object view with labels resolved to the requested language and a
    live annotation count."""
    subject = Iri(object_id)
    if not object_exists(store, object_id):
        raise NotFoundError(f"unknown object {object_id}")

    descriptions: dict = {}
    subjects: list[str] = []
    creator = None
    domains: list[str] = []
    for t in store.query_pattern(ns.GRAPH_COLLECTION, s=subject):
        if t.predicate == _DESCRIPTION and isinstance(t.object, Literal):
            tag = t.object.language
            if tag not in descriptions or t.object.lexical < descriptions[tag]:
                descriptions[tag] = t.object.lexical
        elif t.predicate == _SUBJECT and isinstance(t.object, Iri):
            subjects.append(t.object.value)
        elif t.predicate == _CREATOR and isinstance(t.object, Literal):
            creator = t.object.lexical
        elif t.predicate == _IN_DOMAIN and isinstance(t.object, Iri):
            domains.append(t.object.value.removeprefix(ns.ANC + "domain:"))

    count = len(
        {
            t.subject.value
            for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=Iri(ns.OA_HAS_TARGET), o=subject)
        }
    )
    title = object_title(store, object_id, language)
    return ObjectView(
        id=object_id,
        title=title if title is not None else object_id,
        description=choose_language(descriptions, language),
        creator=creator,
        image=image_of(store, object_id),
        subjects=tuple(
            SubjectInfo(s, store.label_of(s, language)) for s in sorted(set(subjects))
        ),
        annotation_count=count,
        domains=tuple(sorted(domains)),
    )


def objects_bound(store: TripleStore, domain_id: str) -> set:
    return {
        t.subject.value
        for t in store.query_pattern(
            ns.GRAPH_COLLECTION, p=_IN_DOMAIN, o=Iri(ns.domain_iri(domain_id))
        )
    }


def objects_in_domain(store: TripleStore, registry, domain_id: str) -> list[str]:
    """Objects bound to the domain or, recursively, any of its sub-domains.
    `registry` supplies the sub-domain tree."""
    found: set = set()
    for member in registry.subtree_ids(domain_id):
        found |= objects_bound(store, member)
    return sorted(found)
