"""Annotations: contributor statements about objects, optionally scoped
to an image region, stored in the Web Annotation triple shape.

An annotation is immutable once submitted except for its review status,
which moves from submitted to accepted or rejected exactly once. The
text the contributor typed is always retained next to the chosen
concept. Exports regenerate the stored triple shape, so a triple export
parses back into the identical annotation set.
"""

from __future__ import annotations

import csv
import io
import re
import uuid
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Optional, Sequence
from urllib.parse import unquote

from . import ns
from .collection import image_of, object_exists, objects_in_domain
from .errors import ConflictError, NotFoundError, UsageError, ValidationError
from .rdfio import write_ntriples
from .store import Iri, Literal, Triple, TripleStore
from .util import format_utc, parse_utc, utc_now

_TYPE = Iri(ns.RDF_TYPE)
_VALUE = Iri(ns.RDF_VALUE)
_ANNOTATION = Iri(ns.OA_ANNOTATION)
_HAS_TARGET = Iri(ns.OA_HAS_TARGET)
_HAS_BODY = Iri(ns.OA_HAS_BODY)
_HAS_SOURCE = Iri(ns.OA_HAS_SOURCE)
_HAS_SELECTOR = Iri(ns.OA_HAS_SELECTOR)
_FRAGMENT_SELECTOR = Iri(ns.OA_FRAGMENT_SELECTOR)
_TEXTUAL_BODY = Iri(ns.OA_TEXTUAL_BODY)
_CONFORMS_TO = Iri(ns.DCT_CONFORMS_TO)
_CREATOR = Iri(ns.DCT_CREATOR)
_CREATED = Iri(ns.DCT_CREATED)
_FIELD = Iri(ns.P_FIELD)
_ENTERED = Iri(ns.P_ENTERED_TEXT)
_STATUS = Iri(ns.P_STATUS)
_DATETIME = Iri(ns.XSD_DATETIME)
_MEDIA_FRAGS = Iri(ns.MEDIA_FRAGS)

STATUSES = ("submitted", "accepted", "rejected")
CSV_HEADER = [
    "annotation_id",
    "object_id",
    "field",
    "body_kind",
    "concept_iri",
    "label",
    "entered_text",
    "x",
    "y",
    "w",
    "h",
    "user",
    "created_at",
    "status",
]

_XYWH_RE = re.compile(r"^xywh=(\d+),(\d+),(\d+),(\d+)$")


@dataclass(frozen=True)
class RegionSelector:
    image: str
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValidationError(f"region {name} must be an integer")
        if self.x < 0 or self.y < 0:
            raise ValidationError("region x and y must be non-negative")
        if self.w < 1 or self.h < 1:
            raise ValidationError("region width and height must be at least 1")


@dataclass(frozen=True)
class AnnotationBody:
    kind: str
    concept: Optional[str]
    text: Optional[str]
    entered_text: str

    def __post_init__(self) -> None:
        if self.kind == "concept":
            if not self.concept or self.text is not None:
                raise ValidationError("concept bodies carry exactly a concept")
        elif self.kind == "text":
            if not self.text or self.concept is not None:
                raise ValidationError("text bodies carry exactly a text")
        else:
            raise ValidationError(f"unknown body kind {self.kind!r}")
        if not self.entered_text:
            raise ValidationError("body must retain the entered text")


@dataclass(frozen=True)
class Annotation:
    id: str
    object: str
    region: Optional[RegionSelector]
    field: str
    body: AnnotationBody
    user: str
    created_at: datetime
    status: str


def submit_annotation(
    store: TripleStore,
    registry,
    *,
    user: str,
    domain: str,
    object_id: str,
    field_id: str,
    body_kind: str,
    concept: Optional[str] = None,
    text: Optional[str] = None,
    entered_text: Optional[str] = None,
    region: Optional[dict] = None,
    created_at: Optional[datetime] = None,
) -> Annotation:
    """Validate against the field definition and persist one annotation
    with status submitted. The write is a single atomic store insert, so
    the annotation is immediately visible to search and task ranking."""
    spec = registry.resolve_field(domain, field_id)
    if not object_exists(store, object_id):
        raise NotFoundError(f"unknown object {object_id}")
    if object_id not in objects_in_domain(store, registry, domain):
        raise ValidationError(f"object {object_id} is not part of domain {domain!r}")

    selector = _validate_region(store, spec, object_id, region)
    body = _validate_body(spec, body_kind, concept, text, entered_text)

    annotation = Annotation(
        id=ns.annotation_iri(uuid.uuid4().hex),
        object=object_id,
        region=selector,
        field=field_id,
        body=body,
        user=user,
        created_at=created_at or utc_now(),
        status="submitted",
    )
    store.insert_triples(ns.GRAPH_ANNOTATIONS, annotation_triples(annotation))
    return annotation


def _validate_region(store, spec, object_id: str, region: Optional[dict]) -> Optional[RegionSelector]:
    if spec.scope == "region":
        if region is None:
            raise ValidationError(f"field {spec.id!r} is region-scoped and needs a region")
    elif region is not None:
        raise ValidationError(f"field {spec.id!r} is about the whole object; no region allowed")
    if region is None:
        return None

    image = image_of(store, object_id)
    if image is None:
        raise ValidationError(f"object {object_id} has no image to place a region on")
    try:
        selector = RegionSelector(
            image=image.id,
            x=region["x"],
            y=region["y"],
            w=region["w"],
            h=region["h"],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError("region needs integer x, y, w, h") from exc
    if selector.x + selector.w > image.width or selector.y + selector.h > image.height:
        raise ValidationError(
            f"region {selector.x},{selector.y},{selector.w},{selector.h} exceeds "
            f"the {image.width}x{image.height} image"
        )
    return selector


def _validate_body(spec, kind: str, concept, text, entered_text) -> AnnotationBody:
    if kind == "concept":
        if spec.subset is None:
            raise ValidationError(f"field {spec.id!r} does not take concepts")
        if not concept:
            raise ValidationError("concept bodies need a concept")
        if concept not in spec.subset.members:
            raise ValidationError(
                f"concept {concept} is outside the field's subset rooted at {spec.subset.seed}"
            )
        return AnnotationBody(
            kind="concept",
            concept=concept,
            text=None,
            entered_text=entered_text or concept,
        )
    if kind == "text":
        if not text or not text.strip():
            raise ValidationError("text bodies need a non-empty text")
        if spec.field_type in ("radio", "checkbox") and text not in (spec.values or ()):
            raise ValidationError(
                f"value {text!r} is not one of the field's options {list(spec.values or ())}"
            )
        return AnnotationBody(kind="text", concept=None, text=text, entered_text=entered_text or text)
    raise ValidationError(f"unknown body kind {kind!r}")


def annotation_triples(annotation: Annotation) -> list[Triple]:
    """The stored Web Annotation shape; also the triple export shape."""
    subject = Iri(annotation.id)
    triples = [
        Triple(subject, _TYPE, _ANNOTATION),
        Triple(subject, _HAS_TARGET, Iri(annotation.object)),
        Triple(subject, _FIELD, Literal(annotation.field)),
        Triple(subject, _ENTERED, Literal(annotation.body.entered_text)),
        Triple(subject, _CREATOR, Iri(annotation.user)),
        Triple(subject, _CREATED, Literal(format_utc(annotation.created_at), datatype=_DATETIME)),
        Triple(subject, _STATUS, Literal(annotation.status)),
    ]
    if annotation.region is not None:
        target = Iri(annotation.id + "#target")
        selector = Iri(annotation.id + "#selector")
        region = annotation.region
        triples += [
            Triple(subject, _HAS_TARGET, target),
            Triple(target, _HAS_SOURCE, Iri(region.image)),
            Triple(target, _HAS_SELECTOR, selector),
            Triple(selector, _TYPE, _FRAGMENT_SELECTOR),
            Triple(selector, _CONFORMS_TO, _MEDIA_FRAGS),
            Triple(selector, _VALUE, Literal(f"xywh={region.x},{region.y},{region.w},{region.h}")),
        ]
    if annotation.body.kind == "concept":
        triples.append(Triple(subject, _HAS_BODY, Iri(annotation.body.concept)))
    else:
        body = Iri(annotation.id + "#body")
        triples += [
            Triple(subject, _HAS_BODY, body),
            Triple(body, _TYPE, _TEXTUAL_BODY),
            Triple(body, _VALUE, Literal(annotation.body.text)),
        ]
    return triples


def annotations_from_triples(triples: Iterable[Triple]) -> list[Annotation]:
    """Rebuild annotation records from their triple shape (the inverse of
    annotation_triples over a set of annotations)."""
    outgoing: dict[Iri, list[Triple]] = {}
    for t in triples:
        outgoing.setdefault(t.subject, []).append(t)

    def values(subject: Iri, predicate: Iri) -> list:
        return [t.object for t in outgoing.get(subject, ()) if t.predicate == predicate]

    annotations = []
    for subject, facts in outgoing.items():
        if not any(t.predicate == _TYPE and t.object == _ANNOTATION for t in facts):
            continue
        object_id = None
        region = None
        for target in values(subject, _HAS_TARGET):
            if not isinstance(target, Iri):
                continue
            sources = values(target, _HAS_SOURCE)
            if sources:
                selectors = values(target, _HAS_SELECTOR)
                fragment = next(
                    (str(v) for s in selectors for v in values(s, _VALUE)), None
                )
                match = _XYWH_RE.match(fragment or "")
                if match is None:
                    raise ValidationError(f"annotation {subject.value} has a malformed selector")
                region = RegionSelector(
                    image=sources[0].value,
                    x=int(match.group(1)),
                    y=int(match.group(2)),
                    w=int(match.group(3)),
                    h=int(match.group(4)),
                )
            else:
                object_id = target.value
        bodies = values(subject, _HAS_BODY)
        body = None
        for candidate in bodies:
            if isinstance(candidate, Iri):
                texts = values(candidate, _VALUE)
                entered = next((str(v) for v in values(subject, _ENTERED)), "")
                if any(t.predicate == _TYPE and t.object == _TEXTUAL_BODY for t in outgoing.get(candidate, ())):
                    body = AnnotationBody("text", None, str(texts[0]), entered or str(texts[0]))
                else:
                    body = AnnotationBody("concept", candidate.value, None, entered or candidate.value)
        field_id = next((str(v) for v in values(subject, _FIELD)), None)
        creator = next((v.value for v in values(subject, _CREATOR) if isinstance(v, Iri)), None)
        created = next((str(v) for v in values(subject, _CREATED)), None)
        status = next((str(v) for v in values(subject, _STATUS)), None)
        if object_id is None or body is None or field_id is None or creator is None or created is None:
            raise ValidationError(f"annotation {subject.value} is incomplete")
        if status not in STATUSES:
            raise ValidationError(f"annotation {subject.value} has unknown status {status!r}")
        annotations.append(
            Annotation(
                id=subject.value,
                object=object_id,
                region=region,
                field=field_id,
                body=body,
                user=creator,
                created_at=parse_utc(created),
                status=status,
            )
        )
    annotations.sort(key=lambda a: (a.created_at, a.id))
    return annotations


def list_annotations(
    store: TripleStore,
    *,
    object_id: Optional[str] = None,
    user: Optional[str] = None,
    field: Optional[str] = None,
    status: Optional[str] = None,
    since: Optional[datetime] = None,
    until: Optional[datetime] = None,
) -> list[Annotation]:
    """All annotations matching every given filter, ordered by creation
    time then id."""
    everything = annotations_from_triples(store.query_pattern(ns.GRAPH_ANNOTATIONS))
    out = []
    for annotation in everything:
        if object_id is not None and annotation.object != object_id:
            continue
        if user is not None and annotation.user != user:
            continue
        if field is not None and annotation.field != field:
            continue
        if status is not None and annotation.status != status:
            continue
        if since is not None and annotation.created_at < since:
            continue
        if until is not None and annotation.created_at >= until:
            continue
        out.append(annotation)
    return out


def get_annotation(store: TripleStore, annotation_id: str) -> Annotation:
    facts = store.query_pattern(ns.GRAPH_ANNOTATIONS, s=Iri(annotation_id))
    if not facts:
        raise NotFoundError(f"unknown annotation {annotation_id}")
    related: list[Triple] = list(facts)
    for t in facts:
        if isinstance(t.object, Iri):
            related.extend(store.query_pattern(ns.GRAPH_ANNOTATIONS, s=t.object))
        # selector hangs one level deeper than the target
    for t in list(related):
        if t.predicate == _HAS_SELECTOR and isinstance(t.object, Iri):
            related.extend(store.query_pattern(ns.GRAPH_ANNOTATIONS, s=t.object))
    rebuilt = annotations_from_triples(related)
    if not rebuilt:
        raise NotFoundError(f"unknown annotation {annotation_id}")
    return rebuilt[0]


def set_status(store: TripleStore, annotation_id: str, new_status: str) -> Annotation:
    """The only permitted mutation: submitted -> accepted | rejected."""
    if new_status not in ("accepted", "rejected"):
        raise ValidationError(f"cannot move an annotation to status {new_status!r}")
    subject = Iri(annotation_id)
    with store.writing():
        current = [
            t
            for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, s=subject, p=_STATUS)
            if isinstance(t.object, Literal)
        ]
        if not current:
            raise NotFoundError(f"unknown annotation {annotation_id}")
        old = current[0].object.lexical
        if old != "submitted":
            raise ConflictError(f"annotation {annotation_id} is already {old}")
        store.remove_triples(ns.GRAPH_ANNOTATIONS, current)
        store.insert_triples(ns.GRAPH_ANNOTATIONS, [Triple(subject, _STATUS, Literal(new_status))])
    return get_annotation(store, annotation_id)


def login_of(user_iri: str) -> str:
    prefix = ns.ANC + "user:"
    if user_iri.startswith(prefix):
        return unquote(user_iri[len(prefix):])
    return user_iri


def export_annotations(
    store: TripleStore,
    fmt: str,
    language: Optional[str] = None,
    **filters,
) -> str:
    """`triples` (N-Triples, Web Annotation shape) or `spreadsheet` (CSV,
    RFC 4180). Accepts the short format names nt and csv as well."""
    annotations = list_annotations(store, **filters)
    if fmt in ("triples", "nt"):
        triples = [t for a in annotations for t in annotation_triples(a)]
        return write_ntriples(triples)
    if fmt in ("spreadsheet", "csv"):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(CSV_HEADER)
        for a in annotations:
            label = ""
            if a.body.kind == "concept" and a.body.concept:
                label = store.label_of(a.body.concept, language) or ""
            elif a.body.kind == "text":
                label = a.body.text or ""
            region = a.region
            writer.writerow(
                [
                    a.id,
                    a.object,
                    a.field,
                    a.body.kind,
                    a.body.concept or "",
                    label,
                    a.body.entered_text,
                    region.x if region else "",
                    region.y if region else "",
                    region.w if region else "",
                    region.h if region else "",
                    login_of(a.user),
                    format_utc(a.created_at),
                    a.status,
                ]
            )
        return buffer.getvalue()
    raise UsageError(f"unknown export format {fmt!r}; use triples|nt or spreadsheet|csv")
