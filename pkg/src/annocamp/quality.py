"""Evaluation machinery: gold-standard matching, majority voting, the
review workflow, and campaign statistics.

Gold matching grades a concept annotation as exact when it equals a gold
concept and as generalized when the contributor's concept sits exactly
one broader step above a gold concept. Reported percentages are
integers apportioned by largest remainder so they always sum to 100 and
stay faithful to the underlying counts. Majority voting picks the
strictly most frequent value and declares ties inconclusive.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Mapping, Optional, Sequence

from . import ns
from .annotations import Annotation, get_annotation, list_annotations, set_status
from .collection import objects_in_domain
from .errors import ConflictError, LoadError, NotFoundError, ValidationError
from .store import Iri, Literal, Triple, TripleStore
from .util import format_utc, parse_utc, round1, utc_now
from .vocab import generalization_steps, scheme_view

_TYPE = Iri(ns.RDF_TYPE)
_DATETIME = Iri(ns.XSD_DATETIME)

_REVIEW = Iri(ns.C_REVIEW_DECISION)
_R_ANNOTATION = Iri(ns.P_ANNOTATION)
_R_REVIEWER = Iri(ns.P_REVIEWER)
_R_VERDICT = Iri(ns.P_VERDICT)
_CREATED = Iri(ns.DCT_CREATED)

_GOLD = Iri(ns.C_GOLD_ENTRY)
_G_OBJECT = Iri(ns.P_GOLD_OBJECT)
_G_FIELD = Iri(ns.P_GOLD_FIELD)
_G_CONCEPT = Iri(ns.P_GOLD_CONCEPT)
_G_SCHEME = Iri(ns.DCT_CONFORMS_TO)

VERDICTS = ("correct", "incorrect", "unable")
MATCH_KINDS = ("exact", "generalized", "no-match", "not-evaluable")
GOLD_CSV_HEADER = ["object_id", "field", "concept_iri"]


@dataclass(frozen=True)
class GoldStandard:
    scheme: str
    entries: dict  # (object id, field id) -> frozenset of concept iris


@dataclass(frozen=True)
class MatchVerdict:
    annotation: str
    kind: str
    detail: Optional[str] = None


@dataclass(frozen=True)
class GoldSummary:
    exact: int
    generalized: int
    no_match: int
    not_evaluable: int
    percentages: dict  # exact/generalized/no-match -> integer percent

    @property
    def evaluable(self) -> int:
        return self.exact + self.generalized + self.no_match


@dataclass(frozen=True)
class VoteOutcome:
    winner: Optional[str]
    tied: tuple

    @property
    def inconclusive(self) -> bool:
        return self.winner is None


@dataclass(frozen=True)
class ReviewDecision:
    annotation: str
    reviewer: str
    verdict: str
    created_at: datetime


@dataclass(frozen=True)
class StatusChange:
    annotation: str
    old: str
    new: str


@dataclass(frozen=True)
class CampaignStats:
    domain: str
    cells: dict  # (field, body kind, context) -> count
    total: int
    event_total: int
    online_total: int
    contributors: int
    event_contributors: int
    online_contributors: int
    event_average: float
    online_average: float
    per_user: dict


def apportion_percentages(counts: Mapping[str, int]) -> dict:
    """Integer percentages by largest remainder, summing to exactly 100
    (all zeros when the total is zero)."""
    total = sum(counts.values())
    if total == 0:
        return {key: 0 for key in counts}
    floors = {}
    remainders = {}
    for key, value in counts.items():
        share = 100 * value / total
        floors[key] = int(share)
        remainders[key] = share - int(share)
    shortfall = 100 - sum(floors.values())
    by_remainder = sorted(counts, key=lambda k: (-remainders[k], -counts[k], k))
    for key in by_remainder[:shortfall]:
        floors[key] += 1
    return floors


def majority_vote(votes: Iterable) -> VoteOutcome:
    """Strictly most frequent value wins; any tie for first place is
    inconclusive and lists the tied values."""
    tally = Counter(votes)
    if not tally:
        return VoteOutcome(winner=None, tied=())
    top = max(tally.values())
    leaders = sorted(value for value, count in tally.items() if count == top)
    if len(leaders) == 1:
        return VoteOutcome(winner=leaders[0], tied=())
    return VoteOutcome(winner=None, tied=tuple(leaders))


# -- gold standard -----------------------------------------------------------


def parse_gold_csv(text: str, scheme: str, store: TripleStore, source: str = "<gold>") -> GoldStandard:
    """Rows of object_id,field,concept_iri (header optional); every
    concept must belong to the scheme."""
    concepts = scheme_view(store, scheme).concepts
    entries: dict = {}
    reader = csv.reader(io.StringIO(text))
    for number, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if number == 1 and [cell.strip() for cell in row] == GOLD_CSV_HEADER:
            continue
        if len(row) != 3:
            raise LoadError(f"{source}:{number}: expected object_id,field,concept_iri")
        object_id, field_id, concept = (cell.strip() for cell in row)
        if not object_id or not field_id or not concept:
            raise LoadError(f"{source}:{number}: empty cell")
        if concept not in concepts:
            raise LoadError(f"{source}:{number}: concept {concept} is not in scheme {scheme}")
        key = (object_id, field_id)
        entries[key] = entries.get(key, frozenset()) | {concept}
    return GoldStandard(scheme=scheme, entries=entries)


def store_gold(store: TripleStore, gold: GoldStandard) -> int:
    triples = []
    for (object_id, field_id), concepts in gold.entries.items():
        for concept in concepts:
            entry = Iri(ns.gold_entry_iri(object_id, field_id, concept))
            triples += [
                Triple(entry, _TYPE, _GOLD),
                Triple(entry, _G_OBJECT, Iri(object_id)),
                Triple(entry, _G_FIELD, Literal(field_id)),
                Triple(entry, _G_CONCEPT, Iri(concept)),
                Triple(entry, _G_SCHEME, Iri(gold.scheme)),
            ]
    return store.insert_triples(ns.GRAPH_GOLD, triples)


def gold_from_store(store: TripleStore, scheme: str) -> GoldStandard:
    entries: dict = {}
    for t in store.query_pattern(ns.GRAPH_GOLD, p=_G_SCHEME, o=Iri(scheme)):
        entry = t.subject
        facts = {f.predicate.value: f.object for f in store.query_pattern(ns.GRAPH_GOLD, s=entry)}
        object_id = facts.get(ns.P_GOLD_OBJECT)
        field_id = facts.get(ns.P_GOLD_FIELD)
        concept = facts.get(ns.P_GOLD_CONCEPT)
        if object_id is None or field_id is None or concept is None:
            continue
        key = (object_id.value, str(field_id))
        entries[key] = entries.get(key, frozenset()) | {concept.value}
    return GoldStandard(scheme=scheme, entries=entries)


def evaluate_gold(
    store: TripleStore,
    annotations: Sequence[Annotation],
    gold: GoldStandard,
) -> tuple[list[MatchVerdict], GoldSummary]:
    """Grade every annotation against the gold standard. Text bodies,
    objects or fields outside the gold set, and unknown concepts are
    not-evaluable; percentages cover evaluable annotations only."""
    concepts = scheme_view(store, gold.scheme).concepts
    verdicts = []
    counts = {"exact": 0, "generalized": 0, "no-match": 0, "not-evaluable": 0}
    for annotation in annotations:
        verdict = _grade(store, annotation, gold, concepts)
        counts[verdict.kind] += 1
        verdicts.append(verdict)
    percentages = apportion_percentages(
        {kind: counts[kind] for kind in ("exact", "generalized", "no-match")}
    )
    summary = GoldSummary(
        exact=counts["exact"],
        generalized=counts["generalized"],
        no_match=counts["no-match"],
        not_evaluable=counts["not-evaluable"],
        percentages=percentages,
    )
    return verdicts, summary


def _grade(store, annotation: Annotation, gold: GoldStandard, concepts) -> MatchVerdict:
    if annotation.body.kind != "concept":
        return MatchVerdict(annotation.id, "not-evaluable", "text body")
    key = (annotation.object, annotation.field)
    if key not in gold.entries:
        return MatchVerdict(annotation.id, "not-evaluable", "outside the gold standard")
    concept = annotation.body.concept
    if concept not in concepts:
        return MatchVerdict(annotation.id, "not-evaluable", f"concept {concept} not in scheme")
    gold_concepts = gold.entries[key]
    if concept in gold_concepts:
        return MatchVerdict(annotation.id, "exact", concept)
    for gold_concept in sorted(gold_concepts):
        # generalized: the contributor's concept is one broader step above
        # the gold concept
        if generalization_steps(store, gold.scheme, gold_concept, concept) == 1:
            return MatchVerdict(annotation.id, "generalized", gold_concept)
    return MatchVerdict(annotation.id, "no-match", None)


# -- review workflow ----------------------------------------------------------


def review(store: TripleStore, annotation_id: str, reviewer: str, verdict: str) -> ReviewDecision:
    """One decision per (annotation, reviewer); the annotation must still
    be under review."""
    if verdict not in VERDICTS:
        raise ValidationError(f"verdict must be one of {VERDICTS}")
    annotation = get_annotation(store, annotation_id)
    if annotation.status != "submitted":
        raise ConflictError(f"annotation {annotation_id} is already {annotation.status}")
    node = Iri(ns.review_iri(annotation_id, reviewer))
    created = utc_now()
    with store.writing():
        if store.query_pattern(ns.GRAPH_ANNOTATIONS, s=node, p=_TYPE, o=_REVIEW):
            raise ConflictError(
                f"reviewer {reviewer} already decided on annotation {annotation_id}"
            )
        store.insert_triples(
            ns.GRAPH_ANNOTATIONS,
            [
                Triple(node, _TYPE, _REVIEW),
                Triple(node, _R_ANNOTATION, Iri(annotation_id)),
                Triple(node, _R_REVIEWER, Iri(reviewer)),
                Triple(node, _R_VERDICT, Literal(verdict)),
                Triple(node, _CREATED, Literal(format_utc(created), datatype=_DATETIME)),
            ],
        )
    return ReviewDecision(annotation=annotation_id, reviewer=reviewer, verdict=verdict, created_at=created)


def list_reviews(store: TripleStore, annotation_id: Optional[str] = None) -> list[ReviewDecision]:
    decisions = []
    for t in store.query_pattern(ns.GRAPH_ANNOTATIONS, p=_TYPE, o=_REVIEW):
        node = t.subject
        facts = {f.predicate.value: f.object for f in store.query_pattern(ns.GRAPH_ANNOTATIONS, s=node)}
        annotation = facts.get(ns.P_ANNOTATION)
        reviewer = facts.get(ns.P_REVIEWER)
        verdict = facts.get(ns.P_VERDICT)
        created = facts.get(ns.DCT_CREATED)
        if annotation is None or reviewer is None or verdict is None or created is None:
            continue
        if annotation_id is not None and annotation.value != annotation_id:
            continue
        decisions.append(
            ReviewDecision(
                annotation=annotation.value,
                reviewer=reviewer.value,
                verdict=str(verdict),
                created_at=parse_utc(str(created)),
            )
        )
    decisions.sort(key=lambda d: (d.created_at, d.annotation, d.reviewer))
    return decisions


POLICIES = ("single-reviewer", "majority")


def finalize_reviews(store: TripleStore, policy: str) -> list[StatusChange]:
    """Apply review decisions to annotation statuses. Single-reviewer
    takes the earliest decision; majority counts correct against
    incorrect, ignoring 'unable', and leaves ties submitted."""
    if policy not in POLICIES:
        raise ValidationError(f"policy must be one of {POLICIES}")
    decisions_by_annotation: dict = {}
    for decision in list_reviews(store):
        decisions_by_annotation.setdefault(decision.annotation, []).append(decision)

    changes = []
    for annotation_id in sorted(decisions_by_annotation):
        try:
            annotation = get_annotation(store, annotation_id)
        except NotFoundError:
            continue
        if annotation.status != "submitted":
            continue
        decisions = decisions_by_annotation[annotation_id]
        if policy == "single-reviewer":
            verdict = decisions[0].verdict
            winner = verdict if verdict in ("correct", "incorrect") else None
        else:
            countable = [d.verdict for d in decisions if d.verdict != "unable"]
            winner = majority_vote(countable).winner
        if winner == "correct":
            set_status(store, annotation_id, "accepted")
            changes.append(StatusChange(annotation_id, "submitted", "accepted"))
        elif winner == "incorrect":
            set_status(store, annotation_id, "rejected")
            changes.append(StatusChange(annotation_id, "submitted", "rejected"))
    return changes


# -- campaign statistics ------------------------------------------------------


def in_event_window(created_at: datetime, windows) -> bool:
    return any(start <= created_at <= end for start, end in windows)


def compute_stats(store: TripleStore, registry, domain_id: str) -> CampaignStats:
    """Counts split by field, body kind, and event/online context, plus
    per-user totals and the per-contributor event average."""
    config = registry.get(domain_id)
    members = set(objects_in_domain(store, registry, domain_id))
    annotations = [a for a in list_annotations(store) if a.object in members]

    cells: dict = {}
    per_user: dict = {}
    event_users: set = set()
    online_users: set = set()
    event_total = 0
    for annotation in annotations:
        context = "event" if in_event_window(annotation.created_at, config.event_windows) else "online"
        key = (annotation.field, annotation.body.kind, context)
        cells[key] = cells.get(key, 0) + 1
        per_user[annotation.user] = per_user.get(annotation.user, 0) + 1
        if context == "event":
            event_total += 1
            event_users.add(annotation.user)
        else:
            online_users.add(annotation.user)

    total = len(annotations)
    online_total = total - event_total
    return CampaignStats(
        domain=domain_id,
        cells=cells,
        total=total,
        event_total=event_total,
        online_total=online_total,
        contributors=len(per_user),
        event_contributors=len(event_users),
        online_contributors=len(online_users),
        event_average=round1(event_total / len(event_users)) if event_users else 0.0,
        online_average=round1(online_total / len(online_users)) if online_users else 0.0,
        per_user=per_user,
    )


def stats_csv(stats: CampaignStats) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(["field", "body_kind", "context", "count"])
    for (field_id, kind, context), count in sorted(stats.cells.items()):
        writer.writerow([field_id, kind, context, count])
    return buffer.getvalue()


def stats_table(stats: CampaignStats) -> str:
    rows = [("field", "body kind", "context", "count")]
    for (field_id, kind, context), count in sorted(stats.cells.items()):
        rows.append((field_id, kind, context, str(count)))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    lines += [
        "",
        f"total annotations: {stats.total} (event {stats.event_total}, online {stats.online_total})",
        f"contributors: {stats.contributors} (event {stats.event_contributors}, online {stats.online_contributors})",
        f"average per event contributor: {stats.event_average}",
        f"average per online contributor: {stats.online_average}",
    ]
    return "\n".join(lines) + "\n"
