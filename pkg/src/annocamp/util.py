"""Small shared helpers: UTC timestamps, text folding, reporting rounding,
cycle detection over id graphs."""

from __future__ import annotations

import unicodedata
from datetime import datetime, timezone
from decimal import Decimal, ROUND_HALF_UP
from typing import Iterable, Optional

from .errors import ValidationError


def utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    raw = text.strip()
    # datetime.fromisoformat in 3.10 rejects the Z suffix
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        value = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ValidationError(f"not an ISO-8601 timestamp: {text!r}") from exc
    if value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def format_utc(value: datetime) -> str:
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    value = value.astimezone(timezone.utc)
    if value.microsecond:
        return value.strftime("%Y-%m-%dT%H:%M:%S.%f").rstrip("0") + "Z"
    return value.strftime("%Y-%m-%dT%H:%M:%SZ")


def fold_text(text: str) -> str:
    """Case-insensitive, diacritics-insensitive comparison key (e ≈ é)."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return stripped.casefold()


def round1(value: float) -> float:
    """Round half up to one decimal, for human-facing averages."""
    return float(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def find_cycle(adjacency: dict) -> Optional[list]:
    """First cycle in a directed graph of ids, as the node sequence
    a -> ... -> a, or None. Edges to ids outside the mapping are ignored.
    Deterministic: nodes and edges are visited in sorted order."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in adjacency}
    parent: dict = {}
    for start in sorted(adjacency):
        if color[start] != WHITE:
            continue
        color[start] = GRAY
        parent[start] = None
        stack: list[tuple] = [(start, iter(sorted(adjacency[start])))]
        while stack:
            node, children = stack[-1]
            advanced = False
            for child in children:
                if child not in color:
                    continue
                if color[child] == GRAY:
                    cycle = [child, node]
                    walk = parent[node]
                    while walk is not None and cycle[-1] != child:
                        cycle.append(walk)
                        walk = parent[walk]
                    cycle.reverse()
                    return cycle
                if color[child] == WHITE:
                    color[child] = GRAY
                    parent[child] = node
                    stack.append((child, iter(sorted(adjacency[child]))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None
