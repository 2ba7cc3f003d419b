"""In-memory triple store with named graphs, permutation indexes, and
text snapshots.

Everything the platform knows — collection objects, vocabularies,
annotations, users — lives here as triples grouped into named graphs.
Graphs have set semantics. Three permutation indexes (subject-, predicate-
and object-first) back the access patterns of the higher layers: label
lookup, hierarchy traversal, and annotation listing.

Reads run concurrently; writes are serialized and block until no read is
in flight. Snapshots are sorted N-Quads text so that consecutive states
diff cleanly under version control.
"""

from __future__ import annotations

import os
import re
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import LoadError, ValidationError
from .ns import SKOS_PREF_LABEL

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_LANG_RE = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not isinstance(self.value, str) or not self.value:
            raise ValidationError(f"not an absolute IRI: {self.value!r}")
        if not _SCHEME_RE.match(self.value):
            raise ValidationError(f"not an absolute IRI (missing scheme): {self.value!r}")
        if any(ch in '<>"{}|^`\\' or ord(ch) <= 0x20 for ch in self.value):
            raise ValidationError(f"forbidden character in IRI: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    language: Optional[str] = None
    datatype: Optional[Iri] = None

    def __post_init__(self) -> None:
        if not isinstance(self.lexical, str):
            raise ValidationError(f"literal lexical form must be a string: {self.lexical!r}")
        if self.language is not None and self.datatype is not None:
            raise ValidationError("literal cannot carry both a language tag and a datatype")
        if self.language is not None and not _LANG_RE.match(self.language):
            raise ValidationError(f"malformed language tag: {self.language!r}")
        if self.lexical == "" and self.datatype is None:
            raise ValidationError("empty literal requires a datatype")

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, Literal]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, Iri):
            raise ValidationError(f"triple subject must be an IRI: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise ValidationError(f"triple predicate must be an IRI: {self.predicate!r}")
        if not isinstance(self.object, (Iri, Literal)):
            raise ValidationError(f"triple object must be an IRI or literal: {self.object!r}")

    def sort_key(self) -> tuple[str, str, str]:
        return (term_text(self.subject), term_text(self.predicate), term_text(self.object))


_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def term_text(term: Term) -> str:
    """Canonical N-Triples serialization of a term; doubles as sort key."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    body = f'"{escape_string(term.lexical)}"'
    if term.language is not None:
        return f"{body}@{term.language}"
    if term.datatype is not None:
        return f"{body}^^<{term.datatype.value}>"
    return body


def choose_language(options: Mapping[Optional[str], str], requested: Optional[str] = None) -> Optional[str]:
    """Pick a language-keyed string: requested tag, else English, else the
    value under the lexicographically smallest tag. Tags compare
    case-insensitively; an untagged entry sorts as the empty tag."""
    folded: dict[str, str] = {}
    for tag, value in options.items():
        key = (tag or "").lower()
        if key not in folded or value < folded[key]:
            folded[key] = value
    if not folded:
        return None
    if requested and requested.lower() in folded:
        return folded[requested.lower()]
    if "en" in folded:
        return folded["en"]
    return folded[min(folded)]


class RWLock:
    """Many concurrent readers, one writer; the owning thread may nest."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer: Optional[int] = None
        self._depth = 0

    @contextmanager
    def read(self) -> Iterator[None]:
        ident = threading.get_ident()
        with self._cond:
            if self._writer == ident:
                nested = True
                self._depth += 1
            else:
                nested = False
                while self._writer is not None:
                    self._cond.wait()
                self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                if nested:
                    self._depth -= 1
                else:
                    self._readers -= 1
                    if self._readers == 0:
                        self._cond.notify_all()

    @contextmanager
    def write(self) -> Iterator[None]:
        ident = threading.get_ident()
        with self._cond:
            if self._writer == ident:
                self._depth += 1
            else:
                while self._writer is not None or self._readers > 0:
                    self._cond.wait()
                self._writer = ident
                self._depth = 1
        try:
            yield
        finally:
            with self._cond:
                self._depth -= 1
                if self._depth == 0:
                    self._writer = None
                    self._cond.notify_all()


class _Graph:
    __slots__ = ("triples", "by_s", "by_p", "by_o")

    def __init__(self) -> None:
        self.triples: set[Triple] = set()
        self.by_s: dict[Iri, set[Triple]] = {}
        self.by_p: dict[Iri, set[Triple]] = {}
        self.by_o: dict[Term, set[Triple]] = {}

    def add(self, triple: Triple) -> bool:
        if triple in self.triples:
            return False
        self.triples.add(triple)
        self.by_s.setdefault(triple.subject, set()).add(triple)
        self.by_p.setdefault(triple.predicate, set()).add(triple)
        self.by_o.setdefault(triple.object, set()).add(triple)
        return True

    def discard(self, triple: Triple) -> bool:
        if triple not in self.triples:
            return False
        self.triples.discard(triple)
        for index, key in ((self.by_s, triple.subject), (self.by_p, triple.predicate), (self.by_o, triple.object)):
            bucket = index.get(key)
            if bucket is not None:
                bucket.discard(triple)
                if not bucket:
                    del index[key]
        return True

    def match(self, s: Optional[Iri], p: Optional[Iri], o: Optional[Term]) -> Iterator[Triple]:
        # start from the most selective bound position
        if s is not None:
            candidates: Iterable[Triple] = self.by_s.get(s, ())
        elif o is not None:
            candidates = self.by_o.get(o, ())
        elif p is not None:
            candidates = self.by_p.get(p, ())
        else:
            candidates = self.triples
        for t in candidates:
            if s is not None and t.subject != s:
                continue
            if p is not None and t.predicate != p:
                continue
            if o is not None and t.object != o:
                continue
            yield t


SNAPSHOT_HEADER = "# annocamp-store 1"


class TripleStore:
    """Thread-safe store of named graphs with deterministic query results."""

    def __init__(self) -> None:
        self._lock = RWLock()
        self._graphs: dict[Iri, _Graph] = {}

    # -- locking hooks for compound operations ------------------------------

    @contextmanager
    def reading(self) -> Iterator[None]:
        with self._lock.read():
            yield

    @contextmanager
    def writing(self) -> Iterator[None]:
        with self._lock.write():
            yield

    # -- mutation ------------------------------------------------------------

    def insert_triples(self, graph: Union[Iri, str], triples: Sequence[Triple]) -> int:
        name = self._as_iri(graph)
        batch = list(triples)
        for t in batch:
            if not isinstance(t, Triple):
                raise ValidationError(f"not a triple: {t!r}")
        with self._lock.write():
            bucket = self._graphs.get(name)
            if bucket is None:
                bucket = self._graphs.setdefault(name, _Graph())
            return sum(1 for t in batch if bucket.add(t))

    def remove_triples(self, graph: Union[Iri, str], triples: Sequence[Triple]) -> int:
        name = self._as_iri(graph)
        batch = list(triples)
        with self._lock.write():
            bucket = self._graphs.get(name)
            if bucket is None:
                return 0
            removed = sum(1 for t in batch if bucket.discard(t))
            if not bucket.triples:
                del self._graphs[name]
            return removed

    # -- queries -------------------------------------------------------------

    def query_pattern(
        self,
        graph: Optional[Union[Iri, str]] = None,
        s: Optional[Union[Iri, str]] = None,
        p: Optional[Union[Iri, str]] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        s_term = self._as_iri(s) if s is not None else None
        p_term = self._as_iri(p) if p is not None else None
        with self._lock.read():
            if graph is not None:
                bucket = self._graphs.get(self._as_iri(graph))
                buckets = [bucket] if bucket is not None else []
            else:
                buckets = list(self._graphs.values())
            found = {t for b in buckets for t in b.match(s_term, p_term, o)}
        return sorted(found, key=Triple.sort_key)

    def count(self, graph: Optional[Union[Iri, str]] = None) -> int:
        with self._lock.read():
            if graph is not None:
                bucket = self._graphs.get(self._as_iri(graph))
                return len(bucket.triples) if bucket is not None else 0
            return sum(len(b.triples) for b in self._graphs.values())

    def graph_names(self) -> list[Iri]:
        with self._lock.read():
            return sorted(self._graphs, key=lambda g: g.value)

    def label_of(self, resource: Union[Iri, str], language: Optional[str] = None) -> Optional[str]:
        """Preferred label in the requested language, falling back to the
        English label, then to the smallest available language tag."""
        labels: dict[Optional[str], str] = {}
        for t in self.query_pattern(s=self._as_iri(resource), p=Iri(SKOS_PREF_LABEL)):
            if isinstance(t.object, Literal):
                tag = t.object.language
                current = labels.get(tag)
                if current is None or t.object.lexical < current:
                    labels[tag] = t.object.lexical
        return choose_language(labels, language)

    # -- persistence -----------------------------------------------------------

    def snapshot(self, path: Union[str, os.PathLike]) -> int:
        """Write the whole store as sorted N-Quads; returns the quad count."""
        from .rdfio import quad_line

        with self._lock.read():
            lines = [
                quad_line(name, t)
                for name, bucket in self._graphs.items()
                for t in bucket.triples
            ]
        lines.sort()
        text = SNAPSHOT_HEADER + "\n" + "".join(line + "\n" for line in lines)
        tmp = os.fspath(path) + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, os.fspath(path))
        return len(lines)

    def restore(self, path: Union[str, os.PathLike]) -> int:
        """Replace the store's contents from a snapshot file. The store is
        untouched unless the whole file parses."""
        from .rdfio import parse_nquads

        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise LoadError(f"cannot read snapshot {os.fspath(path)!r}: {exc}") from exc
        first = text.split("\n", 1)[0].strip()
        if first != SNAPSHOT_HEADER:
            raise LoadError(
                f"snapshot {os.fspath(path)!r} has unsupported header {first!r}; expected {SNAPSHOT_HEADER!r}"
            )
        try:
            quads = parse_nquads(text)
        except (ValidationError, LoadError) as exc:
            raise LoadError(f"corrupt snapshot {os.fspath(path)!r}: {exc}") from exc
        graphs: dict[Iri, _Graph] = {}
        for graph, triple in quads:
            graphs.setdefault(graph, _Graph()).add(triple)
        with self._lock.write():
            self._graphs = graphs
        return len(quads)

    # -- internals ---------------------------------------------------------

    @staticmethod
    def _as_iri(value: Union[Iri, str]) -> Iri:
        return value if isinstance(value, Iri) else Iri(value)
