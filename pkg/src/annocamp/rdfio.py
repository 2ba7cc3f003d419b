"""Reading and writing triples as text.

Input side: a Turtle subset sufficient for concept schemes and metadata
fixtures — ``@prefix``/``@base`` directives, prefixed names, the ``a``
keyword, ``;``/``,`` continuations, quoted strings with escapes, language
tags, datatypes, bare integers and booleans, and comments. Collections
``(...)``, property lists ``[...]`` and multi-line strings are not
supported. Blank node labels are accepted and skolemized into stable IRIs
(labels are scoped to one parse).

Output side: canonical N-Triples and N-Quads lines built on the store's
term serialization, so exports and snapshots are byte-stable.
"""

from __future__ import annotations

import re
from typing import NamedTuple, Optional
from urllib.parse import urljoin

from .errors import LoadError, ValidationError
from .ns import ANC, RDF_TYPE, XSD
from .store import Iri, Literal, Term, Triple, term_text

_XSD_INTEGER = Iri(XSD + "integer")
_XSD_BOOLEAN = Iri(XSD + "boolean")
_ABSOLUTE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")

_TOKEN_RE = re.compile(
    r"""[ \t\r\n]+
      | \#[^\n]*
      | (?P<iriref><[^<>"{}|^`\\\x00-\x20]*>)
      | (?P<string>"(?:[^"\\\n\r]|\\.)*")
      | (?P<prefix_kw>@prefix\b)
      | (?P<base_kw>@base\b)
      | (?P<langtag>@[A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)
      | (?P<dtype>\^\^)
      | (?P<bnode>_:[A-Za-z0-9](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)
      | (?P<pname>(?:[A-Za-z][A-Za-z0-9_.\-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?)
      | (?P<boolean>(?:true|false)\b)
      | (?P<kw_a>a\b)
      | (?P<integer>[+-]?[0-9]+)
      | (?P<punct>[.;,])
    """,
    re.VERBOSE,
)

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class _Token(NamedTuple):
    kind: str
    text: str
    line: int


def _unescape(raw: str, where: str) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise LoadError(f"{where}: dangling escape")
        code = raw[i + 1]
        if code in _ESCAPES:
            out.append(_ESCAPES[code])
            i += 2
        elif code in ("u", "U"):
            width = 4 if code == "u" else 8
            digits = raw[i + 2 : i + 2 + width]
            if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                raise LoadError(f"{where}: malformed \\{code} escape")
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise LoadError(f"{where}: unknown escape \\{code}")
    return "".join(out)


def _tokenize(text: str, source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line = 1
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            snippet = text[pos : pos + 20].split("\n")[0]
            raise LoadError(f"{source}:{line}: cannot read input at {snippet!r}")
        kind = match.lastgroup
        if kind is not None:
            tokens.append(_Token(kind, match.group(kind), line))
        line += text.count("\n", pos, match.end())
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, source: str):
        self.tokens = _tokenize(text, source)
        self.source = source
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.base: Optional[str] = None
        self.bnode_ids: dict[str, int] = {}

    def error(self, message: str, line: Optional[int] = None) -> LoadError:
        if line is None:
            line = self.tokens[self.pos - 1].line if self.tokens and self.pos else 1
        return LoadError(f"{self.source}:{line}: {message}")

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> _Token:
        if self.at_end():
            raise self.error("unexpected end of input", line=self.tokens[-1].line if self.tokens else 1)
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None, text: Optional[str] = None) -> _Token:
        token = self.peek()
        if kind is not None and token.kind != kind:
            raise self.error(f"expected {kind}, found {token.text!r}", token.line)
        if text is not None and token.text != text:
            raise self.error(f"expected {text!r}, found {token.text!r}", token.line)
        self.pos += 1
        return token

    # -- term readers -----------------------------------------------------

    def resolve_iriref(self, token: _Token) -> Iri:
        raw = _unescape(token.text[1:-1], f"{self.source}:{token.line}")
        if self.base and not _ABSOLUTE_RE.match(raw):
            raw = urljoin(self.base, raw)
        try:
            return Iri(raw)
        except ValidationError as exc:
            raise self.error(str(exc), token.line) from exc

    def expand_pname(self, token: _Token) -> Iri:
        prefix, _, local = token.text.partition(":")
        if prefix not in self.prefixes:
            raise self.error(f"undeclared prefix {prefix + ':'!r}", token.line)
        try:
            return Iri(self.prefixes[prefix] + local)
        except ValidationError as exc:
            raise self.error(str(exc), token.line) from exc

    def skolem(self, token: _Token) -> Iri:
        label = token.text[2:]
        number = self.bnode_ids.setdefault(label, len(self.bnode_ids) + 1)
        return Iri(f"{ANC}bnode:{number}-{label}")

    def read_resource(self) -> Iri:
        token = self.peek()
        if token.kind == "iriref":
            return self.resolve_iriref(self.take())
        if token.kind == "pname":
            return self.expand_pname(self.take())
        if token.kind == "bnode":
            return self.skolem(self.take())
        raise self.error(f"expected an IRI, found {token.text!r}", token.line)

    def read_term(self) -> Term:
        token = self.peek()
        if token.kind in ("iriref", "pname", "bnode"):
            return self.read_resource()
        if token.kind == "string":
            self.take()
            lexical = _unescape(token.text[1:-1], f"{self.source}:{token.line}")
            language = None
            datatype = None
            if not self.at_end() and self.peek().kind == "langtag":
                language = self.take().text[1:]
            elif not self.at_end() and self.peek().kind == "dtype":
                self.take()
                datatype = self.read_resource()
            try:
                return Literal(lexical, language=language, datatype=datatype)
            except ValidationError as exc:
                raise self.error(str(exc), token.line) from exc
        if token.kind == "integer":
            self.take()
            return Literal(token.text, datatype=_XSD_INTEGER)
        if token.kind == "boolean":
            self.take()
            return Literal(token.text, datatype=_XSD_BOOLEAN)
        raise self.error(f"expected an IRI or literal, found {token.text!r}", token.line)

    # -- grammars -----------------------------------------------------------

    def parse_turtle(self) -> list[Triple]:
        triples: list[Triple] = []
        while not self.at_end():
            token = self.peek()
            if token.kind == "prefix_kw":
                self.take()
                name = self.take("pname")
                prefix = name.text.partition(":")[0]
                target = self.resolve_iriref(self.take("iriref"))
                self.take("punct", ".")
                self.prefixes[prefix] = target.value
            elif token.kind == "base_kw":
                self.take()
                self.base = self.resolve_iriref(self.take("iriref")).value
                self.take("punct", ".")
            else:
                triples.extend(self.read_statement())
        return triples

    def read_statement(self) -> list[Triple]:
        triples: list[Triple] = []
        subject = self.read_resource()
        while True:
            verb_token = self.peek()
            if verb_token.kind == "kw_a":
                self.take()
                predicate = Iri(RDF_TYPE)
            else:
                predicate = self.read_resource()
            while True:
                triples.append(Triple(subject, predicate, self.read_term()))
                if not self.at_end() and self.peek().text == ",":
                    self.take()
                    continue
                break
            token = self.take("punct")
            if token.text == ".":
                return triples
            if token.text == ";":
                # a trailing semicolon before the dot is tolerated
                if self.peek().text == ".":
                    self.take()
                    return triples
                continue
            raise self.error(f"expected '.' or ';', found {token.text!r}", token.line)

    def parse_nquads(self) -> list[tuple[Iri, Triple]]:
        quads: list[tuple[Iri, Triple]] = []
        while not self.at_end():
            subject = self.read_resource()
            predicate = self.read_resource()
            obj = self.read_term()
            graph = self.read_resource()
            self.take("punct", ".")
            quads.append((graph, Triple(subject, predicate, obj)))
        return quads


def parse_turtle(text: str, source: str = "<turtle>") -> list[Triple]:
    return _Parser(text, source).parse_turtle()


def parse_nquads(text: str, source: str = "<nquads>") -> list[tuple[Iri, Triple]]:
    return _Parser(text, source).parse_nquads()


def triple_line(triple: Triple) -> str:
    return (
        f"{term_text(triple.subject)} {term_text(triple.predicate)} "
        f"{term_text(triple.object)} ."
    )


def quad_line(graph: Iri, triple: Triple) -> str:
    return (
        f"{term_text(triple.subject)} {term_text(triple.predicate)} "
        f"{term_text(triple.object)} {term_text(graph)} ."
    )


def write_ntriples(triples) -> str:
    return "".join(line + "\n" for line in sorted(triple_line(t) for t in triples))
