"""Campaign domain definitions: annotation fields, vocabulary bindings,
sub-domain trees, expertise topics, event windows, branding.

Domains are described by a JSON document and validated eagerly at load;
nothing is checked lazily at annotation time that could have failed here.
A document may inline its sub-domains or reference already-registered
ones by id. Field lookup walks the domain and then its ancestors, so a
sub-domain may override a field the parent defines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .collection import objects_in_domain
from .errors import LoadError, NotFoundError
from .store import TripleStore
from .util import find_cycle, parse_utc
from .vocab import VocabularySubset, branch_subset

FIELD_TYPES = ("radio", "checkbox", "text", "autocomplete-text")
SCOPES = ("whole-object", "region")
ASSIGNMENT_MODES = ("ranked", "subdomain", "recommendation")


@dataclass(frozen=True)
class FieldSpec:
    id: str
    name: dict
    instruction: dict
    field_type: str
    scope: str
    subset: Optional[VocabularySubset] = None
    values: Optional[tuple] = None


@dataclass(frozen=True)
class DomainConfig:
    id: str
    display: dict
    tagline: dict
    brand_images: tuple
    fields: tuple
    subdomains: tuple
    expertise: Optional[VocabularySubset]
    event_windows: tuple
    assignment_mode: str
    default_language: str


@dataclass(frozen=True)
class TreeNode:
    domain: str
    depth: int
    object_count: int
    display: dict


def _language_map(value, where: str, required_language: Optional[str] = None) -> dict:
    if value is None:
        value = {}
    if not isinstance(value, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in value.items()
    ):
        raise LoadError(f"{where}: expected an object of language-tagged strings")
    if required_language and not (value.get(required_language) or "").strip():
        raise LoadError(f"{where}: missing text for default language {required_language!r}")
    return dict(value)


def _parse_field(store: TripleStore, raw: dict, where: str, default_language: str) -> FieldSpec:
    field_id = raw.get("id")
    if not isinstance(field_id, str) or not field_id.strip():
        raise LoadError(f"{where}: field needs a non-empty id")
    where = f"{where}: field {field_id!r}"

    field_type = raw.get("type")
    if field_type not in FIELD_TYPES:
        raise LoadError(f"{where}: unknown field type {field_type!r}; expected one of {FIELD_TYPES}")
    scope = raw.get("scope", "whole-object")
    if scope not in SCOPES:
        raise LoadError(f"{where}: unknown scope {scope!r}; expected one of {SCOPES}")

    name = _language_map(raw.get("name"), f"{where}: name", default_language)
    instruction = _language_map(raw.get("instruction"), f"{where}: instruction", default_language)

    source = raw.get("source")
    subset = None
    values = None
    if source is not None:
        if not isinstance(source, dict):
            raise LoadError(f"{where}: source must be an object")
        if "values" in source:
            items = source["values"]
            if (
                not isinstance(items, list)
                or not items
                or not all(isinstance(v, str) and v.strip() for v in items)
            ):
                raise LoadError(f"{where}: source values must be a non-empty list of strings")
            values = tuple(items)
        elif "scheme" in source and "seed" in source:
            try:
                subset = branch_subset(store, str(source["scheme"]), str(source["seed"]))
            except NotFoundError as exc:
                raise LoadError(f"{where}: vocabulary reference cannot be resolved: {exc}") from exc
        else:
            raise LoadError(f"{where}: source needs either values or scheme+seed")

    if field_type in ("radio", "checkbox") and not values:
        raise LoadError(f"{where}: {field_type} fields need a literal value list")
    if field_type == "autocomplete-text" and subset is None and values is None:
        raise LoadError(f"{where}: autocomplete-text fields need a vocabulary subset or value list")
    if field_type == "text" and source is not None:
        raise LoadError(f"{where}: text fields take no source")
    if field_type in ("radio", "checkbox") and subset is not None:
        raise LoadError(f"{where}: {field_type} fields take a value list, not a vocabulary subset")

    return FieldSpec(
        id=field_id,
        name=name,
        instruction=instruction,
        field_type=field_type,
        scope=scope,
        subset=subset,
        values=values,
    )


class DomainRegistry:
    """All loaded domains, their parent/child links, and their raw
    documents (kept so an unchanged state can be saved and re-opened)."""

    def __init__(self) -> None:
        self._configs: dict[str, DomainConfig] = {}
        self._parents: dict[str, str] = {}
        self._documents: dict[str, dict] = {}

    # -- loading -------------------------------------------------------------

    def load_text(self, store: TripleStore, text: str, source: str = "<domain>") -> DomainConfig:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{source}: not valid JSON: {exc}") from exc
        return self.load(store, raw, source)

    def load(self, store: TripleStore, raw: dict, source: str = "<domain>") -> DomainConfig:
        if not isinstance(raw, dict):
            raise LoadError(f"{source}: domain document must be an object")
        staged: dict[str, DomainConfig] = {}
        config = self._parse_domain(store, raw, source, None, staged)

        # recompute parent links; a domain may belong to at most one parent
        parents = {
            child: parent
            for child, parent in self._parents.items()
            if not (parent in staged and child not in set(staged[parent].subdomains))
        }
        for parent_id, candidate in staged.items():
            for child in candidate.subdomains:
                existing = parents.get(child)
                if existing is not None and existing != parent_id:
                    raise LoadError(
                        f"{source}: sub-domain {child!r} already belongs to {existing!r}"
                    )
                parents[child] = parent_id

        # sub-domain links across old and new registrations must stay a forest
        children = {d: set(c.subdomains) for d, c in {**self._configs, **staged}.items()}
        cycle = find_cycle(children)
        if cycle:
            raise LoadError(f"{source}: sub-domain references form a cycle: {' -> '.join(cycle)}")

        self._configs.update(staged)
        self._parents = parents
        self._documents[config.id] = raw
        return config

    def _parse_domain(
        self,
        store: TripleStore,
        raw: dict,
        source: str,
        parent_language: Optional[str],
        staged: dict,
    ) -> DomainConfig:
        domain_id = raw.get("id")
        if not isinstance(domain_id, str) or not domain_id.strip():
            raise LoadError(f"{source}: domain needs a non-empty id")
        where = f"{source}: domain {domain_id!r}"

        default_language = raw.get("default_language") or parent_language or "en"
        display = _language_map(raw.get("display"), f"{where}: display", default_language)
        tagline = _language_map(raw.get("tagline"), f"{where}: tagline")

        mode = raw.get("assignment_mode", "ranked")
        if mode not in ASSIGNMENT_MODES:
            raise LoadError(f"{where}: unknown assignment_mode {mode!r}; expected one of {ASSIGNMENT_MODES}")

        expertise = None
        topics = raw.get("expertise_topics")
        if topics is not None:
            if not isinstance(topics, dict) or "scheme" not in topics or "seed" not in topics:
                raise LoadError(f"{where}: expertise_topics needs scheme and seed")
            try:
                expertise = branch_subset(store, str(topics["scheme"]), str(topics["seed"]))
            except NotFoundError as exc:
                raise LoadError(f"{where}: expertise topics cannot be resolved: {exc}") from exc
        if mode == "recommendation" and expertise is None:
            raise LoadError(f"{where}: assignment_mode recommendation requires expertise_topics")

        windows = []
        for slot in raw.get("event_windows", ()):
            if not isinstance(slot, dict) or "start" not in slot or "end" not in slot:
                raise LoadError(f"{where}: event window needs start and end")
            start, end = parse_utc(str(slot["start"])), parse_utc(str(slot["end"]))
            if start >= end:
                raise LoadError(f"{where}: event window start must precede end")
            windows.append((start, end))

        brand_images = raw.get("brand_images", [])
        if not isinstance(brand_images, list) or not all(isinstance(p, str) for p in brand_images):
            raise LoadError(f"{where}: brand_images must be a list of paths")

        fields: list[FieldSpec] = []
        seen_fields: set = set()
        for raw_field in raw.get("fields", ()):
            spec = _parse_field(store, raw_field, where, default_language)
            if spec.id in seen_fields:
                raise LoadError(f"{where}: duplicate field id {spec.id!r}")
            seen_fields.add(spec.id)
            fields.append(spec)

        subdomain_ids: list[str] = []
        for entry in raw.get("subdomains", ()):
            if isinstance(entry, str):
                if entry not in self._configs and entry not in staged:
                    raise LoadError(f"{where}: unknown sub-domain {entry!r}; load it first or inline it")
                subdomain_ids.append(entry)
            elif isinstance(entry, dict):
                child = self._parse_domain(store, entry, source, default_language, staged)
                subdomain_ids.append(child.id)
            else:
                raise LoadError(f"{where}: sub-domain entries must be ids or inline domain objects")
        if len(set(subdomain_ids)) != len(subdomain_ids):
            raise LoadError(f"{where}: duplicate sub-domain reference")

        config = DomainConfig(
            id=domain_id,
            display=display,
            tagline=tagline,
            brand_images=tuple(brand_images),
            fields=tuple(fields),
            subdomains=tuple(subdomain_ids),
            expertise=expertise,
            event_windows=tuple(windows),
            assignment_mode=mode,
            default_language=default_language,
        )
        staged[domain_id] = config
        return config

    # -- lookups ------------------------------------------------------------

    def ids(self) -> list[str]:
        return sorted(self._configs)

    def roots(self) -> list[str]:
        return sorted(d for d in self._configs if d not in self._parents)

    def get(self, domain_id: str) -> DomainConfig:
        try:
            return self._configs[domain_id]
        except KeyError:
            raise NotFoundError(f"unknown domain {domain_id!r}") from None

    def parent_of(self, domain_id: str) -> Optional[str]:
        self.get(domain_id)
        return self._parents.get(domain_id)

    def ancestors(self, domain_id: str) -> list[str]:
        chain = []
        current = self.parent_of(domain_id)
        while current is not None:
            chain.append(current)
            current = self._parents.get(current)
        return chain

    def subtree_ids(self, domain_id: str) -> list[str]:
        """The domain and all its descendants, preorder."""
        config = self.get(domain_id)
        out = [domain_id]
        for child in config.subdomains:
            out.extend(self.subtree_ids(child))
        return out

    def resolve_field(self, domain_id: str, field_id: str) -> FieldSpec:
        """Nearest definition wins: the domain itself, then its ancestors."""
        for candidate in [domain_id] + self.ancestors(domain_id):
            for spec in self.get(candidate).fields:
                if spec.id == field_id:
                    return spec
        raise NotFoundError(f"unknown field {field_id!r} in domain {domain_id!r}")

    def effective_fields(self, domain_id: str) -> list[FieldSpec]:
        """Fields visible on the domain, ancestors included, overrides applied,
        in nearest-first definition order."""
        seen: set = set()
        out: list[FieldSpec] = []
        for candidate in [domain_id] + self.ancestors(domain_id):
            for spec in self.get(candidate).fields:
                if spec.id not in seen:
                    seen.add(spec.id)
                    out.append(spec)
        return out

    def subdomain_tree(self, store: TripleStore, root: str) -> list[TreeNode]:
        nodes = []
        for domain_id in self.subtree_ids(root):
            depth = 0
            walker = domain_id
            while walker != root:
                walker = self._parents[walker]
                depth += 1
            config = self.get(domain_id)
            nodes.append(
                TreeNode(
                    domain=domain_id,
                    depth=depth,
                    object_count=len(objects_in_domain(store, self, domain_id)),
                    display=config.display,
                )
            )
        return nodes

    # -- persistence ---------------------------------------------------------

    def documents(self) -> list[dict]:
        return [self._documents[key] for key in self._documents]

    def restore_documents(self, store: TripleStore, documents: Sequence[dict], source: str) -> None:
        for raw in documents:
            self.load(store, raw, source)
