"""Campaign state: one triple store plus the domain registry, persisted
together in a state directory (store.nq and domains.json)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from . import collection, quality, vocab
from .domains import DomainRegistry
from .errors import LoadError
from .store import TripleStore

STORE_FILE = "store.nq"
DOMAINS_FILE = "domains.json"


@dataclass
class Campaign:
    store: TripleStore = field(default_factory=TripleStore)
    registry: DomainRegistry = field(default_factory=DomainRegistry)

    # -- persistence ----------------------------------------------------

    def save(self, state_dir: str) -> None:
        os.makedirs(state_dir, exist_ok=True)
        self.store.snapshot(os.path.join(state_dir, STORE_FILE))
        documents = self.registry.documents()
        path = os.path.join(state_dir, DOMAINS_FILE)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(documents, handle, indent=2, sort_keys=True)
            handle.write("\n")
        os.replace(tmp, path)

    # -- loading --------------------------------------------------------

    def load_vocabulary(self, path: str, scheme: str) -> vocab.ConceptScheme:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        return vocab.load_scheme(self.store, scheme, text, source=path)

    def load_domains(self, path: str):
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        return self.registry.load_text(self.store, text, source=path)

    def load_collection(self, path: str, domain: Optional[str] = None) -> collection.IngestReport:
        if domain is not None:
            self.registry.get(domain)
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        return collection.ingest_objects(self.store, text, domain=domain, source=path)

    def load_gold(self, path: str, scheme: str) -> quality.GoldStandard:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        gold = quality.parse_gold_csv(text, scheme, self.store, source=path)
        quality.store_gold(self.store, gold)
        return gold


def open_campaign(state_dir: Optional[str]) -> Campaign:
    """Load campaign state from a directory, or start empty when the
    directory (or either file) is missing."""
    campaign = Campaign()
    if state_dir is None:
        return campaign
    store_path = os.path.join(state_dir, STORE_FILE)
    if os.path.exists(store_path):
        campaign.store.restore(store_path)
    domains_path = os.path.join(state_dir, DOMAINS_FILE)
    if os.path.exists(domains_path):
        with open(domains_path, encoding="utf-8") as handle:
            try:
                documents = json.load(handle)
            except json.JSONDecodeError as exc:
                raise LoadError(f"{domains_path}: {exc}") from exc
        campaign.registry.restore_documents(campaign.store, documents, source=domains_path)
    return campaign
