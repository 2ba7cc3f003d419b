"""annocamp: knowledge-graph-backed annotation campaigns.

A campaign bundles a triple store (vocabularies, collection objects,
annotations, users, gold standards live in named graphs) with a domain
registry, and exposes the contributor workflow over HTTP: registration,
task assignment, region annotation with autocomplete, semantic search,
review, and reporting.
"""

__version__ = "0.1.0"
