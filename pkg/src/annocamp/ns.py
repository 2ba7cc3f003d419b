"""IRI constants and minting helpers.

Standard vocabularies (SKOS, Web Annotation, Dublin Core, EDM/ORE) are
referenced by their published IRIs; everything the platform mints itself
lives under the ``urn:annocamp:`` namespace so internal identifiers are
never mistaken for resolvable web resources.
"""

from __future__ import annotations

import hashlib
from urllib.parse import quote

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = RDF + "type"
RDF_VALUE = RDF + "value"

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

SKOS = "http://www.w3.org/2004/02/skos/core#"
SKOS_PREF_LABEL = SKOS + "prefLabel"
SKOS_ALT_LABEL = SKOS + "altLabel"
SKOS_BROADER = SKOS + "broader"
SKOS_IN_SCHEME = SKOS + "inScheme"
SKOS_CONCEPT = SKOS + "Concept"
SKOS_CONCEPT_SCHEME = SKOS + "ConceptScheme"

DCT = "http://purl.org/dc/terms/"
DCT_TITLE = DCT + "title"
DCT_DESCRIPTION = DCT + "description"
DCT_CREATOR = DCT + "creator"
DCT_CREATED = DCT + "created"
DCT_SUBJECT = DCT + "subject"
DCT_IS_PART_OF = DCT + "isPartOf"
DCT_CONFORMS_TO = DCT + "conformsTo"

OA = "http://www.w3.org/ns/oa#"
OA_ANNOTATION = OA + "Annotation"
OA_HAS_TARGET = OA + "hasTarget"
OA_HAS_BODY = OA + "hasBody"
OA_HAS_SOURCE = OA + "hasSource"
OA_HAS_SELECTOR = OA + "hasSelector"
OA_FRAGMENT_SELECTOR = OA + "FragmentSelector"
OA_TEXTUAL_BODY = OA + "TextualBody"

MEDIA_FRAGS = "http://www.w3.org/TR/media-frags/"

ORE_AGGREGATION = "http://www.openarchives.org/ore/terms/Aggregation"

EDM = "http://www.europeana.eu/schemas/edm/"
EDM_PROVIDED_CHO = EDM + "ProvidedCHO"
EDM_WEB_RESOURCE = EDM + "WebResource"
EDM_AGGREGATED_CHO = EDM + "aggregatedCHO"
EDM_IS_SHOWN_BY = EDM + "isShownBy"

EBUCORE = "http://www.ebu.ch/metadata/ontologies/ebucore/ebucore#"
EBUCORE_WIDTH = EBUCORE + "width"
EBUCORE_HEIGHT = EBUCORE + "height"

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_INTEGER = XSD + "integer"
XSD_DATETIME = XSD + "dateTime"

# Internal namespace: predicates, classes, named graphs, minted resources.
ANC = "urn:annocamp:"

P_FIELD = ANC + "prop:field"
P_ENTERED_TEXT = ANC + "prop:enteredText"
P_STATUS = ANC + "prop:status"
P_LOCATION = ANC + "prop:location"
P_LOGIN = ANC + "prop:login"
P_CREDENTIAL = ANC + "prop:credential"
P_DISPLAY_NAME = ANC + "prop:displayName"
P_LANGUAGE = ANC + "prop:preferredLanguage"
P_REGISTERED_AT = ANC + "prop:registeredAt"
P_EXPERTISE = ANC + "prop:expertise"
P_TOPIC = ANC + "prop:topic"
P_LEVEL = ANC + "prop:level"
P_IN_DOMAIN = ANC + "prop:inDomain"
P_ANNOTATION = ANC + "prop:annotation"
P_REVIEWER = ANC + "prop:reviewer"
P_VERDICT = ANC + "prop:verdict"
P_GOLD_OBJECT = ANC + "prop:goldObject"
P_GOLD_FIELD = ANC + "prop:goldField"
P_GOLD_CONCEPT = ANC + "prop:goldConcept"
P_MESSAGE = ANC + "prop:message"

C_USER = ANC + "class:User"
C_REVIEW_DECISION = ANC + "class:ReviewDecision"
C_GOLD_ENTRY = ANC + "class:GoldEntry"
C_FEEDBACK = ANC + "class:Feedback"

GRAPH_COLLECTION = ANC + "graph:collection"
GRAPH_VOCABULARY = ANC + "graph:vocabulary"
GRAPH_ANNOTATIONS = ANC + "graph:annotations"
GRAPH_USERS = ANC + "graph:users"
GRAPH_GOLD = ANC + "graph:gold"


def _slug(text: str) -> str:
    return quote(text, safe="")


def _digest(*parts: str) -> str:
    joined = "\x1f".join(parts)
    return hashlib.sha1(joined.encode("utf-8")).hexdigest()[:16]


def user_iri(login: str) -> str:
    return ANC + "user:" + _slug(login)


def domain_iri(domain_id: str) -> str:
    return ANC + "domain:" + _slug(domain_id)


def annotation_iri(unique: str) -> str:
    return ANC + "annotation:" + unique


def image_iri(object_id: str, location: str) -> str:
    return ANC + "image:" + _digest(object_id, location)


def aggregation_iri(object_id: str) -> str:
    return ANC + "aggregation:" + _digest(object_id)


def expertise_iri(user: str, topic: str) -> str:
    return ANC + "expertise:" + _digest(user, topic)


def review_iri(annotation: str, reviewer: str) -> str:
    return ANC + "review:" + _digest(annotation, reviewer)


def gold_entry_iri(object_id: str, field: str, concept: str) -> str:
    return ANC + "gold:" + _digest(object_id, field, concept)


def feedback_iri(unique: str) -> str:
    return ANC + "feedback:" + unique
