import pathlib

import pytest

from annocamp.campaign import Campaign

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

IOC_SCHEME = "urn:annocamp:scheme:ioc"
MATERIALS_SCHEME = "urn:annocamp:scheme:materials"


@pytest.fixture
def fixture_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture
def campaign() -> Campaign:
    return Campaign()


@pytest.fixture
def bird_campaign() -> Campaign:
    """IOC vocabulary, the 12 bird objects, and the birds domain."""
    c = Campaign()
    c.load_vocabulary(str(FIXTURES / "vocab" / "mini_ioc.ttl"), IOC_SCHEME)
    c.load_domains(str(FIXTURES / "domains" / "birds.json"))
    c.load_collection(str(FIXTURES / "collections" / "birds.jsonl"), domain="birds")
    return c


@pytest.fixture
def full_campaign(bird_campaign) -> Campaign:
    """Bird campaign plus fashion (with sub-domains), bible, and gold."""
    c = bird_campaign
    c.load_vocabulary(str(FIXTURES / "vocab" / "fashion_materials.ttl"), MATERIALS_SCHEME)
    c.load_domains(str(FIXTURES / "domains" / "fashion.json"))
    c.load_collection(str(FIXTURES / "collections" / "jewelry.jsonl"), domain="jewelry")
    c.load_collection(str(FIXTURES / "collections" / "lace.jsonl"), domain="lace")
    c.load_collection(str(FIXTURES / "collections" / "fashion.jsonl"), domain="fashion")
    c.load_domains(str(FIXTURES / "domains" / "bible.json"))
    c.load_collection(str(FIXTURES / "collections" / "bible.jsonl"), domain="bible")
    c.load_gold(str(FIXTURES / "gold" / "birds_gold.csv"), IOC_SCHEME)
    return c
