"""Annotation submission, lifecycle, and exports."""

import csv
import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annocamp import annotations as anno
from annocamp import ns
from annocamp.errors import ConflictError, NotFoundError, UsageError, ValidationError
from annocamp.store import TripleStore
from tests.support import IOC, insert_annotations, make_annotation, utc

BIRD = "urn:annocamp:object:bird-01"
USER = "urn:annocamp:user:erika"


def submit(campaign, **overrides):
    kwargs = dict(
        user=USER,
        domain="birds",
        object_id=BIRD,
        field_id="common-name",
        body_kind="concept",
        concept=IOC + "bubo-bubo",
        region={"x": 100, "y": 120, "w": 300, "h": 200},
    )
    kwargs.update(overrides)
    return anno.submit_annotation(campaign.store, campaign.registry, **kwargs)


class TestSubmission:
    def test_concept_annotation_round_trips_through_store(self, bird_campaign):
        created = submit(bird_campaign, entered_text="oeh")
        got = anno.get_annotation(bird_campaign.store, created.id)
        assert got == created
        assert got.status == "submitted"
        assert got.body.concept == IOC + "bubo-bubo"
        assert got.body.entered_text == "oeh"
        assert got.region.x == 100 and got.region.h == 200

    def test_entered_text_defaults_to_the_body_value(self, bird_campaign):
        created = submit(bird_campaign)
        assert created.body.entered_text == IOC + "bubo-bubo"

    def test_text_field_takes_no_concept_machinery(self, bird_campaign):
        created = submit(
            bird_campaign,
            field_id="iconography",
            body_kind="text",
            concept=None,
            text="owl on a branch",
            region=None,
        )
        assert created.body.kind == "text"
        assert created.region is None

    def test_radio_field_accepts_only_listed_values(self, bird_campaign):
        with pytest.raises(ValidationError, match="not one of the field's options"):
            submit(
                bird_campaign,
                field_id="gender",
                body_kind="text",
                concept=None,
                text="unknown",
            )

    def test_concept_outside_field_subset_rejected(self, bird_campaign):
        # scientific-name is restricted to the owl branch
        with pytest.raises(ValidationError, match="outside the field's subset"):
            submit(
                bird_campaign,
                field_id="scientific-name",
                concept=IOC + "falco-peregrinus",
            )

    def test_unknown_object_and_foreign_domain(self, full_campaign):
        with pytest.raises(NotFoundError, match="unknown object"):
            submit(full_campaign, object_id="urn:t:object:ghost")
        with pytest.raises(ValidationError, match="not part of domain"):
            submit(
                full_campaign,
                object_id="urn:annocamp:object:lace-01",
            )

    def test_unknown_field_rejected(self, bird_campaign):
        with pytest.raises(NotFoundError, match="unknown field"):
            submit(bird_campaign, field_id="wingspan")

    def test_region_scope_is_enforced_both_ways(self, bird_campaign):
        with pytest.raises(ValidationError, match="needs a region"):
            submit(bird_campaign, region=None)
        with pytest.raises(ValidationError, match="no region allowed"):
            submit(
                bird_campaign,
                field_id="iconography",
                body_kind="text",
                concept=None,
                text="x",
                region={"x": 0, "y": 0, "w": 10, "h": 10},
            )

    def test_region_must_fit_the_image(self, bird_campaign):
        # bird-01 is 1200x800
        with pytest.raises(ValidationError, match="exceeds the 1200x800 image"):
            submit(bird_campaign, region={"x": 1100, "y": 0, "w": 200, "h": 100})
        with pytest.raises(ValidationError, match="exceeds the 1200x800 image"):
            submit(bird_campaign, region={"x": 0, "y": 700, "w": 100, "h": 101})
        edge = submit(bird_campaign, region={"x": 1100, "y": 700, "w": 100, "h": 100})
        assert edge.region.w == 100

    @pytest.mark.parametrize(
        "region",
        [
            {"x": -1, "y": 0, "w": 10, "h": 10},
            {"x": 0, "y": 0, "w": 0, "h": 10},
            {"x": 0, "y": 0, "w": 10},
            {"x": 0.5, "y": 0, "w": 10, "h": 10},
        ],
    )
    def test_malformed_regions_rejected(self, bird_campaign, region):
        with pytest.raises(ValidationError):
            submit(bird_campaign, region=region)

    def test_duplicate_statements_by_different_users_coexist(self, bird_campaign):
        first = submit(bird_campaign)
        second = submit(bird_campaign, user="urn:annocamp:user:jan")
        assert first.id != second.id
        assert len(anno.list_annotations(bird_campaign.store, object_id=BIRD)) == 2


class TestLifecycle:
    def test_accept_then_further_change_conflicts(self, bird_campaign):
        created = submit(bird_campaign)
        updated = anno.set_status(bird_campaign.store, created.id, "accepted")
        assert updated.status == "accepted"
        with pytest.raises(ConflictError, match="already accepted"):
            anno.set_status(bird_campaign.store, created.id, "rejected")

    def test_only_terminal_statuses_are_reachable(self, bird_campaign):
        created = submit(bird_campaign)
        with pytest.raises(ValidationError):
            anno.set_status(bird_campaign.store, created.id, "submitted")
        with pytest.raises(NotFoundError):
            anno.set_status(bird_campaign.store, ns.annotation_iri("missing"), "accepted")

    def test_status_change_preserves_everything_else(self, bird_campaign):
        created = submit(bird_campaign, entered_text="oe")
        updated = anno.set_status(bird_campaign.store, created.id, "rejected")
        assert updated == anno.Annotation(
            id=created.id,
            object=created.object,
            region=created.region,
            field=created.field,
            body=created.body,
            user=created.user,
            created_at=created.created_at,
            status="rejected",
        )


class TestListing:
    def test_filters_compose(self, bird_campaign):
        store = bird_campaign.store
        insert_annotations(
            store,
            [
                make_annotation(BIRD, concept=IOC + "bubo", user=USER, created_at=utc(2026, 3, 1)),
                make_annotation(BIRD, field="iconography", text="tree", user=USER, created_at=utc(2026, 3, 2)),
                make_annotation(
                    "urn:annocamp:object:bird-02",
                    concept=IOC + "bubo-scandiacus",
                    user="urn:annocamp:user:jan",
                    created_at=utc(2026, 3, 3),
                ),
            ],
        )
        assert len(anno.list_annotations(store)) == 3
        assert len(anno.list_annotations(store, object_id=BIRD)) == 2
        assert len(anno.list_annotations(store, user=USER, field="iconography")) == 1
        assert len(anno.list_annotations(store, since=utc(2026, 3, 2), until=utc(2026, 3, 3))) == 1
        assert anno.list_annotations(store, status="accepted") == []

    def test_ordering_is_time_then_id(self, bird_campaign):
        store = bird_campaign.store
        batch = [
            make_annotation(BIRD, concept=IOC + "bubo", created_at=utc(2026, 3, 2)),
            make_annotation(BIRD, concept=IOC + "bubo", created_at=utc(2026, 3, 1)),
            make_annotation(BIRD, concept=IOC + "bubo", created_at=utc(2026, 3, 1)),
        ]
        insert_annotations(store, batch)
        got = anno.list_annotations(store)
        assert [a.created_at for a in got] == sorted(a.created_at for a in batch)
        assert got[0].id < got[1].id


class TestExport:
    def test_triple_export_parses_back_to_the_same_annotations(self, bird_campaign):
        submit(bird_campaign, entered_text="oeh")
        submit(
            bird_campaign,
            field_id="iconography",
            body_kind="text",
            concept=None,
            text="an owl at dusk",
            region=None,
        )
        text = anno.export_annotations(bird_campaign.store, "triples")
        from annocamp.rdfio import parse_turtle

        rebuilt = anno.annotations_from_triples(parse_turtle(text))
        assert rebuilt == anno.list_annotations(bird_campaign.store)

    def test_csv_export_shape(self, bird_campaign):
        submit(bird_campaign, entered_text="oeh")
        text = anno.export_annotations(bird_campaign.store, "csv", language="nl")
        assert "\r\n" in text
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == anno.CSV_HEADER
        [row] = rows[1:]
        record = dict(zip(anno.CSV_HEADER, row))
        assert record["object_id"] == BIRD
        assert record["concept_iri"] == IOC + "bubo-bubo"
        assert record["label"] == "Oehoe"
        assert record["entered_text"] == "oeh"
        assert record["user"] == "erika"
        assert (record["x"], record["w"]) == ("100", "300")
        assert record["status"] == "submitted"

    def test_csv_quotes_embedded_commas_and_quotes(self, bird_campaign):
        submit(
            bird_campaign,
            field_id="iconography",
            body_kind="text",
            concept=None,
            text='owl, "large", at dusk',
            region=None,
        )
        text = anno.export_annotations(bird_campaign.store, "spreadsheet")
        assert '"owl, ""large"", at dusk"' in text
        [row] = list(csv.reader(io.StringIO(text)))[1:]
        assert row[anno.CSV_HEADER.index("label")] == 'owl, "large", at dusk'

    def test_export_respects_filters(self, bird_campaign):
        keep = submit(bird_campaign)
        submit(bird_campaign, user="urn:annocamp:user:jan")
        anno.set_status(bird_campaign.store, keep.id, "accepted")
        text = anno.export_annotations(bird_campaign.store, "csv", status="accepted")
        rows = list(csv.reader(io.StringIO(text)))
        assert len(rows) == 2 and rows[1][0] == keep.id

    def test_unknown_format_is_a_usage_error(self, bird_campaign):
        with pytest.raises(UsageError, match="unknown export format"):
            anno.export_annotations(bird_campaign.store, "xml")


def test_login_of_round_trips_url_safe_names():
    assert anno.login_of("urn:annocamp:user:erika") == "erika"
    assert anno.login_of("urn:annocamp:user:j%40n") == "j@n"
    assert anno.login_of("mailto:someone@example.org") == "mailto:someone@example.org"


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.sampled_from(["bird-01", "bird-02", "bird-03"]),
            st.one_of(st.none(), st.tuples(*[st.integers(0, 50)] * 2, *[st.integers(1, 50)] * 2)),
            st.sampled_from(["submitted", "accepted", "rejected"]),
            st.booleans(),
        ),
        min_size=1,
        max_size=12,
    )
)
def test_triple_shape_is_a_lossless_encoding(cases):
    built = []
    for index, (stem, region, status, concepty) in enumerate(cases):
        kwargs = dict(
            object_id="urn:annocamp:object:" + stem,
            created_at=utc(2026, 3, 1, 8, index % 60),
            status=status,
            region=region,
        )
        if concepty:
            built.append(make_annotation(concept=IOC + "bubo", **kwargs))
        else:
            built.append(make_annotation(text="seen near water", **kwargs))
    triples = [t for a in built for t in anno.annotation_triples(a)]
    rebuilt = anno.annotations_from_triples(triples)
    assert sorted(rebuilt, key=lambda a: a.id) == sorted(built, key=lambda a: a.id)
