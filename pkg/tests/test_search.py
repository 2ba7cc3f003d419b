"""Cross-language search and result clustering."""

from annocamp import annotations as anno
from annocamp import search as search_mod
from annocamp.search import search
from tests.support import IOC, insert_annotations, make_annotation

BIRD = "urn:annocamp:object:bird-"


def bird(n: int) -> str:
    return f"{BIRD}{n:02d}"


def clusters_of(result):
    return {c.key: [h.object for h in c.hits] for c in result.clusters}


class TestMatching:
    def test_title_match_any_language(self, bird_campaign):
        result = search(bird_campaign.store, bird_campaign.registry, "Eagle owl in magnolia")
        got = clusters_of(result)
        assert got == {"matched-title": [bird(1)]}
        [hit] = result.clusters[0].hits
        assert hit.path_length == 0

    def test_concept_label_reaches_tagged_objects(self, bird_campaign):
        # "Sneeuwuil" is the Dutch label; bird-02 carries the concept as subject
        result = search(bird_campaign.store, bird_campaign.registry, "sneeuwuil")
        assert clusters_of(result) == {"subject-concept": [bird(2)]}

    def test_untagged_scientific_name_matches(self, bird_campaign):
        result = search(bird_campaign.store, bird_campaign.registry, "Bubo bubo")
        assert clusters_of(result) == {"subject-concept": [bird(1)]}

    def test_matching_folds_case_and_diacritics(self, bird_campaign):
        plain = search(bird_campaign.store, bird_campaign.registry, "oehoe")
        shouted = search(bird_campaign.store, bird_campaign.registry, "OEHOE")
        assert plain.objects() == shouted.objects() != set()

    def test_only_whole_label_matches(self, bird_campaign):
        result = search(bird_campaign.store, bird_campaign.registry, "oeho")
        assert result.objects() == set()

    def test_blank_query_is_empty(self, bird_campaign):
        assert search(bird_campaign.store, bird_campaign.registry, "   ").clusters == ()


class TestAnnotationPaths:
    def test_annotation_body_connects_label_to_object(self, bird_campaign):
        # bird-07 has no subject; an annotation supplies the link
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(7), concept=IOC + "bubo-scandiacus")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Snowy owl")
        got = clusters_of(result)
        assert got["subject-concept"] == [bird(2)]
        assert got["annotation-body"] == [bird(7)]

    def test_annotation_text_matches_whole_value(self, bird_campaign):
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(8), field="iconography", text="hunting at dusk")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Hunting at dusk")
        got = clusters_of(result)
        assert got == {"annotation-text": [bird(8)]}
        [hit] = result.clusters[0].hits
        assert hit.path_length == 2

    def test_rejected_annotations_are_invisible(self, bird_campaign):
        insert_annotations(
            bird_campaign.store,
            [
                make_annotation(bird(7), concept=IOC + "bubo-scandiacus", status="rejected"),
                make_annotation(bird(8), field="iconography", text="hunting at dusk", status="rejected"),
            ],
        )
        assert search(bird_campaign.store, bird_campaign.registry, "Snowy owl").objects() == {bird(2)}
        assert search(bird_campaign.store, bird_campaign.registry, "hunting at dusk").objects() == set()

    def test_accepted_annotations_still_count(self, bird_campaign):
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(7), concept=IOC + "bubo-scandiacus", status="accepted")],
        )
        assert bird(7) in search(bird_campaign.store, bird_campaign.registry, "Snowy owl").objects()


class TestHierarchyWalk:
    def test_narrower_closure_within_three_edges(self, bird_campaign):
        result = search(bird_campaign.store, bird_campaign.registry, "Wood owls")
        got = clusters_of(result)
        # strix itself is a subject (path 1); strix-aluco one step down (path 2)
        assert got["subject-concept"] == [bird(10)]
        assert got["subject-concept-narrower"] == [bird(3)]

    def test_depth_budget_cuts_deep_annotation_paths(self, bird_campaign):
        # owls -> strigidae -> bubo is 2 narrower steps; an annotation body
        # pair needs 2 more edges, exceeding the 3-edge budget
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(7), concept=IOC + "bubo")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Owls")
        got = clusters_of(result)
        assert bird(7) not in [o for hits in got.values() for o in hits]
        # but the subject edge from bubo (depth 2 + 1 = 3) still fits
        assert bird(4) in got["subject-concept-narrower"]

    def test_each_object_lands_in_exactly_one_cluster(self, bird_campaign):
        # bird-01 is reachable both via its subject (path 1) and via an
        # annotation body (path 2); the shorter path wins
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(1), concept=IOC + "bubo-bubo")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Eurasian eagle-owl")
        got = clusters_of(result)
        assert got == {"subject-concept": [bird(1)]}
        placements = [o for hits in got.values() for o in hits]
        assert len(placements) == len(set(placements))


class TestPresentation:
    def test_clusters_ordered_by_path_then_signature(self, bird_campaign):
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(7), concept=IOC + "strix")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Wood owls")
        keys = [c.key for c in result.clusters]
        assert keys == ["subject-concept", "annotation-body", "subject-concept-narrower"]
        lengths = [c.hits[0].path_length for c in result.clusters]
        assert lengths == sorted(lengths)

    def test_titles_follow_the_requested_language(self, bird_campaign):
        result = search(bird_campaign.store, bird_campaign.registry, "Bubo bubo", language="nl")
        [hit] = result.clusters[0].hits
        assert hit.title == "Oehoe op magnoliatak"

    def test_domain_filter_limits_results(self, full_campaign):
        everywhere = search(full_campaign.store, full_campaign.registry, "Bubo bubo")
        birds_only = search(
            full_campaign.store, full_campaign.registry, "Bubo bubo", domain="birds"
        )
        assert birds_only.objects() == everywhere.objects() == {bird(1)}
        foreign = search(
            full_campaign.store, full_campaign.registry, "Bubo bubo", domain="fashion"
        )
        assert foreign.objects() == set()

    def test_signature_list_is_exhaustive(self):
        assert search_mod._SIGNATURES == (
            "matched-title",
            "matched-description",
            "subject-concept",
            "annotation-body",
            "annotation-text",
            "subject-concept-narrower",
            "annotation-body-narrower",
        )


class TestCrossLanguageEquivalence:
    def test_same_concept_found_under_every_label(self, bird_campaign):
        store, registry = bird_campaign.store, bird_campaign.registry
        for query in ("Eurasian eagle-owl", "Oehoe", "Bubo bubo", "Eagle owl"):
            assert search(store, registry, query).objects() == {bird(1)}, query

    def test_annotation_entered_in_one_language_found_in_another(self, bird_campaign):
        # a Dutch speaker tags bird-07 with the owl concept; an English
        # search by the English label finds it
        insert_annotations(
            bird_campaign.store,
            [make_annotation(bird(7), concept=IOC + "strix-aluco")],
        )
        result = search(bird_campaign.store, bird_campaign.registry, "Tawny owl")
        assert bird(7) in result.objects()
        result_nl = search(bird_campaign.store, bird_campaign.registry, "Bosuil")
        assert result_nl.objects() == result.objects()
