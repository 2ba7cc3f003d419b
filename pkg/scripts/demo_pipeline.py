"""Walk one campaign through its whole life on the bundled fixtures:
load, assign, annotate, search, review, export. No server involved;
everything goes through the library so the output is deterministic.

    python3 scripts/demo_pipeline.py [--state-dir DIR] [--seed N]
"""

import argparse
import pathlib
import sys
import tempfile

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from annocamp import assignment, quality, search, users
from annocamp.annotations import export_annotations, submit_annotation
from annocamp.campaign import Campaign

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
IOC = "urn:annocamp:ioc:"
IOC_SCHEME = "urn:annocamp:scheme:ioc"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--state-dir", help="persist the campaign here instead of a temp dir")
    parser.add_argument("--seed", type=int, default=7, help="assignment shuffle seed")
    args = parser.parse_args()

    campaign = Campaign()
    scheme = campaign.load_vocabulary(str(FIXTURES / "vocab" / "mini_ioc.ttl"), IOC_SCHEME)
    campaign.load_domains(str(FIXTURES / "domains" / "birds.json"))
    report = campaign.load_collection(str(FIXTURES / "collections" / "birds.jsonl"), domain="birds")
    campaign.load_gold(str(FIXTURES / "gold" / "birds_gold.csv"), IOC_SCHEME)
    print(f"loaded {len(scheme.concepts)} concepts and {report.ingested} objects")

    store, registry = campaign.store, campaign.registry
    erika = users.register(store, "erika", "Erika", "owl-watcher-9")
    reviewer = users.register(store, "jan", "Jan", "owl-watcher-9")
    users.set_expertise(store, registry, erika, "birds", {IOC + "strigiformes": 5})

    tasks = assignment.assign(store, registry, erika, "birds", 5, seed=args.seed)
    print("recommended for erika:")
    for task in tasks:
        print(f"  {task.object}  (annotators so far: {task.annotator_count}, score {task.score:.2f})")

    target = tasks[0].object
    annotation = submit_annotation(
        store, registry,
        user=erika, domain="birds", object_id=target, field_id="common-name",
        body_kind="concept", concept=IOC + "bubo-bubo", entered_text="Bubo bubo",
        region={"x": 40, "y": 60, "w": 200, "h": 150},
    )
    print(f"erika tagged {target} with Bubo bubo inside a 200x150 box")

    # two more tags the gold standard can grade: one exact, one a single
    # broader step above the gold concept
    submit_annotation(
        store, registry,
        user=erika, domain="birds", object_id="urn:annocamp:object:bird-01", field_id="common-name",
        body_kind="concept", concept=IOC + "bubo-bubo", entered_text="Eurasian eagle-owl",
        region={"x": 10, "y": 10, "w": 80, "h": 80},
    )
    submit_annotation(
        store, registry,
        user=reviewer, domain="birds", object_id="urn:annocamp:object:bird-10", field_id="common-name",
        body_kind="concept", concept=IOC + "strix", entered_text="Wood owls",
        region={"x": 10, "y": 10, "w": 80, "h": 80},
    )

    hits = search.search(store, registry, query="Eagle owl", language="en")
    for cluster in hits.clusters:
        objects = ", ".join(hit.object.rsplit(":", 1)[-1] for hit in cluster.hits)
        print(f"search 'Eagle owl' [{cluster.key}]: {objects}")

    quality.review(store, annotation.id, reviewer, "correct")
    for change in quality.finalize_reviews(store, "single-reviewer"):
        print(f"review outcome: {change.annotation.rsplit(':', 1)[-1]} {change.old} -> {change.new}")

    csv_text = export_annotations(store, "csv", language="en", status="accepted")
    print(f"accepted export: {len(csv_text.splitlines()) - 1} row(s)")

    state_dir = args.state_dir or tempfile.mkdtemp(prefix="annocamp-demo-")
    campaign.save(state_dir)
    print(f"campaign state saved to {state_dir}")


if __name__ == "__main__":
    main()
