"""Score a campaign state directory: gold-standard match rates plus the
event/online contribution split for one domain.

    python3 scripts/evaluate_campaign.py --state-dir DIR --domain birds \
        [--scheme urn:annocamp:scheme:ioc]

Run scripts/demo_pipeline.py first if you have no state directory yet.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from annocamp import quality
from annocamp.annotations import list_annotations
from annocamp.campaign import open_campaign
from annocamp.errors import AnnocampError


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--state-dir", required=True)
    parser.add_argument("--domain", required=True)
    parser.add_argument("--scheme", default="urn:annocamp:scheme:ioc")
    args = parser.parse_args()

    campaign = open_campaign(args.state_dir)
    store = campaign.store

    try:
        gold = quality.gold_from_store(store, args.scheme)
        _, summary = quality.evaluate_gold(store, list_annotations(store), gold)
        print(f"gold standard ({len(gold.entries)} object/field pairs):")
        for kind in ("exact", "generalized", "no-match"):
            print(f"  {kind}: {summary.percentages[kind]}%")
        print(f"  evaluable: {summary.evaluable}, not evaluable: {summary.not_evaluable}")
    except AnnocampError as exc:
        print(f"gold standard skipped: {exc}")

    try:
        stats = quality.compute_stats(store, campaign.registry, args.domain)
    except AnnocampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)
    print(quality.stats_table(stats))


if __name__ == "__main__":
    main()
