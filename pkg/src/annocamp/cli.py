"""Operator command line: load campaign inputs, serve the API, export,
and run the reporting commands. State lives in a directory holding the
store snapshot and the domain documents; every loading command re-saves
it on success."""

from __future__ import annotations

import signal
import sys
from typing import Optional

import click

from . import annotations, quality
from .api import DEFAULT_SESSION_TTL, create_app
from .campaign import open_campaign
from .errors import AnnocampError


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _open(state_dir: Optional[str], need_state: bool = True):
    if need_state and not state_dir:
        _fail("no state directory; pass --state-dir or set ANNOCAMP_STATE")
    try:
        return open_campaign(state_dir)
    except AnnocampError as exc:
        _fail(str(exc))


@click.group()
@click.option(
    "--state-dir",
    envvar="ANNOCAMP_STATE",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory holding store.nq and domains.json.",
)
@click.pass_context
def main(ctx: click.Context, state_dir: Optional[str]) -> None:
    """Nichesourcing annotation campaigns: load data, serve, report."""
    ctx.obj = state_dir


@main.command("load-vocabulary")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scheme", required=True, help="Concept scheme IRI.")
@click.pass_obj
def load_vocabulary(state_dir: Optional[str], path: str, scheme: str) -> None:
    """Load a Turtle vocabulary into a concept scheme."""
    campaign = _open(state_dir)
    try:
        loaded = campaign.load_vocabulary(path, scheme)
    except AnnocampError as exc:
        _fail(str(exc))
    campaign.save(state_dir)
    click.echo(f"loaded {len(loaded.concepts)} concepts into {scheme}")


@main.command("load-collection")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--domain", default=None, help="Bind ingested objects to this domain.")
@click.pass_obj
def load_collection(state_dir: Optional[str], path: str, domain: Optional[str]) -> None:
    """Ingest line-delimited JSON object records."""
    campaign = _open(state_dir)
    try:
        report = campaign.load_collection(path, domain=domain)
    except AnnocampError as exc:
        _fail(str(exc))
    campaign.save(state_dir)
    click.echo(f"ingested {report.ingested} objects" + (f" into domain {domain}" if domain else ""))
    for line, reason in report.skipped:
        click.echo(f"skipped line {line}: {reason}", err=True)


@main.command("load-domain")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def load_domain(state_dir: Optional[str], path: str) -> None:
    """Load a JSON domain configuration (with nested sub-domains)."""
    campaign = _open(state_dir)
    try:
        config = campaign.load_domains(path)
    except AnnocampError as exc:
        _fail(str(exc))
    campaign.save(state_dir)
    click.echo(f"loaded domain {config.id} ({len(campaign.registry.subtree_ids(config.id))} including sub-domains)")


@main.command("load-gold")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scheme", required=True, help="Concept scheme the gold concepts belong to.")
@click.pass_obj
def load_gold(state_dir: Optional[str], path: str, scheme: str) -> None:
    """Load a gold-standard CSV (object_id,field,concept_iri)."""
    campaign = _open(state_dir)
    try:
        gold = campaign.load_gold(path, scheme)
    except AnnocampError as exc:
        _fail(str(exc))
    campaign.save(state_dir)
    click.echo(f"loaded gold standard for {len(gold.entries)} object/field pairs")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--session-ttl", default=DEFAULT_SESSION_TTL, show_default=True, type=int)
@click.option("--expose-seed", is_flag=True, help="Honor the seed query parameter on task routes.")
@click.pass_obj
def serve(state_dir: Optional[str], host: str, port: int, session_ttl: int, expose_seed: bool) -> None:
    """Serve the HTTP API over the campaign state."""
    import uvicorn

    campaign = _open(state_dir, need_state=False)
    app = create_app(campaign, session_ttl_seconds=session_ttl, expose_seed=expose_seed)

    saved = False

    def _save_once() -> None:
        nonlocal saved
        if state_dir and not saved:
            saved = True
            campaign.save(state_dir)

    # uvicorn re-raises the shutdown signal with the pre-existing handler
    # once the server loop has drained, so this handler is what persists
    # state written over HTTP
    def _on_terminate(signum, frame):
        _save_once()
        sys.exit(0)

    signal.signal(signal.SIGTERM, _on_terminate)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        _save_once()


@main.command("export")
@click.option("--format", "fmt", required=True, type=click.Choice(["csv", "nt", "spreadsheet", "triples"]))
@click.option("--status", default=None)
@click.option("--object", "object_id", default=None)
@click.option("--lang", default=None)
@click.option("--output", default="-", help="Output file, - for stdout.")
@click.pass_obj
def export(
    state_dir: Optional[str],
    fmt: str,
    status: Optional[str],
    object_id: Optional[str],
    lang: Optional[str],
    output: str,
) -> None:
    """Export annotations as CSV or N-Triples."""
    campaign = _open(state_dir)
    try:
        text = annotations.export_annotations(
            campaign.store, fmt, language=lang, status=status, object_id=object_id
        )
    except AnnocampError as exc:
        _fail(str(exc))
    if output == "-":
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        click.echo(f"wrote {output}")


@main.command("stats")
@click.option("--domain", required=True)
@click.option("--format", "fmt", default="table", type=click.Choice(["table", "csv"]), show_default=True)
@click.pass_obj
def stats(state_dir: Optional[str], domain: str, fmt: str) -> None:
    """Annotation counts by field, body kind, and event/online context."""
    campaign = _open(state_dir)
    try:
        computed = quality.compute_stats(campaign.store, campaign.registry, domain)
    except AnnocampError as exc:
        _fail(str(exc))
    text = quality.stats_csv(computed) if fmt == "csv" else quality.stats_table(computed)
    click.echo(text, nl=False)


@main.command("evaluate-gold")
@click.option("--scheme", required=True, help="Concept scheme of the stored gold standard.")
@click.pass_obj
def evaluate_gold(state_dir: Optional[str], scheme: str) -> None:
    """Grade stored annotations against the stored gold standard."""
    campaign = _open(state_dir)
    try:
        gold = quality.gold_from_store(campaign.store, scheme)
        if not gold.entries:
            _fail(f"no gold standard stored for scheme {scheme}")
        stored = annotations.list_annotations(campaign.store)
        _, summary = quality.evaluate_gold(campaign.store, stored, gold)
    except AnnocampError as exc:
        _fail(str(exc))
    click.echo(f"exact: {summary.exact} ({summary.percentages['exact']}%)")
    click.echo(f"generalized: {summary.generalized} ({summary.percentages['generalized']}%)")
    click.echo(f"no-match: {summary.no_match} ({summary.percentages['no-match']}%)")
    click.echo(f"not-evaluable: {summary.not_evaluable}")
    click.echo(f"evaluable: {summary.evaluable}")


@main.command("finalize-reviews")
@click.option("--policy", required=True, type=click.Choice(list(quality.POLICIES)))
@click.pass_obj
def finalize_reviews(state_dir: Optional[str], policy: str) -> None:
    """Apply review decisions to annotation statuses."""
    campaign = _open(state_dir)
    try:
        changes = quality.finalize_reviews(campaign.store, policy)
    except AnnocampError as exc:
        _fail(str(exc))
    campaign.save(state_dir)
    for change in changes:
        click.echo(f"{change.annotation}: {change.old} -> {change.new}")
    click.echo(f"finalized {len(changes)} annotations")


@main.command("snapshot")
@click.option("--output", required=True, type=click.Path(dir_okay=False))
@click.pass_obj
def snapshot(state_dir: Optional[str], output: str) -> None:
    """Write the full store as sorted N-Quads."""
    campaign = _open(state_dir)
    count = campaign.store.snapshot(output)
    click.echo(f"wrote {count} quads to {output}")


if __name__ == "__main__":
    main()
