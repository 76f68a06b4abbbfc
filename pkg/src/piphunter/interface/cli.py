"""Operator CLI: hunt, train, evaluate, extract contacts, cluster,
revisit, report, simulate, serve, and label import/export.

All output goes to stdout or JSON files; no interactive prompts. Usage
errors exit 2, operational failures exit 1 with a diagnostic.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from collections import defaultdict

import click

from .. import campaigns as campaigns_mod
from .. import classify, hunt, monitor
from ..contacts import contacts_from_post
from ..errors import PipHunterError
from ..osnsim import generate_corpus, post_document
from ..store import Store
from .api import ApiState, create_api
from .config import PipelineConfig, load_config
from .runtime import Runtime


class _Ctx:
    def __init__(self, config: PipelineConfig, dry_run: bool):
        self.config = config
        self.dry_run = dry_run
        self.runtime = Runtime(config)

    def store(self) -> Store:
        return Store(self.config.store_dir)


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, ensure_ascii=False))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="pipeline config file (key = value lines)")
@click.option("--store-dir", default=None, help="override the store directory")
@click.option("--manifest", default=None, help="override the simulator manifest path")
@click.option("--dry-run", is_flag=True, help="describe actions without writing")
@click.pass_context
def main(ctx, config_path, store_dir, manifest, dry_run):
    """Illicit-promotion hunting pipeline."""
    try:
        config = load_config(config_path) if config_path else PipelineConfig()
        if store_dir:
            config.store_dir = store_dir
        if manifest:
            config.manifest = manifest
        config.validate()
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    ctx.obj = _Ctx(config, dry_run)


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(f"{type(exc).__name__}: {exc}")


@main.command("hunt")
@click.option("--rounds", type=int, default=1, show_default=True)
@click.option("--seeds", "seeds_path", type=click.Path(exists=True), default=None,
              help="seed keyword file (hashtag:<v> / account:<v> lines)")
@click.option("--report-log", type=click.Path(), default=None)
@click.pass_obj
def hunt_cmd(ctx, rounds, seeds_path, report_log):
    """Run hunting rounds against the simulator."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "hunt", "rounds": rounds})
        return
    try:
        seeds = seeds_path or ctx.config.seed_keywords
        if not seeds:
            raise click.ClickException("no seed keywords configured")
        kset = hunt.KeywordSet.from_seed_file(seeds)
        store = ctx.store()
        hunter = hunt.Hunter(
            kset,
            ctx.runtime.simulator(),
            ctx.runtime.classifier(),
            store,
            hunt.HuntConfig(
                rcp_threshold=ctx.config.rcp_threshold,
                keyword_budget=ctx.config.keyword_budget,
                timeline_limit=ctx.config.timeline_limit,
                search_limit=ctx.config.search_limit,
                seed=ctx.config.seed,
            ),
        )
        reports = hunter.run(rounds, report_log=report_log)
        for kw in kset.all():
            store.put_keyword({"kind": kw.kind, "value": kw.value, "state": kw.state})
        store.close()
        for report in reports:
            _echo_json(report.to_dict())
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command()
@click.option("--binary", "mode", flag_value="binary", default=True)
@click.option("--multiclass", "mode", flag_value="multiclass")
@click.pass_obj
def train(ctx, mode):
    """Train the binary or multiclass classifier from the manifest corpus."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "train", "mode": mode})
        return
    try:
        if mode == "binary":
            model = ctx.runtime.train_binary()
        else:
            model = ctx.runtime.train_multiclass()
        _echo_json({"mode": mode, "dim": model.dim, "meta": model.training_meta})
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command("eval")
@click.option("--kfold", type=int, default=5, show_default=True)
@click.option("--binary", "mode", flag_value="binary", default=True)
@click.option("--multiclass", "mode", flag_value="multiclass")
@click.pass_obj
def eval_cmd(ctx, kfold, mode):
    """Stratified k-fold evaluation on the manifest corpus."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "eval", "kfold": kfold, "mode": mode})
        return
    try:
        samples = ctx.runtime.training_samples()
        dim = len(ctx.runtime.vocab.term_index)
        tc = ctx.runtime.train_config()
        if mode == "binary":
            data = [(v, pip) for v, pip, _ in samples]
            report = classify.cross_validate(
                data, kfold,
                fit=lambda tr: classify.train_binary(tr, tc, dim=dim),
                predict=lambda m, v: classify.predict_binary(m, v, tc.threshold).is_pip,
                seed=ctx.config.seed,
            )
        else:
            data = [(v, cat) for v, pip, cat in samples if pip]
            report = classify.cross_validate(
                data, kfold,
                fit=lambda tr: classify.train_multiclass(tr, tc, dim=dim),
                predict=classify.predict_multiclass,
                seed=ctx.config.seed,
            )
        _echo_json(
            {
                "mode": mode,
                "kfold": kfold,
                "precision": report.precision,
                "recall": report.recall,
                "f1": report.f1,
                "macro_precision": report.macro_precision,
                "macro_recall": report.macro_recall,
                "per_fold": report.per_fold,
            }
        )
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command("extract-contacts")
@click.pass_obj
def extract_contacts_cmd(ctx):
    """Extract next-hop contacts from every stored PIP."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "extract-contacts"})
        return
    try:
        store = ctx.store()
        tagger = ctx.runtime.tagger()
        fetcher = None
        if ctx.config.manifest:
            fetcher = ctx.runtime.simulator().fetch
        n = 0
        warnings = []
        for post in store.pip_posts():
            found, warns = contacts_from_post(post, tagger, fetcher)
            warnings.extend(warns)
            for contact in found:
                store.put_contact(contact.to_dict())
                n += 1
        store.close()
        _echo_json({"contacts": n, "warnings": warnings})
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command()
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="write the cluster graph JSON here instead of stdout")
@click.pass_obj
def cluster(ctx, out_path):
    """Flood-fill campaign clusters over stored PIPs and contacts."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "cluster"})
        return
    try:
        store = ctx.store()
        from .api import _contact_from_dict

        by_post = defaultdict(list)
        for data in store.all("contacts"):
            if data.get("post_id"):
                by_post[data["post_id"]].append(_contact_from_dict(data))
        triples = [(p, p.author_id, by_post.get(p.id, [])) for p in store.pip_posts()]
        graph = campaigns_mod.build_graph(triples)
        found = campaigns_mod.flood_fill(graph)
        campaigns_mod.attach_categories(
            found,
            {p.id: (p.label or {}).get("category") for p in store.pip_posts()
             if (p.label or {}).get("category")},
        )
        payload = {
            "graph": graph.to_json_dict(),
            "campaigns": [dataclasses.asdict(c) for c in found],
            "stats": campaigns_mod.campaign_stats(found),
        }
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, ensure_ascii=False)
            _echo_json({"campaigns": len(found), "out": out_path})
        else:
            _echo_json(payload)
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command()
@click.option("--cadence", type=float, default=None, help="days between revisits")
@click.option("--probes", type=int, default=4, show_default=True)
@click.pass_obj
def revisit(ctx, cadence, probes):
    """Probe availability of stored PIPs on a revisit cadence."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "revisit"})
        return
    try:
        cadence = cadence or ctx.config.revisit_cadence_days
        store = ctx.store()
        sim = ctx.runtime.simulator()
        pips = store.pip_posts()
        cohorts = monitor.build_cohorts(pips, window_days=cadence)
        n = 0
        for cohort in cohorts:
            records = monitor.schedule_revisits(
                cohort.member_post_ids, cadence, sim, probes,
                start_time=cohort.window_end,
            )
            for rec in records:
                store.put_revisit(dict(rec.to_dict(), cohort_id=cohort.cohort_id))
                n += 1
        store.close()
        _echo_json({"cohorts": len(cohorts), "probes": n})
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command()
@click.option("--table", type=click.Choice(["categories", "evasion", "contacts", "engagement"]),
              required=True)
@click.pass_obj
def report(ctx, table):
    """Emit a report table as CSV on stdout."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "report", "table": table})
        return
    try:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        if table == "categories":
            counts = _category_counts(ctx)
            total = sum(counts.values())
            writer.writerow(["category", "count", "share"])
            for cat, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
                writer.writerow([cat, n, repr(n / total)])
        elif table == "evasion":
            _evasion_rows(ctx, writer)
        elif table == "contacts":
            store = ctx.store()
            counts = defaultdict(int)
            for data in store.all("contacts"):
                counts[data["kind"]] += 1
            writer.writerow(["contact_kind", "count"])
            for kind, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
                writer.writerow([kind, n])
        else:
            store = ctx.store()
            pips = store.pip_posts()
            crawl = max((p.created_at for p in pips), default=0.0)
            writer.writerow(
                ["elapse_days", "n_posts", "mean_likes", "mean_replies",
                 "mean_retweets", "mean_quotes"]
            )
            for bucket in monitor.engagement_curve(pips, crawl):
                writer.writerow(
                    [bucket.elapse_days, bucket.n_posts, bucket.mean_likes,
                     bucket.mean_replies, bucket.mean_retweets, bucket.mean_quotes]
                )
        sys.stdout.write(out.getvalue())
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


def _category_counts(ctx) -> dict[str, int]:
    """Ground-truth category counts from the manifest corpus when one is
    configured, otherwise from stored PIP labels."""
    if ctx.config.manifest:
        corpus = ctx.runtime.corpus()
        counts: dict[str, int] = defaultdict(int)
        for lab in corpus.labels.values():
            if lab["is_pip"]:
                counts[lab["category"]] += 1
        return counts
    store = ctx.store()
    counts = defaultdict(int)
    for p in store.pip_posts():
        cat = (p.label or {}).get("category")
        if cat:
            counts[cat] += 1
    if not counts:
        raise click.ClickException("no categorized PIPs available")
    return counts


def _evasion_rows(ctx, writer) -> None:
    """Cohort-per-row evasion table: ER at each revisit tick."""
    sim = ctx.runtime.simulator()
    corpus = ctx.runtime.corpus()
    pips = [p for p in corpus.posts if corpus.labels[p.id]["is_pip"]]
    cadence = ctx.config.revisit_cadence_days
    n_probes = 4
    cohorts = monitor.build_cohorts(pips, window_days=cadence)
    writer.writerow(
        ["cohort", "window_start", "window_end", "n_posts"]
        + [f"rv_{i}" for i in range(1, n_probes + 1)]
    )
    for cohort in cohorts:
        records = monitor.schedule_revisits(
            cohort.member_post_ids, cadence, sim, n_probes,
            start_time=cohort.window_end,
        )
        row = [cohort.cohort_id, cohort.window_start, cohort.window_end,
               len(cohort.member_post_ids)]
        for tick in range(1, n_probes + 1):
            t = cohort.window_end + cadence * tick
            row.append(repr(monitor.evasion_rate(cohort.member_post_ids, records, t)))
        writer.writerow(row)


@main.command()
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), required=True)
@click.option("--ingest", is_flag=True, help="store generated posts with ground-truth labels")
@click.pass_obj
def simulate(ctx, manifest_path, ingest):
    """Generate the simulator corpus and print a summary."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "simulate", "manifest": manifest_path})
        return
    try:
        from ..osnsim import SimManifest

        corpus = generate_corpus(SimManifest.load(manifest_path))
        if ingest:
            store = ctx.store()
            for account in corpus.accounts:
                account.is_pip = corpus.profile_labels.get(account.id, False)
                store.put_account(account)
            for post in corpus.posts:
                post.label = dict(corpus.labels[post.id])
                store.put_post(post)
            store.close()
        pips = corpus.pip_post_ids()
        _echo_json(
            {
                "posts": len(corpus.posts),
                "pips": len(pips),
                "accounts": len(corpus.accounts),
                "ingested": bool(ingest),
            }
        )
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_obj
def serve(ctx, port, host):
    """Serve the analyst API."""
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "serve", "port": port})
        return
    try:
        import uvicorn

        app = create_api(build_api_state(ctx.config))
        uvicorn.run(app, host=host, port=port)
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


def build_api_state(config: PipelineConfig) -> ApiState:
    runtime = Runtime(config)
    store = Store(config.store_dir)
    vocab = model = categorizer = None
    try:
        vocab = runtime.vocab
        model = runtime.binary_model()
        categorizer = runtime.categorizer()
    except PipHunterError:
        pass  # the API still serves labeling without a trained model
    return ApiState(
        store,
        vocab=vocab,
        binary_model=model,
        train_config=runtime.train_config(),
        categorizer=categorizer,
    )


@main.group()
def label():
    """Label import/export."""


@label.command("export")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.pass_obj
def label_export(ctx, out_path):
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "label export", "out": out_path})
        return
    try:
        n = ctx.store().export_jsonl("labels", out_path)
        _echo_json({"exported": n, "out": out_path})
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


@label.command("import")
@click.option("--in", "in_path", type=click.Path(exists=True), required=True)
@click.pass_obj
def label_import(ctx, in_path):
    if ctx.dry_run:
        _echo_json({"dry_run": True, "action": "label import", "in": in_path})
        return
    try:
        store = ctx.store()
        n = store.import_jsonl(in_path)
        store.close()
        _echo_json({"imported": n})
    except (PipHunterError, ValueError, OSError) as exc:
        raise _fail(exc)


if __name__ == "__main__":
    main()
