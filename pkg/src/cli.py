"""Command line for the razor toolkit."""
import functools
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import click

from . import catalog, config
from .catalog import CatalogEntry
from .engine import ModelCase, RazorEngine, hierarchy_matrix
from .errors import RazorError
from .graph_core import Dag
from .harness import catalog_cases, cited_witnesses, diff_against_expected, verify_example
from .imset import param_count_via_imset, parameterizing_sets
from .independence import IndependenceModel
from .multinomial import MultinomialModel, RangeSpec, extract_independence_model, joint_from_model, param_count
from .razors import RazorId
from .scoring import BIC, NEC, ScoreReport, bic, nec_report, sample
from .transforms import chickering_sequence, validate_sequence
from .utils import formats

logger = logging.getLogger(__name__)

EXIT_MISMATCH = 1
EXIT_INPUT = 2


@dataclass
class _Source:
    """Whatever a model argument resolved to."""

    name: str
    p_model: Optional[IndependenceModel]
    ranges: Optional[RangeSpec]
    model: Optional[MultinomialModel] = None
    entry: Optional[CatalogEntry] = None


def _guarded(command):
    """Map library errors to exit code 2 with a one-line message."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (RazorError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _load_source(model_path: Optional[str], example: Optional[str]) -> _Source:
    if bool(model_path) == bool(example):
        raise click.UsageError("give exactly one of --model or --example")
    if example:
        entry = catalog.load(example)
        return _Source(entry.id, entry.p_model, entry.ranges, entry.model, entry)
    p_model, ranges, model = formats.load_model_source(model_path)
    if model is not None:
        p_model = extract_independence_model(joint_from_model(model))
    return _Source(Path(model_path).stem, p_model, ranges, model)


def _load_dag(value: str, source: Optional[_Source] = None) -> Dag:
    """A DAG file path, or the name of a DAG in the selected catalog entry."""
    if source is not None and source.entry is not None and value in source.entry.dags:
        return source.entry.dag(value)
    return formats.load_dag(value)


def _emit(ctx: click.Context, text: str, payload):
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(text, nl=False)


def _model_options(command):
    command = click.option("--example", "example", help="Catalog id or alias to use as the model")(command)
    return click.option(
        "--model", "model_path", type=click.Path(exists=True, dir_okay=False), help="Model JSON file (CIs or θ-tables)"
    )(command)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", help="Output format")
@click.option("--max-m", type=int, default=None, help=f"Enumeration ceiling (default {config.MAX_M})")
@click.option("--threads", type=int, default=None, help=f"Worker threads (default {config.THREADS})")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level")
@click.pass_context
def cli(ctx: click.Context, fmt: str, max_m: Optional[int], threads: Optional[int], verbose: bool):
    """
    Causal razors - decide which DAGs each razor accepts for a given independence model.

    Models come from JSON files or from the bundled example catalog.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else config.LOG_LEVEL,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, max_m=max_m, threads=threads)


@cli.command()
@click.argument("dag")
@_model_options
@click.option("--razor", "razors", multiple=True, help="Razor to check (repeatable, default all)")
@click.pass_context
@_guarded
def classify(ctx, dag, model_path, example, razors):
    """Membership of DAG in every razor class."""
    source = _load_source(model_path, example)
    g = _load_dag(dag, source)
    engine = RazorEngine(
        source.p_model, source.ranges, max_m=ctx.obj["max_m"], threads=ctx.obj["threads"], extra_dags=(g,)
    )
    verdict = engine.classify(g, list(razors) or None)
    _emit(ctx, formats.serialize_verdict_text(verdict), formats.verdict_to_dict(verdict))


@cli.command("enumerate-class")
@click.argument("razor")
@_model_options
@click.pass_context
@_guarded
def enumerate_class(ctx, razor, model_path, example):
    """Every DAG in one razor class."""
    source = _load_source(model_path, example)
    rid = RazorId.parse(razor)
    engine = RazorEngine(source.p_model, source.ranges, max_m=ctx.obj["max_m"], threads=ctx.obj["threads"])
    members = engine.class_of(rid)
    text = f"{rid} over {source.name}: {len(members)} DAG(s)\n" + "".join(f"{g.label}\n" for g in members)
    _emit(ctx, text, {"razor": str(rid), "model": source.name, "dags": [g.label for g in members]})


@cli.command()
@click.argument("model_files", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--against-expected", is_flag=True, help="Diff cell statuses against the stored expected matrix")
@click.option(
    "--expected", "expected_path", type=click.Path(exists=True, dir_okay=False), help="Alternative expected matrix"
)
@click.pass_context
@_guarded
def hierarchy(ctx, model_files, against_expected, expected_path):
    """Pairwise subset relations between the thirteen razor classes.

    Without MODEL_FILES the bundled catalog is used.
    """
    cited = {}
    if model_files:
        cases = []
        for path in model_files:
            source = _load_source(path, None)
            cases.append(ModelCase(source.name, source.p_model, source.ranges))
    else:
        cases = catalog_cases()
        cited = cited_witnesses(expected_path)
    matrix = hierarchy_matrix(cases, max_m=ctx.obj["max_m"], threads=ctx.obj["threads"], cited=cited)
    _emit(ctx, formats.serialize_matrix_text(matrix), formats.matrix_to_dict(matrix))
    if against_expected:
        mismatches = diff_against_expected(matrix, expected_path)
        for mismatch in mismatches:
            click.echo(f"mismatch: {mismatch}", err=True)
        click.echo(f"{len(mismatches)} cell(s) differ from the expected matrix", err=True)
        if mismatches:
            sys.exit(EXIT_MISMATCH)


@cli.command("verify-example")
@click.argument("example_ids", nargs=-1)
@click.pass_context
@_guarded
def verify_example_command(ctx, example_ids):
    """Recompute the expected facts of catalog entries (all of them by default)."""
    failed = False
    payload = []
    for name in example_ids or catalog.ids():
        report = verify_example(name, max_m=ctx.obj["max_m"], threads=ctx.obj["threads"])
        failed = failed or not report.passed
        payload.append(
            {
                "id": report.example_id,
                "passed": report.passed,
                "facts": [
                    {"kind": r.kind, "claim": r.claim, "expected": r.expected, "actual": r.actual, "passed": r.passed}
                    for r in report.results
                ],
            }
        )
        if ctx.obj["format"] == "text":
            click.echo(f"{report.example_id}: {'pass' if report.passed else 'FAIL'}")
            for result in report.results:
                mark = "ok  " if result.passed else "FAIL"
                line = f"  {mark} {result.kind}: {result.claim}"
                if not result.passed:
                    line += f" (expected {result.expected}, got {result.actual})"
                click.echo(line)
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2))
    if failed:
        sys.exit(EXIT_MISMATCH)


def _parse_ranges(text: str) -> RangeSpec:
    try:
        return RangeSpec(tuple(int(v) for v in text.split(",")))
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from exc


@cli.command()
@click.argument("dag", type=click.Path(exists=True, dir_okay=False))
@click.option("--ranges", "ranges_text", help="Comma-separated ranges, e.g. 2,2,3, to print parameter counts")
@click.pass_context
@_guarded
def imset(ctx, dag, ranges_text):
    """Parameterizing sets of DAG, annotated with their witnesses."""
    g = formats.load_dag(dag)
    family = parameterizing_sets(g)
    text = formats.parameterizing_sets_text(family)
    payload = {
        "m": family.m,
        "sets": [{"vertices": list(s), "witness": family.witness_of(s)} for s in family.as_vertex_sets()],
    }
    if ranges_text:
        ranges = _parse_ranges(ranges_text)
        direct, via_imset = param_count(g, ranges), param_count_via_imset(g, ranges)
        text += f"param_count: {direct} (via parameterizing sets: {via_imset})\n"
        payload.update(param_count=direct, param_count_via_imset=via_imset)
    _emit(ctx, text, payload)


@cli.command()
@click.argument("h", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--check",
    "transcript",
    type=click.Path(exists=True, dir_okay=False),
    help="Validate a saved transcript instead of searching",
)
@click.pass_context
@_guarded
def chickering(ctx, h, g, transcript):
    """Covered reversals and deletions taking H to G."""
    h_dag, g_dag = formats.load_dag(h), formats.load_dag(g)
    if transcript:
        start, steps = formats.load_transcript(transcript)
        valid = start == h_dag and validate_sequence(h_dag, g_dag, steps)
        click.echo(f"transcript {'valid' if valid else 'INVALID'}: {len(steps)} step(s)")
        if not valid:
            sys.exit(EXIT_MISMATCH)
        return
    steps = chickering_sequence(h_dag, g_dag)
    if steps is None:
        _emit(ctx, "no sequence: I(H) is not contained in I(G)\n", {"sequence": None})
        return
    _emit(
        ctx,
        formats.serialize_transcript(h_dag, steps),
        {"start": h_dag.label, "steps": [{"move": str(s), "dag": s.dag.label} for s in steps]},
    )


@cli.command("sample")
@_model_options
@click.option("--n", "n", type=int, required=True, help="Number of rows")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for the PCG64 stream")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the dataset here instead of stdout")
@_guarded
def sample_command(model_path, example, n, seed, output):
    """Draw an i.i.d. dataset from a multinomial model."""
    source = _load_source(model_path, example)
    if source.model is None:
        raise click.UsageError(f"{source.name} has no θ-tables to sample from")
    data = sample(joint_from_model(source.model), n, seed, source.name)
    text = formats.serialize_dataset(data)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"wrote {n} rows to {output}")
    else:
        click.echo(text, nl=False)


def _best(reports: Sequence[ScoreReport]) -> ScoreReport:
    return max(reports, key=lambda r: r.value)


@cli.command()
@click.argument("dags", nargs=-1, required=True)
@_model_options
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False), help="Dataset file for BIC")
@click.option("--criterion", type=click.Choice(["nec", "bic", "both"]), default="both", show_default=True)
@click.option("--n", "n", type=int, default=None, help="Sample size when BIC data is drawn from the model")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--c", "c", type=float, default=1.0, show_default=True, help="BIC penalty multiplier")
@click.pass_context
@_guarded
def score(ctx, dags, model_path, example, data_path, criterion, n, seed, c):
    """Score DAGS by NEC, BIC or both; with several DAGs, report which one each criterion prefers."""
    source = _load_source(model_path, example) if (model_path or example) else None
    graphs = [_load_dag(d, source) for d in dags]
    reports = {NEC: [], BIC: []}

    if criterion in ("nec", "both"):
        if source is None or source.p_model is None:
            raise click.UsageError("NEC needs --model or --example")
        reports[NEC] = [nec_report(g, source.p_model) for g in graphs]

    if criterion in ("bic", "both"):
        if data_path:
            data = formats.load_dataset(data_path)
        elif source is not None and source.model is not None and n:
            data = sample(joint_from_model(source.model), n, seed, source.name)
        else:
            raise click.UsageError("BIC needs --data, or θ-tables together with --n")
        reports[BIC] = [bic(g, data, c) for g in graphs]

    chosen = [r for key in (NEC, BIC) for r in reports[key]]
    text = "".join(formats.serialize_score_text(r) for r in chosen)
    payload = {"reports": [formats.score_report_to_dict(r) for r in chosen]}
    if len(graphs) > 1:
        for key in (NEC, BIC):
            if reports[key]:
                best = _best(reports[key]).dag.label
                text += f"{key} prefers {best}\n"
                payload[f"{key.lower()}_best"] = best
        if reports[NEC] and reports[BIC]:
            disagree = _best(reports[NEC]).dag != _best(reports[BIC]).dag
            text += f"criteria {'disagree' if disagree else 'agree'}\n"
            payload["disagree"] = disagree
    _emit(ctx, text, payload)


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
