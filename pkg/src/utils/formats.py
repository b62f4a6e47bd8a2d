"""Parsing and serialisation of every external text format."""
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import FormatError, RazorError
from ..graph_core import Dag
from ..independence import CiStatement, IndependenceModel
from ..multinomial import MultinomialModel, RangeSpec, to_fraction


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from exc


def _dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _edge_list(edges: Sequence[Tuple[int, int]]) -> str:
    return ",".join(f"{j}->{k}" for j, k in edges) or "-"


def _parse_edge(text: str, line: Optional[int] = None) -> Tuple[int, int]:
    parts = text.replace(" ", "").split("->")
    if len(parts) != 2:
        raise FormatError(f"expected 'j -> k', got {text.strip()!r}", line)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise FormatError(f"edge endpoints must be integers, got {text.strip()!r}", line) from exc


# DAG text: "m=<int>" then one "j -> k" per line


def serialize_dag(g: Dag) -> str:
    lines = [f"m={g.m}"] + [f"{j} -> {k}" for j, k in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_dag(text: str) -> Dag:
    """
    Parse the DAG text format.

    Args:
        text: file contents; blank lines and ``#`` comments are ignored

    Returns:
        Dag: the parsed graph
    """
    m = None
    edges = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            if not line.startswith("m="):
                raise FormatError("first line must be 'm=<int>'", number)
            try:
                m = int(line[2:])
            except ValueError as exc:
                raise FormatError(f"bad vertex count {line[2:]!r}", number) from exc
            continue
        edges.append((_parse_edge(line, number), number))
    if m is None:
        raise FormatError("missing 'm=<int>' header", 1)
    try:
        return Dag(m, frozenset(edge for edge, _ in edges))
    except RazorError as exc:
        raise FormatError(str(exc), edges[-1][1] if edges else 1) from exc


def load_dag(path: str) -> Dag:
    return parse_dag(_read(path))


# Independence model JSON: {"m": ..., "cis": [{"i", "j", "s"}]}


def independence_model_to_dict(model: IndependenceModel) -> Dict[str, Any]:
    return {
        "m": model.m,
        "cis": [{"i": ci.i, "j": ci.j, "s": sorted(ci.s)} for ci in model.statements()],
    }


def serialize_independence_model(model: IndependenceModel) -> str:
    return _dump_json(independence_model_to_dict(model))


def independence_model_from_dict(payload: Dict[str, Any]) -> IndependenceModel:
    try:
        m = int(payload["m"])
        cis = [CiStatement.of(int(ci["i"]), int(ci["j"]), [int(v) for v in ci.get("s", [])]) for ci in payload["cis"]]
        return IndependenceModel(m, frozenset(cis))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed independence model: {exc}") from exc


def parse_independence_model(text: str) -> IndependenceModel:
    return independence_model_from_dict(_load_json(text))


# Multinomial model JSON: {"ranges": [...], "edges": [[j, k]], "cpt": {"<i>": [[...]]}}


def _fraction_text(p: Fraction) -> str:
    return str(p)


def model_to_dict(model: MultinomialModel) -> Dict[str, Any]:
    return {
        "ranges": list(model.ranges.r),
        "edges": [[j, k] for j, k in model.dag.sorted_edges()],
        "cpt": {
            str(v): [[_fraction_text(p) for p in row] for row in model.tables[v].rows] for v in model.dag.vertices
        },
    }


def serialize_model(model: MultinomialModel) -> str:
    return _dump_json(model_to_dict(model))


def model_from_dict(payload: Dict[str, Any]) -> MultinomialModel:
    try:
        ranges = RangeSpec(tuple(payload["ranges"]))
        dag = Dag(ranges.m, frozenset((int(j), int(k)) for j, k in payload["edges"]))
        rows = {int(v): [[to_fraction(p) for p in row] for row in table] for v, table in payload["cpt"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed model: {exc}") from exc
    return MultinomialModel.from_rows(dag, ranges, rows)


def parse_model(text: str) -> MultinomialModel:
    return model_from_dict(_load_json(text))


def load_model_source(path: str) -> Tuple[Optional[IndependenceModel], Optional[RangeSpec], Optional[MultinomialModel]]:
    """An independence-model file or a multinomial model file, told apart by their keys.

    Returns ``(p_model, ranges, model)``; for a multinomial file ``p_model`` is
    left to the caller to extract.
    """
    payload = _load_json(_read(path))
    if not isinstance(payload, dict):
        raise FormatError(f"{path} must hold a JSON object")
    if "cpt" in payload:
        model = model_from_dict(payload)
        return None, model.ranges, model
    if "cis" in payload:
        ranges = RangeSpec(tuple(payload["ranges"])) if payload.get("ranges") else None
        return independence_model_from_dict(payload), ranges, None
    raise FormatError(f"{path} is neither an independence model nor a multinomial model")


# Dataset text: "ranges: [...]", "n: <int>", then one space-separated row per line


def serialize_dataset(data) -> str:
    lines = [f"ranges: {json.dumps(list(data.ranges.r))}", f"n: {data.n}"]
    lines += [" ".join(str(int(v)) for v in row) for row in data.frame.itertuples(index=False)]
    return "\n".join(lines) + "\n"


def parse_dataset(text: str):
    from ..scoring import Dataset

    lines = text.splitlines()
    if len(lines) < 2 or not lines[0].startswith("ranges:") or not lines[1].startswith("n:"):
        raise FormatError("dataset must start with 'ranges: [...]' and 'n: <int>'", 1)
    try:
        ranges = RangeSpec(tuple(json.loads(lines[0][len("ranges:"):])))
    except (json.JSONDecodeError, TypeError, RazorError) as exc:
        raise FormatError(f"bad ranges header: {exc}", 1) from exc
    try:
        n = int(lines[1][len("n:"):])
    except ValueError as exc:
        raise FormatError("bad row count", 2) from exc
    rows: List[List[int]] = []
    for number, raw in enumerate(lines[2:], start=3):
        if not raw.strip():
            continue
        try:
            row = [int(v) for v in raw.split()]
        except ValueError as exc:
            raise FormatError(f"non-integer value in {raw!r}", number) from exc
        if len(row) != ranges.m:
            raise FormatError(f"expected {ranges.m} values, got {len(row)}", number)
        for v, value in enumerate(row, start=1):
            if not 0 <= value < ranges.of(v):
                raise FormatError(f"X{v}={value} is outside 0..{ranges.of(v) - 1}", number)
        rows.append(row)
    if len(rows) != n:
        raise FormatError(f"header says n={n} but {len(rows)} rows follow", 2)
    return Dataset.from_rows(ranges, rows)


def load_dataset(path: str):
    return parse_dataset(_read(path))


# Chickering transcript: "m=<int>", "start | edges", then "<k>. <kind> j->k | edges"


def serialize_transcript(h: Dag, steps) -> str:
    lines = [f"m={h.m}", f"start | {_edge_list(h.sorted_edges())}"]
    for number, step in enumerate(steps, start=1):
        lines.append(f"{number}. {step} | {_edge_list(step.dag.sorted_edges())}")
    return "\n".join(lines) + "\n"


def _parse_edges_field(text: str, line: int) -> frozenset:
    text = text.strip()
    if text == "-":
        return frozenset()
    return frozenset(_parse_edge(part, line) for part in text.split(","))


def parse_transcript(text: str):
    """Returns ``(h, steps)``."""
    from ..transforms import ChickeringStep

    lines = [raw for raw in text.splitlines() if raw.strip()]
    if len(lines) < 2 or not lines[0].startswith("m=") or not lines[1].startswith("start |"):
        raise FormatError("transcript must start with 'm=<int>' and 'start | <edges>'", 1)
    m = int(lines[0][2:])
    h = Dag(m, _parse_edges_field(lines[1].split("|", 1)[1], 2))
    steps = []
    for number, raw in enumerate(lines[2:], start=3):
        try:
            head, edges = raw.split("|", 1)
            _, kind, edge = head.split()
        except ValueError as exc:
            raise FormatError(f"expected '<k>. <kind> j->k | <edges>', got {raw!r}", number) from exc
        steps.append(ChickeringStep(kind, _parse_edge(edge, number), Dag(m, _parse_edges_field(edges, number))))
    return h, steps


def load_transcript(path: str):
    return parse_transcript(_read(path))


# Verdicts and hierarchy matrices


def verdict_to_dict(verdict) -> Dict[str, Any]:
    return {
        "dag": verdict.dag.label,
        "memberships": {
            str(rid): {"member": m.member, **({"witness": m.witness} if m.witness else {})}
            for rid, m in verdict.memberships
        },
        "param_count": verdict.param_count,
        "basic_ci_count": verdict.basic_ci_count,
        "basic_equality_count": verdict.basic_equality_count,
    }


def serialize_verdict_text(verdict) -> str:
    lines = [f"dag: {verdict.dag.label}"]
    for rid, membership in verdict.memberships:
        line = f"{str(rid):<8} {'yes' if membership.member else 'no'}"
        if membership.witness:
            line += f"  ({membership.witness})"
        lines.append(line)
    if verdict.param_count is not None:
        lines.append(f"param_count: {verdict.param_count}")
    lines.append(f"basic_ci_count: {verdict.basic_ci_count}")
    if verdict.basic_equality_count is not None:
        lines.append(f"basic_equality_count: {verdict.basic_equality_count}")
    return "\n".join(lines) + "\n"


def matrix_to_dict(matrix) -> Dict[str, Any]:
    cells = []
    for row in matrix.razors:
        for col in matrix.razors:
            status = matrix.cells[(row, col)]
            cell = {"row": str(row), "col": str(col), "status": status.kind}
            if status.witness is not None:
                cell["witness"] = status.witness.label
                cell["model"] = status.model_id
            if not status.exhaustive:
                cell["exhaustive"] = False
            cells.append(cell)
    return {"razors": [str(r) for r in matrix.razors], "models": list(matrix.model_ids), "cells": cells}


_GLYPH = {"subset": "S", "counterexample": "x", "no evidence": "?"}


def serialize_matrix_text(matrix) -> str:
    """A grid of S (subset), x (counterexample) and ? (no evidence), then the witnesses."""
    names = [str(r) for r in matrix.razors]
    width = max(len(n) for n in names) + 1
    lines = [" " * width + " ".join(f"{n:>{width}}" for n in names)]
    for row in matrix.razors:
        glyphs = [_GLYPH[matrix.cells[(row, col)].kind] for col in matrix.razors]
        lines.append(f"{str(row):<{width}}" + " ".join(f"{g:>{width}}" for g in glyphs))
    lines.append("")
    for row in matrix.razors:
        for col in matrix.razors:
            if row != col:
                lines.append(f"{row} vs {col}: {matrix.cells[(row, col)]}")
    return "\n".join(lines) + "\n"


def load_expected_matrix(path: str) -> Dict[str, List[str]]:
    """Row razor -> column razors it is a subset of; every other off-diagonal cell is a counterexample."""
    payload = _load_json(_read(path))
    try:
        return {str(row): [str(c) for c in cols] for row, cols in payload["subset_of"].items()}
    except (KeyError, AttributeError, TypeError) as exc:
        raise FormatError(f"malformed expected matrix: {exc}") from exc


def load_cited_witnesses(path: str) -> Dict[Tuple[str, str], Tuple[str, str]]:
    """(row, col) -> (example id, DAG name) for counterexample cells tied to a catalog example."""
    payload = _load_json(_read(path))
    cited = {}
    try:
        for item in payload.get("witnesses", []):
            key = (str(item["row"]), str(item["col"]))
            if key in cited:
                raise FormatError(f"expected matrix cites {key[0]} vs {key[1]} twice")
            cited[key] = (str(item["example"]), str(item["dag"]))
    except (KeyError, AttributeError, TypeError) as exc:
        raise FormatError(f"malformed witness in expected matrix: {exc}") from exc
    return cited


def score_report_to_dict(report) -> Dict[str, Any]:
    payload = {"dag": report.dag.label, "criterion": report.criterion, "value": report.value}
    if report.c is not None:
        payload["c"] = report.c
        payload["n"] = report.n
        payload["per_vertex"] = [
            {
                "vertex": vs.vertex,
                "log_likelihood": vs.log_likelihood,
                "parameters": vs.parameters,
                "penalty": vs.penalty,
                "score": vs.score,
                "unobserved_parent_configs": vs.unobserved_parent_configs,
            }
            for vs in report.per_vertex
        ]
    return payload


def serialize_score_text(report) -> str:
    lines = [f"{report.criterion} {report.dag.label}: {report.value:.6f}"]
    for vs in report.per_vertex:
        lines.append(
            f"  X{vs.vertex}: 2*ll={2 * vs.log_likelihood:.6f} penalty={vs.penalty:.6f} "
            f"params={vs.parameters} unobserved_parent_configs={vs.unobserved_parent_configs}"
        )
    return "\n".join(lines) + "\n"


def parameterizing_sets_text(family) -> str:
    """One set per line, annotated with its witness vertex."""
    lines = [f"m={family.m}"]
    for vertices in family.as_vertex_sets():
        lines.append(f"{list(vertices)}  witness={family.witness_of(vertices)}")
    return "\n".join(lines) + "\n"
