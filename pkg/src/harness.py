"""Recompute catalog facts and diff the hierarchy matrix against the bundled expectation."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from . import catalog
from .catalog import CatalogEntry, model_spec, statements_from_json
from .engine import (
    COUNTEREXAMPLE,
    SUBSET,
    CellStatus,
    CitedWitness,
    HierarchyMatrix,
    ModelCase,
    RazorEngine,
    hierarchy_matrix,
)
from .errors import FormatError
from .independence import AxiomSet, closure, unfaithful_set
from .multinomial import param_count
from .razors import RazorId
from .scoring import nec
from .transforms import mec_members
from .utils.formats import load_cited_witnesses, load_expected_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactResult:
    kind: str
    claim: str
    expected: str
    actual: str
    passed: bool


@dataclass
class ExampleReport:
    example_id: str
    results: List[FactResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[FactResult]:
        return [r for r in self.results if not r.passed]


class _FactChecker:
    """Evaluates the ``expected`` facts of one entry against a shared engine."""

    def __init__(self, entry: CatalogEntry, max_m: Optional[int] = None, threads: Optional[int] = None):
        self.entry = entry
        self.max_m = max_m
        self.engine = RazorEngine(
            entry.p_model, entry.ranges, max_m=max_m, threads=threads, extra_dags=entry.named_dags()
        )
        self.handlers: Dict[str, Callable[[Dict[str, Any]], Tuple[Any, Any]]] = {
            "model_equals": self._model_equals,
            "model_size": self._model_size,
            "conditional": self._conditional,
            "param_count": self._param_count,
            "member": self._member,
            "class_equals": self._class_equals,
            "class_empty": self._class_empty,
            "unfaithful": self._unfaithful,
            "nec": self._nec,
            "closure_contains": self._closure_contains,
        }

    def check(self, fact: Dict[str, Any]) -> FactResult:
        kind = fact.get("kind")
        handler = self.handlers.get(kind)
        if handler is None:
            raise FormatError(f"example {self.entry.id} has a fact of unknown kind {kind!r}")
        expected, actual = handler(fact)
        result = FactResult(kind, fact.get("claim", ""), _show(expected), _show(actual), expected == actual)
        if not result.passed:
            logger.warning("%s: %s expected %s, got %s", self.entry.id, kind, result.expected, result.actual)
        return result

    def _model_equals(self, fact):
        expected = model_spec(self.entry.m, fact, self.entry.dags)
        return expected.cis, self.entry.p_model.cis

    def _model_size(self, fact):
        return int(fact["value"]), len(self.entry.p_model)

    def _conditional(self, fact):
        if self.entry.joint is None:
            raise FormatError(f"example {self.entry.id} has no distribution to condition on")
        target = {int(v): int(x) for v, x in fact["target"].items()}
        given = {int(v): int(x) for v, x in fact.get("given", {}).items()}
        actual = self.entry.joint.conditional(target, given) if given else self.entry.joint.probability(target)
        return Fraction(fact["value"]), actual

    def _param_count(self, fact):
        return int(fact["value"]), param_count(self.entry.dag(fact["dag"]), self.entry.ranges)

    def _member(self, fact):
        razor = RazorId.parse(fact["razor"])
        verdict = self.engine.classify(self.entry.dag(fact["dag"]), [razor])
        return bool(fact["value"]), verdict.member(razor)

    def _class_equals(self, fact):
        named = [self.entry.dag(name) for name in fact["dags"]]
        if fact.get("mec"):
            expected = frozenset().union(*(mec_members(g, self.max_m) for g in named))
        else:
            expected = frozenset(named)
        return expected, frozenset(self.engine.class_of(fact["razor"]))

    def _class_empty(self, fact):
        return bool(fact["value"]), self.engine.is_empty(fact["razor"])

    def _unfaithful(self, fact):
        expected = statements_from_json(self.entry.m, fact["cis"])
        return expected.cis, unfaithful_set(self.entry.dag(fact["dag"]), self.entry.p_model).cis

    def _nec(self, fact):
        return float(fact["value"]), nec(self.entry.dag(fact["dag"]), self.entry.p_model)

    def _closure_contains(self, fact):
        axioms = getattr(AxiomSet, fact.get("axioms", "semigraphoid"))()
        derived = closure(model_spec(self.entry.m, fact, self.entry.dags), axioms)
        wanted = statements_from_json(self.entry.m, fact["cis"]).cis
        return wanted, wanted & derived.cis


def _show(value: Any) -> str:
    if isinstance(value, frozenset):
        items = sorted(value, key=lambda x: x.sort_key() if hasattr(x, "sort_key") else x.label)
        return "{" + ", ".join(str(x) if hasattr(x, "sort_key") else x.label for x in items) + "}"
    return str(value)


def verify_example(name: str, max_m: Optional[int] = None, threads: Optional[int] = None) -> ExampleReport:
    """
    Recompute every expected fact of a catalog entry.

    Args:
        name: catalog id or alias
        max_m: enumeration ceiling override
        threads: worker threads for class enumeration

    Returns:
        ExampleReport: one FactResult per fact, in file order
    """
    entry = catalog.load(name)
    checker = _FactChecker(entry, max_m=max_m, threads=threads)
    report = ExampleReport(entry.id, [checker.check(fact) for fact in entry.facts])
    logger.info("%s: %d/%d facts hold", entry.id, sum(r.passed for r in report.results), len(report.results))
    return report


def catalog_cases(names: Optional[List[str]] = None) -> List[ModelCase]:
    entries = [catalog.load(n) for n in names] if names else catalog.all_entries()
    return [ModelCase(e.id, e.p_model, e.ranges, e.named_dags()) for e in entries]


def cited_witnesses(path: Optional[str] = None) -> Dict[Tuple[RazorId, RazorId], CitedWitness]:
    """Cells of the expected matrix tied to a catalog example and one of its named DAGs."""
    cited = {}
    for (row, col), (example, dag_name) in load_cited_witnesses(str(path or catalog.EXPECTED_MATRIX)).items():
        entry = catalog.load(example)
        cited[(RazorId.parse(row), RazorId.parse(col))] = CitedWitness(entry.id, entry.dag(dag_name))
    return cited


def catalog_hierarchy(
    names: Optional[List[str]] = None, max_m: Optional[int] = None, threads: Optional[int] = None
) -> HierarchyMatrix:
    return hierarchy_matrix(catalog_cases(names), max_m=max_m, threads=threads, cited=cited_witnesses())


@dataclass(frozen=True)
class CellMismatch:
    row: RazorId
    col: RazorId
    expected: str
    actual: CellStatus

    def __str__(self) -> str:
        return f"{self.row} vs {self.col}: expected {self.expected}, got {self.actual}"


def diff_against_expected(matrix: HierarchyMatrix, path: Optional[str] = None) -> List[CellMismatch]:
    """Cells that differ from the expected matrix; an empty list means agreement.

    Counterexample cells with a cited example must also name that example and its
    DAG, as long as the example was among the models the matrix was built from.
    """
    subset_of = load_expected_matrix(str(path or catalog.EXPECTED_MATRIX))
    cited = cited_witnesses(path)
    mismatches = []
    for row in matrix.razors:
        allowed = {RazorId.parse(c) for c in subset_of.get(row.value, [])}
        for col in matrix.razors:
            expected = SUBSET if row == col or col in allowed else COUNTEREXAMPLE
            actual = matrix.cell(row, col)
            if actual.kind != expected:
                mismatches.append(CellMismatch(row, col, expected, actual))
                continue
            citation = cited.get((row, col))
            if expected != COUNTEREXAMPLE or citation is None or citation.model_id not in matrix.model_ids:
                continue
            if (actual.model_id, actual.witness) != (citation.model_id, citation.dag):
                wanted = f"{COUNTEREXAMPLE}: {citation.dag.label}, {citation.model_id}"
                mismatches.append(CellMismatch(row, col, wanted, actual))
    return mismatches
