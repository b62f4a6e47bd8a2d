"""Razor engine: per-DAG verdicts, class enumeration, realizability and the hierarchy matrix."""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import CeilingExceededError, DimensionMismatchError, MissingRangesError
from .graph_core import Dag, basic_cis
from .independence import IndependenceModel
from .multinomial import RangeSpec, basic_equality_count, param_count
from .razors import BaseRazor, HypothesisSpace, Membership, RazorId, build_razors

logger = logging.getLogger(__name__)

RazorKey = Union[RazorId, str]


@dataclass(frozen=True)
class RazorVerdict:
    """Membership of one DAG across the razor classes, with witnesses for negatives."""

    dag: Dag
    memberships: Tuple[Tuple[RazorId, Membership], ...]
    param_count: Optional[int] = None
    basic_ci_count: int = 0
    basic_equality_count: Optional[int] = None

    def as_dict(self) -> Dict[RazorId, Membership]:
        return dict(self.memberships)

    def member(self, razor: RazorKey) -> bool:
        return self.as_dict()[_razor_id(razor)].member

    def witness(self, razor: RazorKey) -> Optional[str]:
        return self.as_dict()[_razor_id(razor)].witness

    def classes(self) -> List[RazorId]:
        """Razors whose class contains the DAG."""
        return [rid for rid, verdict in self.memberships if verdict.member]


def _razor_id(razor: RazorKey) -> RazorId:
    return razor if isinstance(razor, RazorId) else RazorId.parse(razor)


class RazorEngine:
    """Evaluates the razors for one independence model (and optional ranges)."""

    def __init__(
        self,
        p_model: IndependenceModel,
        ranges: Optional[RangeSpec] = None,
        max_m: Optional[int] = None,
        threads: Optional[int] = None,
        extra_dags: Iterable[Dag] = (),
    ):
        self.p_model = p_model
        self.ranges = ranges
        self.razors = build_razors()
        self.space = HypothesisSpace(p_model, ranges, max_m=max_m, threads=threads, extra_dags=extra_dags)
        self._cached_result: Dict[Dag, RazorVerdict] = {}

    def _get_razor(self, razor: RazorKey) -> BaseRazor:
        """Get the razor instance for an id."""
        return self.razors[_razor_id(razor)]

    def available(self) -> List[RazorId]:
        """Razors this engine can evaluate: parametric ones need ranges."""
        return [rid for rid in self.razors if self.ranges is not None or not rid.parametric]

    def _requested(self, razors: Optional[Sequence[RazorKey]]) -> List[RazorId]:
        if razors is None:
            return self.available()
        ids = [_razor_id(r) for r in razors]
        missing = [rid for rid in ids if rid.parametric and self.ranges is None]
        if missing:
            raise MissingRangesError(f"{', '.join(map(str, missing))} need variable ranges")
        return ids

    def classify(self, dag: Dag, razors: Optional[Sequence[RazorKey]] = None) -> RazorVerdict:
        """
        Decide membership of ``dag`` in each requested razor class.

        Args:
            dag: DAG to classify
            razors: razor ids, defaulting to every razor the ranges allow

        Returns:
            RazorVerdict: memberships in table order plus auxiliary counts
        """
        if dag.m != self.p_model.m:
            raise DimensionMismatchError(self.p_model.m, dag.m)
        requested = self._requested(razors)
        if razors is None and dag in self._cached_result:
            return self._cached_result[dag]

        memberships = tuple((rid, self._get_razor(rid).check(dag, self.space)) for rid in requested)
        verdict = RazorVerdict(
            dag=dag,
            memberships=memberships,
            param_count=param_count(dag, self.ranges) if self.ranges else None,
            basic_ci_count=len(basic_cis(dag)),
            basic_equality_count=basic_equality_count(dag, self.ranges) if self.ranges else None,
        )
        if razors is None:
            self._cached_result[dag] = verdict
        logger.debug("classified %s: %s", dag.label, ",".join(map(str, verdict.classes())))
        return verdict

    def class_of(self, razor: RazorKey) -> Tuple[Dag, ...]:
        """The exact class, in enumeration order.

        Raises:
            CeilingExceededError: in pool mode for classes that are not inside SGS.
            MissingRangesError: for a parametric razor without ranges.
        """
        rid = self._requested([razor])[0]
        if not self.space.exhaustive and not rid.within_sgs:
            raise CeilingExceededError(
                f"{rid} over m={self.space.m} needs exhaustive enumeration; "
                f"the permutation pool only covers classes inside SGS"
            )
        return self.space.members(self._get_razor(rid))

    def members_in_space(self, razor: RazorKey) -> Tuple[Dag, ...]:
        """Class members among the DAGs of the space, exhaustive or not."""
        return self.space.members(self._get_razor(razor))

    def is_empty(self, razor: RazorKey) -> bool:
        rid = self._requested([razor])[0]
        if self.space.exhaustive or rid.within_sgs:
            return not self.class_of(rid)
        # every Markovian DAG contains an SGS-minimal one, and CMC, oriF and triF
        # violations persist in supergraphs; the complete DAG covers CMC and oriF
        candidates = (*self.space.dags, Dag.complete(range(1, self.space.m + 1)))
        razor_obj = self._get_razor(rid)
        return not any(razor_obj.check(dag, self.space).member for dag in candidates)

    def realizability_report(self) -> Dict[RazorId, bool]:
        """Per razor, whether its class is empty for this model."""
        return {rid: self.is_empty(rid) for rid in self.available()}


def classify(
    g: Dag,
    p_model: IndependenceModel,
    ranges: Optional[RangeSpec] = None,
    razors: Optional[Sequence[RazorKey]] = None,
    **engine_options,
) -> RazorVerdict:
    return RazorEngine(p_model, ranges, extra_dags=(g,), **engine_options).classify(g, razors)


def class_of(
    razor: RazorKey,
    p_model: IndependenceModel,
    ranges: Optional[RangeSpec] = None,
    **engine_options,
) -> Tuple[Dag, ...]:
    return RazorEngine(p_model, ranges, **engine_options).class_of(razor)


def realizability_report(
    p_model: IndependenceModel, ranges: Optional[RangeSpec] = None, **engine_options
) -> Dict[RazorId, bool]:
    return RazorEngine(p_model, ranges, **engine_options).realizability_report()


SUBSET = "subset"
COUNTEREXAMPLE = "counterexample"
NO_EVIDENCE = "no evidence"


@dataclass(frozen=True)
class CellStatus:
    kind: str
    witness: Optional[Dag] = None
    model_id: Optional[str] = None
    exhaustive: bool = True

    def __str__(self) -> str:
        if self.kind == COUNTEREXAMPLE:
            return f"{COUNTEREXAMPLE}: {self.witness.label}, {self.model_id}"
        return self.kind


@dataclass(frozen=True)
class ModelCase:
    """One independence model fed to the hierarchy, with the DAGs it names."""

    model_id: str
    p_model: IndependenceModel
    ranges: Optional[RangeSpec] = None
    named_dags: Tuple[Dag, ...] = ()


@dataclass(frozen=True)
class CitedWitness:
    """The model and DAG a counterexample cell should be credited to."""

    model_id: str
    dag: Dag


@dataclass
class HierarchyMatrix:
    """Row class against column class: subset, counterexample or no evidence."""

    razors: Tuple[RazorId, ...]
    cells: Dict[Tuple[RazorId, RazorId], CellStatus] = field(default_factory=dict)
    model_ids: Tuple[str, ...] = ()

    def cell(self, row: RazorKey, col: RazorKey) -> CellStatus:
        return self.cells[(_razor_id(row), _razor_id(col))]

    def counterexamples(self) -> List[Tuple[RazorId, RazorId]]:
        return [key for key, status in self.cells.items() if status.kind == COUNTEREXAMPLE]


def _pick_witness(candidates: Sequence[Dag], named: Sequence[Dag]) -> Dag:
    pool = set(candidates)
    for dag in named:
        if dag in pool:
            return dag
    return candidates[0]


def hierarchy_matrix(
    cases: Iterable[ModelCase],
    max_m: Optional[int] = None,
    threads: Optional[int] = None,
    cited: Optional[Mapping[Tuple[RazorId, RazorId], CitedWitness]] = None,
) -> HierarchyMatrix:
    """Pairwise subset relations between razor classes over every supplied model.

    A cell turns into a counterexample at the first model holding a DAG in the row
    class but not in the column class. It is a subset when every model that can
    evaluate both classes agrees, and ``no evidence`` when none can.

    A cell listed in ``cited`` is credited to its cited model whenever that model
    separates the classes, even if an earlier model already did, and its witness
    is the cited DAG.
    """
    order = tuple(RazorId)
    cases = list(cases)
    cited = dict(cited or {})
    cells = {(r, c): CellStatus(SUBSET if r == c else NO_EVIDENCE) for r in order for c in order}

    for case in cases:
        engine = RazorEngine(case.p_model, case.ranges, max_m=max_m, threads=threads, extra_dags=case.named_dags)
        exhaustive = engine.space.exhaustive
        if not exhaustive:
            logger.warning(
                "model %s is checked over a permutation pool; subset cells are not verified exhaustively",
                case.model_id,
            )
        classes = {rid: set(engine.members_in_space(rid)) for rid in engine.available()}
        for row in classes:
            for col in classes:
                if row == col:
                    continue
                current = cells[(row, col)]
                citation = cited.get((row, col))
                owner = citation is not None and citation.model_id == case.model_id
                if current.kind == COUNTEREXAMPLE and not owner:
                    continue
                outside = [dag for dag in engine.space.dags if dag in classes[row] and dag not in classes[col]]
                if outside:
                    preferred = (citation.dag,) if owner else ()
                    witness = _pick_witness(outside, preferred + tuple(case.named_dags))
                    cells[(row, col)] = CellStatus(COUNTEREXAMPLE, witness, case.model_id)
                elif current.kind == COUNTEREXAMPLE:
                    continue
                elif current.kind == NO_EVIDENCE:
                    cells[(row, col)] = CellStatus(SUBSET, exhaustive=exhaustive)
                else:
                    cells[(row, col)] = CellStatus(SUBSET, exhaustive=current.exhaustive and exhaustive)
        logger.info("hierarchy: model %s resolved", case.model_id)

    return HierarchyMatrix(order, cells, tuple(case.model_id for case in cases))
