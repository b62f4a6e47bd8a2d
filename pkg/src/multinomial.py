"""Exact multinomial causal models.

Probabilities are ``fractions.Fraction`` end to end; every CI check is an exact
cross-multiplied equality with no tolerance.
"""
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import config
from .errors import CeilingExceededError, DimensionMismatchError, InvalidModelError
from .graph_core import Dag, basic_cis
from .independence import CiStatement, IndependenceModel, all_statements

logger = logging.getLogger(__name__)

Number = Union[int, str, Fraction]
Config = Tuple[int, ...]


def to_fraction(value: Number) -> Fraction:
    """Parse ``"0.2"``, ``"2/10"``, ints and Fractions exactly."""
    if isinstance(value, float):
        # floats would smuggle binary rounding into exact tables
        raise InvalidModelError(f"use a string or Fraction instead of float {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidModelError(f"cannot parse probability {value!r}") from exc


@dataclass(frozen=True)
class RangeSpec:
    """Cardinalities r(1), ..., r(m); every variable takes values 0..r(i)-1."""

    r: Tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(v) for v in self.r)
        if not r:
            raise InvalidModelError("a range spec needs at least one variable")
        if any(v < 2 for v in r):
            raise InvalidModelError(f"every range must be at least 2, got {list(r)}")
        object.__setattr__(self, "r", r)

    @classmethod
    def binary(cls, m: int) -> "RangeSpec":
        return cls((2,) * m)

    @property
    def m(self) -> int:
        return len(self.r)

    def of(self, v: int) -> int:
        return self.r[v - 1]

    def product(self, vertices: Iterable[int]) -> int:
        """r(s); the empty product is 1."""
        return prod(self.r[v - 1] for v in vertices)

    def configurations(self, vertices: Sequence[int]) -> Iterable[Config]:
        """Mixed-radix configurations of ``vertices``, last vertex varying fastest."""
        return product(*(range(self.r[v - 1]) for v in vertices))

    def __str__(self) -> str:
        return "<" + ", ".join(str(v) for v in self.r) + ">"


@dataclass(frozen=True)
class ThetaTable:
    """P(Xi | X_Pa): one row per parent configuration, in mixed-radix order."""

    vertex: int
    parents: Tuple[int, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]

    @property
    def free_parameters(self) -> int:
        return len(self.rows) * (len(self.rows[0]) - 1) if self.rows else 0

    def row_for(self, parent_values: Config) -> Tuple[Fraction, ...]:
        return self.rows[self._index[parent_values]]

    @property
    def _index(self) -> Dict[Config, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {}
            object.__setattr__(self, "_index_cache", cached)
        return cached


def param_count(g: Dag, ranges: RangeSpec) -> int:
    """|param(G)| = sum over i of (r(i) - 1) * r(Pa(i))."""
    if ranges.m != g.m:
        raise DimensionMismatchError(g.m, ranges.m)
    return sum((ranges.of(v) - 1) * ranges.product(g.parents[v]) for v in g.vertices)


@dataclass(frozen=True)
class MultinomialModel:
    """A DAG with ranges and one exact theta-table per vertex."""

    dag: Dag
    ranges: RangeSpec
    tables: Mapping[int, ThetaTable] = field(hash=False)

    def __post_init__(self):
        if self.ranges.m != self.dag.m:
            raise DimensionMismatchError(self.dag.m, self.ranges.m)
        for v in self.dag.vertices:
            table = self.tables.get(v)
            if table is None:
                raise InvalidModelError(f"missing theta-table for X{v}")
            parents = tuple(sorted(self.dag.parents[v]))
            if table.parents != parents:
                raise InvalidModelError(f"theta-table for X{v} lists parents {table.parents}, DAG has {parents}")
            expected_rows = self.ranges.product(parents)
            if len(table.rows) != expected_rows:
                raise InvalidModelError(f"X{v} needs {expected_rows} rows, got {len(table.rows)}")
            for idx, row in enumerate(table.rows):
                if len(row) != self.ranges.of(v):
                    raise InvalidModelError(f"X{v} row {idx} has {len(row)} entries, range is {self.ranges.of(v)}")
                if any(p < 0 or p > 1 for p in row):
                    raise InvalidModelError(f"X{v} row {idx} has an entry outside [0, 1]")
                if sum(row) != 1:
                    raise InvalidModelError(f"X{v} row {idx} sums to {sum(row)}, not 1")
            index = table._index
            if not index:
                index.update({cfg: n for n, cfg in enumerate(self.ranges.configurations(parents))})

    @classmethod
    def from_rows(
        cls, dag: Dag, ranges: RangeSpec, rows: Mapping[int, Sequence[Sequence[Number]]]
    ) -> "MultinomialModel":
        """Build from plain rows of numbers or rational strings, keyed by vertex."""
        tables = {}
        for v in dag.vertices:
            if v not in rows:
                raise InvalidModelError(f"missing theta-table for X{v}")
            tables[v] = ThetaTable(
                vertex=v,
                parents=tuple(sorted(dag.parents[v])),
                rows=tuple(tuple(to_fraction(p) for p in row) for row in rows[v]),
            )
        return cls(dag, ranges, tables)

    @property
    def m(self) -> int:
        return self.dag.m


@dataclass(frozen=True, eq=False)
class JointTable:
    """Exact probability per full configuration, keyed by mixed-radix tuples."""

    ranges: RangeSpec
    probabilities: Mapping[Config, Fraction]
    _marginals: Dict[Tuple[int, ...], Dict[Config, Fraction]] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if any(p < 0 for p in self.probabilities.values()):
            raise InvalidModelError("joint table has a negative entry")
        total = sum(self.probabilities.values())
        if total != 1:
            raise InvalidModelError(f"joint table sums to {total}, not 1")

    @property
    def m(self) -> int:
        return self.ranges.m

    def marginal(self, vertices: Sequence[int]) -> Dict[Config, Fraction]:
        """P(X_vertices) as a dict keyed by the values of ``vertices`` in the given order."""
        key = tuple(vertices)
        cached = self._marginals.get(key)
        if cached is not None:
            return cached
        out: Dict[Config, Fraction] = {}
        for cfg, p in self.probabilities.items():
            sub = tuple(cfg[v - 1] for v in key)
            out[sub] = out.get(sub, Fraction(0)) + p
        with self._lock:
            return self._marginals.setdefault(key, out)

    def probability(self, assignment: Mapping[int, int]) -> Fraction:
        variables = tuple(sorted(assignment))
        return self.marginal(variables).get(tuple(assignment[v] for v in variables), Fraction(0))

    def conditional(self, target: Mapping[int, int], given: Mapping[int, int]) -> Fraction:
        """P(target | given); raises ZeroDivisionError on a zero-mass condition."""
        denominator = self.probability(given)
        if denominator == 0:
            raise ZeroDivisionError(f"P({dict(given)}) is zero")
        return self.probability({**given, **target}) / denominator


def joint_from_model(model: MultinomialModel, ceiling: Optional[int] = None) -> JointTable:
    """Markov factorisation: P(x) is the product of P(xi | x_Pa(i))."""
    ceiling = config.JOINT_CEILING if ceiling is None else ceiling
    cells = model.ranges.product(model.dag.vertices)
    if cells > ceiling:
        raise CeilingExceededError(
            f"joint table would have {cells} cells, ceiling is {ceiling}; set RAZORS_JOINT_CEILING to allow it"
        )
    parents = {v: tuple(sorted(model.dag.parents[v])) for v in model.dag.vertices}
    probabilities = {}
    for cfg in model.ranges.configurations(tuple(model.dag.vertices)):
        p = Fraction(1)
        for v in model.dag.vertices:
            row = model.tables[v].row_for(tuple(cfg[u - 1] for u in parents[v]))
            p *= row[cfg[v - 1]]
            if p == 0:
                break
        probabilities[cfg] = p
    return JointTable(model.ranges, probabilities)


def set_ci(joint: JointTable, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> bool:
    """X_a _||_ X_b | X_c, checked as P(a,b,c) P(c) == P(a,c) P(b,c) on every cell."""
    a, b, c = tuple(sorted(a)), tuple(sorted(b)), tuple(sorted(c))
    abc = joint.marginal(a + b + c)
    ac = joint.marginal(a + c)
    bc = joint.marginal(b + c)
    cc = joint.marginal(c)
    na, nb = len(a), len(b)
    for cfg_a in joint.ranges.configurations(a):
        for cfg_b in joint.ranges.configurations(b):
            for cfg_c in joint.ranges.configurations(c):
                pc = cc.get(cfg_c, Fraction(0)) if c else Fraction(1)
                if pc == 0:
                    # zero-mass conditioning cells are vacuous
                    continue
                lhs = abc.get(cfg_a + cfg_b + cfg_c, Fraction(0)) * pc
                rhs = ac.get(cfg_a + cfg_c, Fraction(0)) * bc.get(cfg_b + cfg_c, Fraction(0))
                if lhs != rhs:
                    return False
    return True


def exact_ci(joint: JointTable, stmt: CiStatement) -> bool:
    """Whether the singleton CI holds exactly in ``joint``."""
    if stmt.j > joint.m or any(v > joint.m for v in stmt.s):
        raise DimensionMismatchError(joint.m, max(stmt.vertices()), "variable ranges")
    return set_ci(joint, (stmt.i,), (stmt.j,), tuple(stmt.s))


def extract_independence_model(joint: JointTable) -> IndependenceModel:
    """I(P) over singleton pairs, by exhaustive exact checks."""
    if joint.m > config.HARD_MAX_M:
        raise CeilingExceededError(f"CI extraction supports at most {config.HARD_MAX_M} variables")
    holding = [stmt for stmt in all_statements(joint.m) if exact_ci(joint, stmt)]
    logger.info("extracted %d CIs over %d variables", len(holding), joint.m)
    return IndependenceModel(joint.m, frozenset(holding))


def local_markov_holds(model: MultinomialModel, joint: Optional[JointTable] = None) -> bool:
    """Xi _||_ X_(Nd \\ Pa) | X_Pa for every vertex, checked set-valued and per singleton."""
    joint = joint or joint_from_model(model)
    g = model.dag
    for v in g.vertices:
        pa = g.parents[v]
        others = set(g.vertices) - g.descendants(v) - pa - {v}
        if not others:
            continue
        if not set_ci(joint, (v,), tuple(others), tuple(pa)):
            return False
        if not all(exact_ci(joint, CiStatement(v, u, pa)) for u in others):
            return False
    return True


def equality_count(stmt: CiStatement, ranges: RangeSpec) -> int:
    """Number of probabilistic equalities a singleton CI decomposes into."""
    return (ranges.of(stmt.i) - 1) * (ranges.of(stmt.j) - 1) * ranges.product(stmt.s)


def basic_equality_count(g: Dag, ranges: RangeSpec) -> int:
    if ranges.m != g.m:
        raise DimensionMismatchError(g.m, ranges.m)
    return sum(equality_count(ci, ranges) for ci in basic_cis(g).cis)


def _random_row(rng, size: int, max_denominator: int) -> List[Fraction]:
    denominator = int(rng.integers(size, max_denominator + 1))
    cuts = sorted(int(c) for c in rng.choice(range(1, denominator), size=size - 1, replace=False))
    parts = [b - a for a, b in zip([0, *cuts], [*cuts, denominator])]
    return [Fraction(p, denominator) for p in parts]


def random_multinomial_model(dag: Dag, ranges: RangeSpec, rng, max_denominator: int = 20) -> MultinomialModel:
    """Strictly positive random theta-tables with denominators up to ``max_denominator``.

    ``rng`` is a ``numpy.random.Generator``.
    """
    if max_denominator < max(ranges.r):
        raise ValueError("max_denominator must be at least the largest range")
    rows = {
        v: [_random_row(rng, ranges.of(v), max_denominator) for _ in range(ranges.product(dag.parents[v]))]
        for v in dag.vertices
    }
    return MultinomialModel.from_rows(dag, ranges, rows)
