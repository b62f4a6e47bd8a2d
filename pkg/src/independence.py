"""Independence models: canonical CI statements, set algebra and graphoid closure."""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .errors import DimensionMismatchError, NotMarkovianError
from .utils.combinatorics import nonempty_proper_subsets, powerset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CiStatement:
    """A singleton-pair conditional independence <Xi, Xj | S>.

    Construction canonicalises symmetry so that ``i < j`` and freezes ``s``.
    """

    i: int
    j: int
    s: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        i, j, s = int(self.i), int(self.j), frozenset(int(v) for v in self.s)
        if i == j:
            raise ValueError(f"a CI needs two distinct variables, got X{i} twice")
        if i in s or j in s:
            raise ValueError(f"conditioning set {sorted(s)} overlaps the pair ({i}, {j})")
        if i > j:
            i, j = j, i
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "s", s)

    @classmethod
    def of(cls, i: int, j: int, s: Iterable[int] = ()) -> "CiStatement":
        return cls(i, j, frozenset(s))

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def sort_key(self) -> Tuple:
        cond = tuple(sorted(self.s))
        return (self.i, self.j, len(cond), cond)

    def vertices(self) -> FrozenSet[int]:
        return self.s | {self.i, self.j}

    def __str__(self) -> str:
        if not self.s:
            return f"<X{self.i}, X{self.j}>"
        cond = ", ".join(f"X{v}" for v in sorted(self.s))
        return f"<X{self.i}, X{self.j} | {{{cond}}}>"


def all_statements(m: int) -> Iterator[CiStatement]:
    """Every singleton-pair CI over variables 1..m in canonical order."""
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            rest = [v for v in range(1, m + 1) if v not in (i, j)]
            for s in sorted(powerset(rest), key=lambda c: (len(c), sorted(c))):
                yield CiStatement(i, j, s)


@dataclass(frozen=True)
class IndependenceModel:
    """A set of singleton-pair CIs over ``m`` variables."""

    m: int
    cis: FrozenSet[CiStatement] = field(default_factory=frozenset)

    def __post_init__(self):
        cis = frozenset(self.cis)
        for ci in cis:
            if not 1 <= ci.i < ci.j <= self.m or any(not 1 <= v <= self.m for v in ci.s):
                raise ValueError(f"{ci} is outside variables 1..{self.m}")
        object.__setattr__(self, "cis", cis)

    @classmethod
    def of(cls, m: int, statements: Iterable) -> "IndependenceModel":
        """Build from CiStatements or ``(i, j, s)`` tuples."""
        cis = []
        for stmt in statements:
            if isinstance(stmt, CiStatement):
                cis.append(stmt)
            else:
                i, j, *rest = stmt
                cis.append(CiStatement.of(i, j, rest[0] if rest else ()))
        return cls(m, frozenset(cis))

    @classmethod
    def empty(cls, m: int) -> "IndependenceModel":
        return cls(m, frozenset())

    def statements(self) -> List[CiStatement]:
        """Statements in the deterministic serialisation order."""
        return sorted(self.cis, key=CiStatement.sort_key)

    def __contains__(self, stmt: CiStatement) -> bool:
        return stmt in self.cis

    def __iter__(self) -> Iterator[CiStatement]:
        return iter(self.statements())

    def __len__(self) -> int:
        return len(self.cis)

    def _check_dims(self, other: "IndependenceModel"):
        if self.m != other.m:
            raise DimensionMismatchError(self.m, other.m, "variable counts")

    def issubset(self, other: "IndependenceModel") -> bool:
        self._check_dims(other)
        return self.cis <= other.cis

    def union(self, other: "IndependenceModel") -> "IndependenceModel":
        self._check_dims(other)
        return IndependenceModel(self.m, self.cis | other.cis)

    def difference(self, other: "IndependenceModel") -> "IndependenceModel":
        self._check_dims(other)
        return IndependenceModel(self.m, self.cis - other.cis)

    def involving(self, a: int, b: int) -> List[CiStatement]:
        """All statements about the pair (a, b), in canonical order."""
        lo, hi = min(a, b), max(a, b)
        return [ci for ci in self.statements() if ci.i == lo and ci.j == hi]

    def __str__(self) -> str:
        return "{" + ", ".join(str(ci) for ci in self.statements()) + "}"


def model_subset(a: IndependenceModel, b: IndependenceModel) -> bool:
    """Containment over canonical statements; raises on mismatched ``m``."""
    return a.issubset(b)


def unfaithful_set(g, p_model: IndependenceModel) -> IndependenceModel:
    """The CIs of ``p_model`` not entailed by the DAG ``g``.

    Raises:
        NotMarkovianError: if ``g`` entails a CI missing from ``p_model``.
    """
    from .graph_core import independence_model_of_dag

    if g.m != p_model.m:
        raise DimensionMismatchError(g.m, p_model.m)
    dag_model = independence_model_of_dag(g)
    missing = dag_model.difference(p_model)
    if missing.cis:
        raise NotMarkovianError(missing.statements()[0])
    return p_model.difference(dag_model)


@dataclass(frozen=True)
class AxiomSet:
    """Which inference rules a closure applies."""

    symmetry: bool = True
    decomposition: bool = True
    weak_union: bool = True
    contraction: bool = True
    intersection: bool = False
    composition: bool = False

    @classmethod
    def semigraphoid(cls) -> "AxiomSet":
        return cls()

    @classmethod
    def graphoid(cls) -> "AxiomSet":
        return cls(intersection=True)

    @classmethod
    def compositional_graphoid(cls) -> "AxiomSet":
        return cls(intersection=True, composition=True)


# A set-valued statement X _||_ Y | Z, kept only while a closure runs
Triplet = Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]


class _ClosureRun:
    """Semi-naive fixed point over set-valued statements.

    Each new statement is combined with the already-derived statements that share
    its left-hand side, so every pair is looked at once per direction.
    """

    def __init__(self, axioms: AxiomSet):
        self.axioms = axioms
        self.known: Set[Triplet] = set()
        self.by_left: Dict[FrozenSet[int], Set[Triplet]] = defaultdict(set)
        self.queue: List[Triplet] = []

    def add(self, t: Triplet):
        if t in self.known:
            return
        self.known.add(t)
        self.by_left[t[0]].add(t)
        self.queue.append(t)

    def run(self, seeds: Iterable[Triplet]) -> Set[Triplet]:
        for t in seeds:
            self.add(t)
        while self.queue:
            t = self.queue.pop()
            for derived in self._unary(t):
                self.add(derived)
            for other in list(self.by_left[t[0]]):
                for derived in self._binary(t, other):
                    self.add(derived)
                if other != t:
                    for derived in self._binary(other, t):
                        self.add(derived)
        return self.known

    def _unary(self, t: Triplet) -> Iterator[Triplet]:
        x, y, z = t
        if self.axioms.symmetry:
            yield (y, x, z)
        if len(y) > 1:
            for part in nonempty_proper_subsets(y):
                if self.axioms.decomposition:
                    yield (x, part, z)
                if self.axioms.weak_union:
                    yield (x, part, z | (y - part))

    def _binary(self, first: Triplet, second: Triplet) -> Iterator[Triplet]:
        x, y, z = first
        _, w, z2 = second
        if y & w:
            return
        if self.axioms.contraction and z2 == z | y and not (w & z):
            # X _||_ Y | Z  and  X _||_ W | Z u Y
            yield (x, y | w, z)
        if self.axioms.intersection and w <= z and y <= z2 and (z - w) == (z2 - y):
            # X _||_ Y | Z u W  and  X _||_ W | Z u Y
            yield (x, y | w, z - w)
        if self.axioms.composition and z == z2:
            yield (x, y | w, z)


def closure_triplets(model: IndependenceModel, axioms: Optional[AxiomSet] = None) -> FrozenSet[Triplet]:
    """Least fixed point of ``axioms`` over ``model``, as set-valued ``(X, Y, Z)`` triplets.

    Args:
        model: starting statements
        axioms: rules to apply, semigraphoid by default
    """
    axioms = axioms or AxiomSet.semigraphoid()
    seeds = [(frozenset({ci.i}), frozenset({ci.j}), ci.s) for ci in model.cis]
    derived = _ClosureRun(axioms).run(seeds)
    logger.debug("closure over m=%d produced %d set-valued statements", model.m, len(derived))
    return frozenset(derived)


def closure(model: IndependenceModel, axioms: Optional[AxiomSet] = None) -> IndependenceModel:
    """:func:`closure_triplets` projected back to singleton statements."""
    projected = [
        CiStatement(next(iter(x)), next(iter(y)), z)
        for x, y, z in closure_triplets(model, axioms)
        if len(x) == 1 and len(y) == 1
    ]
    return IndependenceModel(model.m, frozenset(projected))
