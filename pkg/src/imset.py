"""Characteristic imsets and parameterizing sets.

A nonempty vertex set ``s`` is parameterizing for G when exactly one ``i`` in ``s``
has ``s - {i}`` inside Pa(i). Sets are kept as bitmasks (vertex i is bit i-1).
"""
import logging
from dataclasses import dataclass
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .errors import DimensionMismatchError, WitnessUniquenessError
from .graph_core import Dag, independence_model_of_dag
from .multinomial import RangeSpec
from .utils.combinatorics import mask_of, powerset, vertices_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParameterizingSets:
    m: int
    sets: FrozenSet[int]
    partition: Tuple[Tuple[int, FrozenSet[int]], ...]

    def cell(self, vertex: int) -> FrozenSet[int]:
        """S(i, G) as bitmasks."""
        return dict(self.partition)[vertex]

    def __contains__(self, vertices) -> bool:
        return mask_of(vertices) in self.sets

    def as_vertex_sets(self) -> List[Tuple[int, ...]]:
        """Sorted vertex tuples, smaller sets first."""
        return sorted((vertices_of(mask) for mask in self.sets), key=lambda t: (len(t), t))

    def witness_of(self, vertices: Iterable[int]) -> int:
        mask = mask_of(vertices)
        for vertex, cell in self.partition:
            if mask in cell:
                return vertex
        raise KeyError(f"{sorted(vertices)} is not a parameterizing set")


def _witnesses(g: Dag, s: FrozenSet[int]) -> List[int]:
    return [i for i in sorted(s) if (s - {i}) <= g.parents[i]]


def characteristic_imset(g: Dag, s: Iterable[int]) -> int:
    """c_G(s) via the parent characterisation."""
    s = frozenset(s)
    if not s:
        raise ValueError("the characteristic imset is defined on nonempty sets only")
    if any(not 1 <= v <= g.m for v in s):
        raise ValueError(f"{sorted(s)} is not a subset of 1..{g.m}")
    return 1 if _witnesses(g, s) else 0


def characteristic_imset_by_dsep(g: Dag, s: Iterable[int]) -> int:
    """c_G(s) from its definition over I(G): 0 iff some <Xi, Xj | K> in I(G) has s - K = {i, j}."""
    s = frozenset(s)
    if not s:
        raise ValueError("the characteristic imset is defined on nonempty sets only")
    for ci in independence_model_of_dag(g).cis:
        if s - ci.s == {ci.i, ci.j}:
            return 0
    return 1


def parameterizing_sets(g: Dag) -> ParameterizingSets:
    """S(G) together with its partition into S(i, G)."""
    cells: Dict[int, set] = {v: set() for v in g.vertices}
    for v in g.vertices:
        for extra in powerset(g.parents[v]):
            s = extra | {v}
            owners = _witnesses(g, s)
            # a second witness would need a directed 2-cycle
            if owners != [v]:
                raise WitnessUniquenessError(s, owners)
            cells[v].add(mask_of(s))
    family = frozenset(mask for cell in cells.values() for mask in cell)
    partition = tuple((v, frozenset(cells[v])) for v in g.vertices)
    return ParameterizingSets(g.m, family, partition)


def param_count_via_imset(g: Dag, ranges: RangeSpec) -> int:
    """Sum over s in S(G) of the product of (r(j) - 1) for j in s."""
    if ranges.m != g.m:
        raise DimensionMismatchError(g.m, ranges.m)
    family = parameterizing_sets(g)
    return sum(prod(ranges.of(v) - 1 for v in vertices_of(mask)) for mask in family.sets)


def paramsets_subset(g: Dag, h: Dag) -> bool:
    """S(G) contained in S(H)."""
    if g.m != h.m:
        raise DimensionMismatchError(g.m, h.m)
    return parameterizing_sets(g).sets <= parameterizing_sets(h).sets
