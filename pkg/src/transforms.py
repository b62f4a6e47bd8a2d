"""Covered edges, Markov equivalence classes by covered reversals, and Chickering sequences."""
import heapq
import logging
from dataclasses import dataclass
from itertools import count
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

from . import config
from .errors import CeilingExceededError, ChickeringSearchError, DimensionMismatchError, NotCoveredError
from .graph_core import Dag, Edge, independence_model_of_dag

logger = logging.getLogger(__name__)

REVERSE = "reverse"
DELETE = "delete"


def covered_edges(g: Dag) -> FrozenSet[Edge]:
    """Edges j -> k with Pa(j) = Pa(k) minus {j}."""
    return frozenset((j, k) for j, k in g.edges if g.parents[j] == g.parents[k] - {j})


def reverse_covered(g: Dag, edge: Edge) -> Dag:
    """Reverse a covered edge; the result stays in the same MEC.

    Raises:
        NotCoveredError: if ``edge`` is missing or not covered.
    """
    j, k = edge
    if (j, k) not in g.edges:
        raise NotCoveredError(f"{j}->{k} is not an edge of {g.label}")
    if g.parents[j] != g.parents[k] - {j}:
        raise NotCoveredError(
            f"{j}->{k} is not covered: Pa({j}) = {sorted(g.parents[j])} "
            f"but Pa({k}) minus {j} = {sorted(g.parents[k] - {j})}"
        )
    return g.reverse_edge(j, k)


def mec_members(g: Dag, max_m: Optional[int] = None) -> FrozenSet[Dag]:
    """MEC(g) as the closure of ``g`` under covered reversals."""
    ceiling = config.effective_max_m(max_m)
    if g.m > ceiling:
        raise CeilingExceededError(f"refusing to walk the MEC of an m={g.m} DAG: ceiling is {ceiling}")
    seen = {g}
    frontier = [g]
    while frontier:
        current = frontier.pop()
        for edge in covered_edges(current):
            nxt = current.reverse_edge(*edge)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


@dataclass(frozen=True)
class ChickeringStep:
    kind: str
    edge: Edge
    dag: Dag

    def __str__(self) -> str:
        j, k = self.edge
        return f"{self.kind} {j}->{k}"


def _distance(current: Dag, target: Dag) -> int:
    """Extra adjacencies plus edges pointing the wrong way."""
    extra = len(current.skeleton - target.skeleton)
    flipped = sum(1 for j, k in current.edges if (k, j) in target.edges)
    return extra + flipped


def chickering_sequence(h: Dag, g: Dag) -> Optional[List[ChickeringStep]]:
    """Covered reversals and deletions taking ``h`` to ``g`` with I never shrinking.

    Returns None when I(h) is not contained in I(g), since then no such sequence
    exists. Otherwise runs a best-first search over DAGs whose independence model
    stays inside I(g), and only deletes adjacencies that ``g`` lacks.

    Raises:
        ChickeringSearchError: if the bounded search fails although I(h) is inside I(g).
    """
    if h.m != g.m:
        raise DimensionMismatchError(h.m, g.m)
    target_model = independence_model_of_dag(g).cis
    if not independence_model_of_dag(h).cis <= target_model:
        return None
    if h == g:
        return []

    depth_bound = len(h.edges) + h.m * h.m
    tie = count()
    queue: List[Tuple[int, int, int, Dag, Tuple[ChickeringStep, ...]]] = [(_distance(h, g), 0, next(tie), h, ())]
    visited: Set[Dag] = {h}
    while queue:
        _, depth, _, current, path = heapq.heappop(queue)
        if current == g:
            logger.debug("chickering sequence of %d steps from %s to %s", len(path), h.label, g.label)
            return list(path)
        if depth >= depth_bound:
            continue
        moves = [(REVERSE, edge, current.reverse_edge(*edge)) for edge in sorted(covered_edges(current))]
        moves += [
            (DELETE, (j, k), current.remove_edge(j, k))
            for j, k in current.sorted_edges()
            if frozenset((j, k)) not in g.skeleton
        ]
        for kind, edge, nxt in moves:
            if nxt in visited:
                continue
            if not independence_model_of_dag(nxt).cis <= target_model:
                continue
            visited.add(nxt)
            step = ChickeringStep(kind, edge, nxt)
            heapq.heappush(queue, (_distance(nxt, g), depth + 1, next(tie), nxt, path + (step,)))

    raise ChickeringSearchError(f"no sequence found from {h.label} to {g.label} within depth {depth_bound}")


def validate_sequence(h: Dag, g: Dag, steps: Sequence[ChickeringStep]) -> bool:
    """Replay ``steps`` from ``h`` and check every move and the final DAG."""
    current = h
    for step in steps:
        j, k = step.edge
        if step.kind == REVERSE:
            if (j, k) not in covered_edges(current):
                return False
            expected = current.reverse_edge(j, k)
        elif step.kind == DELETE:
            if (j, k) not in current.edges:
                return False
            expected = current.remove_edge(j, k)
        else:
            return False
        if expected != step.dag:
            return False
        if not independence_model_of_dag(current).cis <= independence_model_of_dag(expected).cis:
            return False
        current = expected
    return current == g
