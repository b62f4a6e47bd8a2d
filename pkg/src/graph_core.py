"""DAG representation, d-separation, Markov equivalence and DAG-space enumeration."""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from . import config
from .errors import CeilingExceededError, CycleError, DimensionMismatchError, InvalidDagError
from .independence import CiStatement, IndependenceModel
from .utils.combinatorics import powerset

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Dag:
    """A DAG over vertices 1..m; ``(j, k)`` in ``edges`` means j -> k."""

    m: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        edges = frozenset((int(j), int(k)) for j, k in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.m < 1:
            raise InvalidDagError(f"a DAG needs at least one vertex, got m={self.m}")
        seen = set()
        for j, k in edges:
            if not (1 <= j <= self.m and 1 <= k <= self.m):
                raise InvalidDagError(f"edge {j}->{k} has an endpoint outside 1..{self.m}")
            if j == k:
                raise InvalidDagError(f"self-loop at {j}")
            pair = frozenset((j, k))
            if pair in seen:
                raise InvalidDagError(f"both orientations of {j}-{k} are present")
            seen.add(pair)
        if not nx.is_directed_acyclic_graph(self.graph):
            raise CycleError(nx.find_cycle(self.graph))

    @classmethod
    def empty(cls, m: int) -> "Dag":
        return cls(m, frozenset())

    @classmethod
    def complete(cls, order: Sequence[int]) -> "Dag":
        """The complete DAG whose edges point from earlier to later in ``order``."""
        edges = {(order[a], order[b]) for a in range(len(order)) for b in range(a + 1, len(order))}
        return cls(len(order), frozenset(edges))

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(1, self.m + 1))
        g.add_edges_from(self.edges)
        return g

    @property
    def vertices(self) -> range:
        return range(1, self.m + 1)

    @cached_property
    def parents(self) -> Dict[int, FrozenSet[int]]:
        pa = {v: set() for v in self.vertices}
        for j, k in self.edges:
            pa[k].add(j)
        return {v: frozenset(p) for v, p in pa.items()}

    @cached_property
    def children(self) -> Dict[int, FrozenSet[int]]:
        ch = {v: set() for v in self.vertices}
        for j, k in self.edges:
            ch[j].add(k)
        return {v: frozenset(c) for v, c in ch.items()}

    @cached_property
    def skeleton(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(frozenset(e) for e in self.edges)

    def adjacent(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.skeleton

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.parents[v] | self.children[v]

    def ancestors(self, v: int) -> FrozenSet[int]:
        return frozenset(nx.ancestors(self.graph, v))

    def descendants(self, v: int) -> FrozenSet[int]:
        return frozenset(nx.descendants(self.graph, v))

    @cached_property
    def topological_order(self) -> Tuple[int, ...]:
        """Smallest-label-first topological order."""
        return tuple(nx.lexicographical_topological_sort(self.graph))

    @cached_property
    def triples(self) -> Tuple["Triple", ...]:
        """Every unshielded and shielded triple, middle vertex varying, with i < k."""
        out = []
        for j in self.vertices:
            for i, k in combinations(sorted(self.neighbors(j)), 2):
                collider = (i, j) in self.edges and (k, j) in self.edges
                out.append(Triple(i, j, k, shielded=self.adjacent(i, k), collider_at_j=collider))
        return tuple(out)

    @cached_property
    def unshielded_colliders(self) -> FrozenSet[Tuple[int, int, int]]:
        return frozenset(
            (t.i, t.j, t.k) for t in self.triples if t.collider_at_j and not t.shielded
        )

    def with_edges(self, edges: Iterable[Edge]) -> "Dag":
        return Dag(self.m, frozenset(edges))

    def remove_edge(self, j: int, k: int) -> "Dag":
        if (j, k) not in self.edges:
            raise InvalidDagError(f"{j}->{k} is not an edge")
        return Dag(self.m, self.edges - {(j, k)})

    def reverse_edge(self, j: int, k: int) -> "Dag":
        if (j, k) not in self.edges:
            raise InvalidDagError(f"{j}->{k} is not an edge")
        return Dag(self.m, (self.edges - {(j, k)}) | {(k, j)})

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    @property
    def label(self) -> str:
        """Compact id used in witnesses and matrix cells."""
        body = ",".join(f"{j}->{k}" for j, k in self.sorted_edges())
        return f"[{body}]" if body else f"[empty m={self.m}]"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Triple:
    i: int
    j: int
    k: int
    shielded: bool
    collider_at_j: bool

    @property
    def kind(self) -> str:
        return "shielded" if self.shielded else "unshielded"


def _check_query(g: Dag, i: int, j: int, s: Iterable[int]) -> FrozenSet[int]:
    s = frozenset(s)
    for v in (i, j, *s):
        if not 1 <= v <= g.m:
            raise InvalidDagError(f"vertex {v} is outside 1..{g.m}")
    if i == j:
        raise ValueError("d-separation needs two distinct vertices")
    if i in s or j in s:
        raise ValueError(f"conditioning set {sorted(s)} overlaps ({i}, {j})")
    return s


def _reachable(g: Dag, source: int, given: FrozenSet[int]) -> Set[int]:
    """Vertices reachable from ``source`` along active trails given ``given`` (Bayes ball)."""
    shaded = set(given)
    for node in given:
        shaded |= g.ancestors(node)

    visited = set()
    reached = set()
    # marks for which direction the trail enters the node
    _c = "_c"  # from a child
    _p = "_p"  # from a parent

    schedule = [(source, _c)]
    while schedule:
        node, direction = schedule.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        reached.add(node)

        if direction == _c and node not in given:
            schedule.extend((parent, _c) for parent in g.parents[node])
            schedule.extend((child, _p) for child in g.children[node])

        if direction == _p:
            # collider: passable only if it or a descendant is conditioned on
            if node in shaded:
                schedule.extend((parent, _c) for parent in g.parents[node])
            if node not in given:
                schedule.extend((child, _p) for child in g.children[node])

    reached.discard(source)
    return reached


def d_separated(g: Dag, i: int, j: int, s: Iterable[int] = ()) -> bool:
    """Whether ``i`` and ``j`` are d-separated by ``s`` in ``g``.

    Example:
        >>> d_separated(Dag(3, {(1, 2), (3, 2)}), 1, 3, {2})
        False
    """
    s = _check_query(g, i, j, s)
    return j not in _reachable(g, i, s)


def d_separated_by_paths(g: Dag, i: int, j: int, s: Iterable[int] = ()) -> bool:
    """Path-enumeration oracle for :func:`d_separated`; exponential, tests only."""
    s = _check_query(g, i, j, s)
    undirected = g.graph.to_undirected()
    for path in nx.all_simple_paths(undirected, i, j):
        active = True
        for prev, node, nxt in zip(path, path[1:], path[2:]):
            collider = (prev, node) in g.edges and (nxt, node) in g.edges
            if collider:
                if node not in s and not (g.descendants(node) & s):
                    active = False
                    break
            elif node in s:
                active = False
                break
        if active:
            return False
    return True


@lru_cache(maxsize=65536)
def independence_model_of_dag(g: Dag) -> IndependenceModel:
    """I(G): every singleton-pair CI entailed by d-separation."""
    cis = []
    for i in g.vertices:
        others = [v for v in g.vertices if v != i]
        for s in powerset(others):
            reached = _reachable(g, i, s)
            for j in others:
                if j > i and j not in s and j not in reached:
                    cis.append(CiStatement(i, j, s))
    return IndependenceModel(g.m, frozenset(cis))


def markov_equivalent(g: Dag, h: Dag) -> bool:
    """Same skeleton and same unshielded colliders."""
    if g.m != h.m:
        raise DimensionMismatchError(g.m, h.m)
    return g.skeleton == h.skeleton and g.unshielded_colliders == h.unshielded_colliders


def count_dags(m: int) -> int:
    """Number of labeled DAGs on m vertices (Robinson's recurrence)."""

    @lru_cache(maxsize=None)
    def a(n: int) -> int:
        if n == 0:
            return 1
        return sum((-1) ** (k + 1) * comb(n, k) * 2 ** (k * (n - k)) * a(n - k) for k in range(1, n + 1))

    return a(m)


def _arcs(m: int) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(1, m + 1) for b in range(1, m + 1) if a != b]


def edge_mask(g: Dag) -> int:
    """Bit k is set when the k-th arc in lexicographic (tail, head) order is an edge of g."""
    return sum(1 << k for k, arc in enumerate(_arcs(g.m)) if arc in g.edges)


def enumerate_dags(m: int, max_m: Optional[int] = None) -> Iterator[Dag]:
    """Yield every labeled DAG on m vertices exactly once, in increasing :func:`edge_mask` order.

    Raises:
        CeilingExceededError: if ``m`` is above the enumeration ceiling.
    """
    ceiling = config.effective_max_m(max_m)
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > ceiling:
        raise CeilingExceededError(
            f"refusing to enumerate DAG space for m={m}: ceiling is {ceiling} "
            f"({count_dags(m)} DAGs); raise RAZORS_MAX_M or --max-m up to {config.HARD_MAX_M}"
        )
    arcs = _arcs(m)
    chosen: Set[Tuple[int, int]] = set()

    # bits are decided from the most significant down, clear before set
    def extend(k: int) -> Iterator[Dag]:
        if k < 0:
            if not chosen or nx.is_directed_acyclic_graph(nx.DiGraph(list(chosen))):
                yield Dag(m, frozenset(chosen))
            return
        yield from extend(k - 1)
        a, b = arcs[k]
        if (b, a) not in chosen:
            chosen.add((a, b))
            yield from extend(k - 1)
            chosen.discard((a, b))

    yield from extend(len(arcs) - 1)


@lru_cache(maxsize=8)
def dag_space(m: int, max_m: Optional[int] = None) -> Tuple[Dag, ...]:
    """Materialised :func:`enumerate_dags`, shared between razor runs."""
    dags = tuple(enumerate_dags(m, max_m))
    logger.info("enumerated %d DAGs on %d vertices", len(dags), m)
    return dags


def _check_permutation(pi: Sequence[int], m: int) -> Tuple[int, ...]:
    pi = tuple(int(v) for v in pi)
    if sorted(pi) != list(range(1, m + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{m}")
    return pi


def permutation_dag(pi: Sequence[int], model: IndependenceModel) -> Dag:
    """The DAG induced by ordering ``pi`` against ``model``.

    Each vertex starts with all of its predecessors as parents. Predecessors are
    then tested in increasing label order and dropped when the vertex is
    independent of them given the remaining candidates. Passes repeat until
    nothing changes.
    """
    pi = _check_permutation(pi, model.m)
    edges = set()
    for pos, v in enumerate(pi):
        candidates = set(pi[:pos])
        changed = True
        while changed:
            changed = False
            for u in sorted(candidates):
                rest = candidates - {u}
                if CiStatement(u, v, rest) in model:
                    candidates = rest
                    changed = True
        edges.update((u, v) for u in candidates)
    return Dag(model.m, frozenset(edges))


def single_ci_dag(m: int, i: int, j: int, s: Iterable[int] = ()) -> Dag:
    """A DAG whose independence model is exactly {<Xi, Xj | S>}.

    Orders the vertices as i, then S, then j, then the rest, takes the complete
    DAG along that order and drops the i-j adjacency. With m == 2 that is the
    empty DAG.
    """
    s = frozenset(s)
    if m < 2:
        raise InvalidDagError("a single-CI DAG needs at least two vertices")
    for v in (i, j, *s):
        if not 1 <= v <= m:
            raise InvalidDagError(f"vertex {v} is outside 1..{m}")
    if i == j or i in s or j in s:
        raise ValueError(f"({i}, {j} | {sorted(s)}) is not a valid CI")
    rest = sorted(set(range(1, m + 1)) - s - {i, j})
    order = [i, *sorted(s), j, *rest]
    full = Dag.complete(order)
    return Dag(m, full.edges - {(i, j)})


def basic_cis(g: Dag, order: Optional[Sequence[int]] = None) -> IndependenceModel:
    """CIs of the ordered Markov condition: <Xi, Xj | Pa(i)> for each earlier non-parent j."""
    if order is None:
        order = g.topological_order
    order = _check_permutation(order, g.m)
    position = {v: idx for idx, v in enumerate(order)}
    for j, k in g.edges:
        if position[j] > position[k]:
            raise ValueError(f"{order} is not a topological order: {j}->{k} points backwards")
    cis = []
    for idx, v in enumerate(order):
        for u in order[:idx]:
            if u not in g.parents[v]:
                cis.append(CiStatement(u, v, g.parents[v]))
    return IndependenceModel(g.m, frozenset(cis))


def random_dag(m: int, rng, edge_prob: float = 0.5) -> Dag:
    """A random DAG: shuffle the vertices, then keep each forward pair with ``edge_prob``.

    ``rng`` is a ``numpy.random.Generator``.
    """
    order = [int(v) for v in rng.permutation(range(1, m + 1))]
    edges = [
        (order[a], order[b])
        for a in range(m)
        for b in range(a + 1, m)
        if rng.random() < edge_prob
    ]
    return Dag(m, frozenset(edges))
