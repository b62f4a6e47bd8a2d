"""The hypothesis space a razor ranges over, with the per-model caches razors share."""
import logging
import threading
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .. import config
from ..errors import DimensionMismatchError, MissingRangesError
from ..graph_core import Dag, dag_space, independence_model_of_dag, markov_equivalent, permutation_dag
from ..independence import CiStatement, IndependenceModel
from ..multinomial import RangeSpec, param_count

logger = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
POOL = "pool"


class HypothesisSpace:
    """DAG(v) for one independence model, or a permutation pool above the ceiling.

    In pool mode the DAGs are the permutation DAGs of every ordering of 1..m plus
    any caller-named DAGs. For graphoid models that pool contains every
    SGS-minimal DAG, which is all the global razors need.
    """

    def __init__(
        self,
        p_model: IndependenceModel,
        ranges: Optional[RangeSpec] = None,
        max_m: Optional[int] = None,
        threads: Optional[int] = None,
        extra_dags: Iterable[Dag] = (),
    ):
        if ranges is not None and ranges.m != p_model.m:
            raise DimensionMismatchError(p_model.m, ranges.m)
        self.p_model = p_model
        self.ranges = ranges
        self.threads = max(1, threads if threads is not None else config.THREADS)
        self.ceiling = config.effective_max_m(max_m)
        extra = tuple(extra_dags)
        for dag in extra:
            if dag.m != p_model.m:
                raise DimensionMismatchError(p_model.m, dag.m)
        if p_model.m <= self.ceiling:
            self.mode = EXHAUSTIVE
            self.dags = dag_space(p_model.m, self.ceiling)
        else:
            self.mode = POOL
            self.dags = self._permutation_pool(extra)
            logger.warning(
                "m=%d is above the enumeration ceiling %d; using a pool of %d permutation DAGs "
                "(exact for graphoid models only)",
                p_model.m,
                self.ceiling,
                len(self.dags),
            )
        self._classes: Dict[str, Tuple[Dag, ...]] = {}
        self._splits: Dict[str, Optional[Tuple[Dag, Dag]]] = {}
        self._violations: Dict[Dag, Optional[CiStatement]] = {}
        self._lock = threading.Lock()

    @property
    def m(self) -> int:
        return self.p_model.m

    @property
    def exhaustive(self) -> bool:
        return self.mode == EXHAUSTIVE

    def _permutation_pool(self, extra: Tuple[Dag, ...]) -> Tuple[Dag, ...]:
        seen = {}
        for pi in permutations(range(1, self.m + 1)):
            dag = permutation_dag(pi, self.p_model)
            seen.setdefault(dag, None)
        for dag in extra:
            seen.setdefault(dag, None)
        return tuple(seen)

    @cached_property
    def by_pair(self) -> Dict[Tuple[int, int], Tuple[CiStatement, ...]]:
        """The statements of I(P), grouped by their variable pair."""
        index = defaultdict(list)
        for ci in self.p_model.statements():
            index[ci.pair].append(ci)
        return {pair: tuple(cis) for pair, cis in index.items()}

    def statements_about(self, a: int, b: int) -> Tuple[CiStatement, ...]:
        return self.by_pair.get((min(a, b), max(a, b)), ())

    def markov_violation(self, dag: Dag) -> Optional[CiStatement]:
        """The first CI entailed by ``dag`` but missing from I(P), if any."""
        if dag.m != self.m:
            raise DimensionMismatchError(self.m, dag.m)
        if dag in self._violations:
            return self._violations[dag]
        missing = independence_model_of_dag(dag).cis - self.p_model.cis
        found = min(missing, key=CiStatement.sort_key) if missing else None
        with self._lock:
            return self._violations.setdefault(dag, found)

    def is_markovian(self, dag: Dag) -> bool:
        return self.markov_violation(dag) is None

    @cached_property
    def markovian(self) -> Tuple[Dag, ...]:
        dags = tuple(dag for dag in self.dags if self.is_markovian(dag))
        logger.info("%d of %d DAGs are Markovian", len(dags), len(self.dags))
        return dags

    @cached_property
    def min_edges(self) -> int:
        return min(len(dag.edges) for dag in self.markovian)

    def require_ranges(self) -> RangeSpec:
        if self.ranges is None:
            raise MissingRangesError("parameter-minimality razors need variable ranges")
        return self.ranges

    @cached_property
    def min_params(self) -> int:
        ranges = self.require_ranges()
        return min(param_count(dag, ranges) for dag in self.markovian)

    @cached_property
    def _models_by_size(self) -> List[Tuple[FrozenSet[CiStatement], Dag]]:
        first: Dict[FrozenSet[CiStatement], Dag] = {}
        for dag in self.markovian:
            first.setdefault(independence_model_of_dag(dag).cis, dag)
        return sorted(first.items(), key=lambda item: -len(item[0]))

    @cached_property
    def maximal_models(self) -> FrozenSet[FrozenSet[CiStatement]]:
        """Independence models of Markovian DAGs that no other Markovian DAG strictly extends."""
        maximal = []
        for cis, _ in self._models_by_size:
            if not any(cis < other for other in maximal):
                maximal.append(cis)
        return frozenset(maximal)

    def dominator(self, dag: Dag) -> Optional[Dag]:
        """A Markovian DAG whose independence model strictly contains I(dag)."""
        cis = independence_model_of_dag(dag).cis
        if cis in self.maximal_models:
            return None
        for other, witness in self._models_by_size:
            if cis < other:
                return witness
        return None

    def mec_split(self, dags: Iterable[Dag]) -> Optional[Tuple[Dag, Dag]]:
        """Two members of different MECs, or None when ``dags`` is one MEC."""
        dags = list(dags)
        for other in dags[1:]:
            if not markov_equivalent(dags[0], other):
                return dags[0], other
        return None

    def class_split(self, razor) -> Optional[Tuple[Dag, Dag]]:
        """:meth:`mec_split` of ``razor``'s class, computed once per space."""
        key = razor.razor_id.value
        if key not in self._splits:
            self._splits[key] = self.mec_split(self.members(razor))
        return self._splits[key]

    def members(self, razor) -> Tuple[Dag, ...]:
        """Every DAG of the space in ``razor``'s class, in space order."""
        key = razor.razor_id.value
        cached = self._classes.get(key)
        if cached is not None:
            return cached
        razor.prepare(self)
        if self.threads > 1:
            # workers only read the shared caches from here on
            self.markovian
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                flags = list(pool.map(lambda dag: razor.check(dag, self).member, self.dags))
        else:
            flags = [razor.check(dag, self).member for dag in self.dags]
        found = tuple(dag for dag, flag in zip(self.dags, flags) if flag)
        logger.info("class %s has %d members over %d DAGs", key, len(found), len(self.dags))
        with self._lock:
            self._classes.setdefault(key, found)
        return self._classes[key]
