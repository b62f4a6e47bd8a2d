"""Scoring criteria: negative edge count, BIC on sampled data, and the consistency probe."""
import logging
from dataclasses import dataclass, field
from math import inf, log
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DimensionMismatchError, InvalidModelError
from .graph_core import Dag, independence_model_of_dag
from .independence import IndependenceModel
from .multinomial import (
    JointTable,
    MultinomialModel,
    RangeSpec,
    extract_independence_model,
    joint_from_model,
    param_count,
)

logger = logging.getLogger(__name__)

# Identity of the pseudorandom stream used by :func:`sample`
GENERATOR = "numpy.PCG64"

NEC = "NEC"
BIC = "BIC"


def column(v: int) -> str:
    return f"X{v}"


@dataclass(frozen=True, eq=False)
class Dataset:
    """n complete discrete observations, one column ``X<i>`` per variable."""

    ranges: RangeSpec
    frame: pd.DataFrame
    provenance: Optional[Tuple[str, int]] = None

    def __post_init__(self):
        expected = [column(v) for v in range(1, self.ranges.m + 1)]
        if list(self.frame.columns) != expected:
            raise DimensionMismatchError(self.ranges.m, len(self.frame.columns), "dataset columns")
        if len(self.frame) < 1:
            raise InvalidModelError("a dataset needs at least one row")
        for v, name in enumerate(expected, start=1):
            values = self.frame[name]
            if values.min() < 0 or values.max() >= self.ranges.of(v):
                raise InvalidModelError(f"{name} has values outside 0..{self.ranges.of(v) - 1}")

    @classmethod
    def from_rows(cls, ranges: RangeSpec, rows, provenance: Optional[Tuple[str, int]] = None) -> "Dataset":
        frame = pd.DataFrame(np.asarray(rows, dtype=np.int64).reshape(-1, ranges.m))
        frame.columns = [column(v) for v in range(1, ranges.m + 1)]
        return cls(ranges, frame, provenance)

    @property
    def n(self) -> int:
        return len(self.frame)

    def state_counts(self, vertex: int, parents: Sequence[int]) -> np.ndarray:
        """Counts with one row per observed parent configuration and one column per state."""
        states = range(self.ranges.of(vertex))
        target = self.frame[column(vertex)]
        if not parents:
            return target.value_counts().reindex(states, fill_value=0).to_numpy()[np.newaxis, :]
        table = pd.crosstab([self.frame[column(p)] for p in parents], target)
        return table.reindex(columns=states, fill_value=0).to_numpy()


@dataclass(frozen=True)
class VertexScore:
    vertex: int
    log_likelihood: float
    parameters: int
    penalty: float
    unobserved_parent_configs: int

    @property
    def score(self) -> float:
        return 2 * self.log_likelihood - self.penalty


@dataclass(frozen=True)
class ScoreReport:
    dag: Dag
    criterion: str
    value: float
    c: Optional[float] = None
    n: Optional[int] = None
    per_vertex: Tuple[VertexScore, ...] = ()


def nec(g: Dag, p_model: IndependenceModel) -> float:
    """-|E(G)| for a Markovian DAG, -inf otherwise."""
    if g.m != p_model.m:
        raise DimensionMismatchError(g.m, p_model.m)
    if independence_model_of_dag(g).cis <= p_model.cis:
        return -float(len(g.edges))
    return -inf


def nec_report(g: Dag, p_model: IndependenceModel) -> ScoreReport:
    return ScoreReport(g, NEC, nec(g, p_model))


def sample(joint: JointTable, n: int, seed: int, model_id: Optional[str] = None) -> Dataset:
    """n i.i.d. rows by inverse CDF over the joint in mixed-radix order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    configs = list(joint.ranges.configurations(tuple(range(1, joint.m + 1))))
    weights = np.array([float(joint.probabilities.get(cfg, 0)) for cfg in configs])
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = np.searchsorted(cdf, rng.random(n), side="right")
    picks = np.minimum(picks, len(configs) - 1)
    rows = np.asarray(configs, dtype=np.int64)[picks]
    logger.debug("sampled %d rows with seed %d from %s", n, seed, GENERATOR)
    return Dataset.from_rows(joint.ranges, rows, provenance=(model_id or "joint", seed))


def _vertex_score(data: Dataset, vertex: int, parents: Sequence[int], c: float) -> VertexScore:
    counts = data.state_counts(vertex, parents).astype(float)
    log_likelihoods = np.zeros_like(counts, dtype=float)
    np.log(counts, out=log_likelihoods, where=counts > 0)

    log_conditionals = np.sum(counts, axis=1, dtype=float)
    np.log(log_conditionals, out=log_conditionals, where=log_conditionals > 0)

    log_likelihoods -= log_conditionals[:, np.newaxis]
    log_likelihoods *= counts

    parent_states = data.ranges.product(parents)
    parameters = (data.ranges.of(vertex) - 1) * parent_states
    return VertexScore(
        vertex=vertex,
        log_likelihood=float(np.sum(log_likelihoods)),
        parameters=parameters,
        penalty=c * parameters * log(data.n),
        unobserved_parent_configs=parent_states - counts.shape[0],
    )


def bic(g: Dag, data: Dataset, c: float = 1.0) -> ScoreReport:
    """2 * log-likelihood - c * |params| * ln n, decomposed per vertex."""
    if data.ranges.m != g.m:
        raise DimensionMismatchError(g.m, data.ranges.m)
    if c <= 0:
        raise ValueError("the penalty multiplier c must be positive")
    per_vertex = tuple(_vertex_score(data, v, sorted(g.parents[v]), c) for v in g.vertices)
    total = sum(vs.score for vs in per_vertex)
    return ScoreReport(g, BIC, total, c=c, n=data.n, per_vertex=per_vertex)


@dataclass(frozen=True)
class ClauseCheck:
    """One ordered pair a consistent criterion must rank ``better`` above ``worse``.

    Clause ``a``: only ``better`` is Markovian. Clause ``b``: both are Markovian and
    ``better`` has fewer parameters.
    """

    n: int
    clause: str
    better: Dag
    worse: Dag
    bic_rate: float
    nec_holds: bool


@dataclass
class ConsistencyReport:
    checks: List[ClauseCheck] = field(default_factory=list)
    nec_scores: Dict[Dag, float] = field(default_factory=dict)
    mean_bic: Dict[int, Dict[Dag, float]] = field(default_factory=dict)

    def nec_best(self) -> Dag:
        return max(self.nec_scores, key=lambda g: self.nec_scores[g])

    def bic_best(self, n: int) -> Dag:
        scores = self.mean_bic[n]
        return max(scores, key=lambda g: scores[g])

    def dilemma(self, n: int) -> bool:
        """NEC and BIC disagree on the top DAG."""
        return self.nec_best() != self.bic_best(n)

    def bic_consistent(self, threshold: float = 0.95) -> bool:
        return all(check.bic_rate >= threshold for check in self.checks)


def consistency_probe(
    gs: Sequence[Dag],
    model: MultinomialModel,
    n_schedule: Sequence[int],
    seeds: Sequence[int],
    c: float = 1.0,
    p_model: Optional[IndependenceModel] = None,
    model_id: Optional[str] = None,
) -> ConsistencyReport:
    """Rank ``gs`` by NEC and by BIC on samples of ``model`` and test both consistency clauses."""
    gs = list(dict.fromkeys(gs))
    for g in gs:
        if g.m != model.m:
            raise DimensionMismatchError(model.m, g.m)
    joint = joint_from_model(model)
    p_model = p_model or extract_independence_model(joint)
    ranges = model.ranges
    report = ConsistencyReport(nec_scores={g: nec(g, p_model) for g in gs})
    markovian = {g: report.nec_scores[g] > -inf for g in gs}

    params = {g: param_count(g, ranges) for g in gs}
    pairs = []
    for better in gs:
        for worse in gs:
            if better == worse:
                continue
            if markovian[better] and not markovian[worse]:
                pairs.append(("a", better, worse))
            elif markovian[better] and markovian[worse] and params[better] < params[worse]:
                pairs.append(("b", better, worse))

    for n in n_schedule:
        totals = {g: 0.0 for g in gs}
        wins = {key: 0 for key in pairs}
        for seed in seeds:
            data = sample(joint, n, seed, model_id)
            scores = {g: bic(g, data, c).value for g in gs}
            for g in gs:
                totals[g] += scores[g]
            for key in pairs:
                _, better, worse = key
                if scores[better] > scores[worse]:
                    wins[key] += 1
        report.mean_bic[n] = {g: totals[g] / len(seeds) for g in gs}
        for key in pairs:
            clause, better, worse = key
            report.checks.append(
                ClauseCheck(
                    n=n,
                    clause=clause,
                    better=better,
                    worse=worse,
                    bic_rate=wins[key] / len(seeds),
                    nec_holds=report.nec_scores[better] > report.nec_scores[worse],
                )
            )
        logger.info("consistency probe at n=%d over %d seeds done", n, len(seeds))
    return report
