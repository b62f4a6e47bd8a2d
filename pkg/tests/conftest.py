"""Shared strategies and fixtures."""
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from src.graph_core import Dag
from src.multinomial import RangeSpec, random_multinomial_model

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def dags(draw: st.DrawFn, min_m: int = 1, max_m: int = 4) -> Dag:
    """Random DAG: a shuffled order, then a subset of the forward pairs."""
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    order = draw(st.permutations(list(range(1, m + 1))))
    forward = [(order[a], order[b]) for a in range(m) for b in range(a + 1, m)]
    keep = draw(st.lists(st.booleans(), min_size=len(forward), max_size=len(forward)))
    return Dag(m, frozenset(edge for edge, kept in zip(forward, keep) if kept))


@st.composite
def range_specs(draw: st.DrawFn, m: int, max_range: int = 3) -> RangeSpec:
    return RangeSpec(tuple(draw(st.lists(st.integers(2, max_range), min_size=m, max_size=m))))


@st.composite
def multinomial_models(draw: st.DrawFn, max_m: int = 3, max_range: int = 3):
    dag = draw(dags(min_m=2, max_m=max_m))
    ranges = draw(range_specs(dag.m, max_range))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_multinomial_model(dag, ranges, np.random.default_rng(seed), max_denominator=6)


def dag_of(m: int, *edges) -> Dag:
    return Dag(m, frozenset(edges))


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
