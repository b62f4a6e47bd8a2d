"""Bundled example models and the facts each one is expected to exhibit."""
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import FormatError, UnknownExampleError
from ..graph_core import Dag, independence_model_of_dag
from ..independence import IndependenceModel
from ..multinomial import MultinomialModel, RangeSpec, extract_independence_model, joint_from_model

logger = logging.getLogger(__name__)

CATALOG_DIR = Path(__file__).parent
EXPECTED_MATRIX = CATALOG_DIR / "expected_matrix.json"

ORDER = (
    "count_pair",
    "hexagon_cancellation",
    "collider_marginal",
    "two_independent",
    "chain_collider_tie",
    "four_cycle_tie",
    "diamond_cancellation",
    "five_star_equalities",
)


def statements_from_json(m: int, raw: Sequence[Sequence[Any]]) -> IndependenceModel:
    """``[[i, j, [s...]], ...]`` as an independence model."""
    return IndependenceModel.of(m, [(int(i), int(j), [int(v) for v in s]) for i, j, s in raw])


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """One bundled example: named DAGs, the distribution or CI model, and expected facts."""

    id: str
    aliases: Tuple[str, ...]
    title: str
    ranges: RangeSpec
    dags: Dict[str, Dag]
    model: Optional[MultinomialModel] = None
    declared: Optional[IndependenceModel] = None
    facts: Tuple[Dict[str, Any], ...] = field(default_factory=tuple)

    @property
    def m(self) -> int:
        return self.ranges.m

    def dag(self, name: str) -> Dag:
        try:
            return self.dags[name]
        except KeyError:
            raise FormatError(f"example {self.id} has no DAG named {name!r}") from None

    @cached_property
    def joint(self):
        if self.model is None:
            return None
        return joint_from_model(self.model)

    @cached_property
    def p_model(self) -> IndependenceModel:
        """I(P): extracted from the joint for distributional entries, declared otherwise."""
        if self.model is not None:
            return extract_independence_model(self.joint)
        return self.declared

    def named_dags(self) -> Tuple[Dag, ...]:
        return tuple(self.dags.values())

    def name_of(self, dag: Dag) -> Optional[str]:
        for name, candidate in self.dags.items():
            if candidate == dag:
                return name
        return None


def _dag_from_edges(m: int, edges) -> Dag:
    return Dag(m, frozenset((int(j), int(k)) for j, k in edges))


def model_spec(m: int, spec: Dict[str, Any], dags: Dict[str, Dag]) -> IndependenceModel:
    """A CI model given as explicit ``cis`` or as I(base_dag) plus ``extra`` statements."""
    if "cis" in spec:
        return statements_from_json(m, spec["cis"])
    base = dags[spec["base_dag"]]
    return independence_model_of_dag(base).union(statements_from_json(m, spec.get("extra", [])))


def _entry_from_dict(payload: Dict[str, Any]) -> CatalogEntry:
    try:
        ranges = RangeSpec(tuple(payload["ranges"]))
        m = ranges.m
        if int(payload.get("m", m)) != m:
            raise FormatError(f"example {payload['id']} declares m={payload['m']} but {m} ranges")
        dags = {name: _dag_from_edges(m, edges) for name, edges in payload["dags"].items()}
        spec = payload["model"]
        model = declared = None
        if "cpt" in spec:
            rows = {int(v): table for v, table in spec["cpt"].items()}
            model = MultinomialModel.from_rows(dags[spec["generator"]], ranges, rows)
        else:
            declared = model_spec(m, spec, dags)
        return CatalogEntry(
            id=payload["id"],
            aliases=tuple(payload.get("aliases", ())),
            title=payload.get("title", ""),
            ranges=ranges,
            dags=dags,
            model=model,
            declared=declared,
            facts=tuple(payload.get("expected", ())),
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed catalog entry {payload.get('id', '?')}: {exc}") from exc


@lru_cache(maxsize=None)
def _load_by_id(example_id: str) -> CatalogEntry:
    path = CATALOG_DIR / f"{example_id}.json"
    with open(path, encoding="utf-8") as f:
        entry = _entry_from_dict(json.load(f))
    logger.debug("loaded example %s from %s", entry.id, path.name)
    return entry


@lru_cache(maxsize=None)
def _aliases() -> Dict[str, str]:
    table = {}
    for example_id in ORDER:
        table[example_id.lower()] = example_id
        for alias in _load_by_id(example_id).aliases:
            table[alias.lower()] = example_id
    return table


def ids() -> List[str]:
    return list(ORDER)


def resolve(name: str) -> str:
    """Canonical id for an id or alias, case-insensitively."""
    example_id = _aliases().get(name.strip().lower())
    if example_id is None:
        raise UnknownExampleError(name, ORDER)
    return example_id


def load(name: str) -> CatalogEntry:
    """
    Load a catalog entry by id or alias.

    Args:
        name: id such as ``four_cycle_tie`` or an alias such as ``E2``

    Returns:
        CatalogEntry: the parsed example

    Raises:
        UnknownExampleError: if nothing matches ``name``
    """
    return _load_by_id(resolve(name))


def all_entries() -> List[CatalogEntry]:
    return [_load_by_id(example_id) for example_id in ORDER]


def catalog_model(name: str) -> MultinomialModel:
    """The multinomial model behind a distributional example.

    Raises:
        UnknownExampleError: for unknown ids and for entries that only declare CIs.
    """
    entry = load(name)
    if entry.model is None:
        with_models = [e.id for e in all_entries() if e.model is not None]
        raise UnknownExampleError(f"{name} (declares CIs only)", with_models)
    return entry.model


__all__ = [
    "CatalogEntry",
    "all_entries",
    "catalog_model",
    "ids",
    "load",
    "model_spec",
    "resolve",
    "statements_from_json",
]
