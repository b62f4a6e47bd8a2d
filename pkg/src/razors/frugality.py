"""Frugality razors: Fr and uFr."""
from ..graph_core import Dag
from .base import IN, BaseRazor, Membership, RazorId, UniqueRazor
from .space import HypothesisSpace


class FrugalityRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.FR,
            name="Frugality",
            criterion="No Markovian DAG has fewer edges.",
        )

    def prepare(self, space: HypothesisSpace):
        space.min_edges

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        if len(dag.edges) > space.min_edges:
            sparser = next(h for h in space.markovian if len(h.edges) == space.min_edges)
            return Membership(False, f"{sparser.label} is Markovian with {space.min_edges} edges")
        return IN


def unique_frugality(frugality: FrugalityRazor) -> UniqueRazor:
    return UniqueRazor(
        RazorId.UFR,
        frugality,
        name="Unique frugality",
        criterion="Frugality, provided every frugal DAG lies in one MEC.",
    )
