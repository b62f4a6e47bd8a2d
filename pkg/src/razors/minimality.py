"""Minimality razors: SGS, Pm and uPm."""
from ..graph_core import Dag
from .base import IN, BaseRazor, Membership, RazorId, UniqueRazor
from .space import HypothesisSpace


class SgsMinimalityRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.SGS,
            name="SGS-minimality",
            criterion="No proper subgraph of the DAG is Markovian.",
        )

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        # a Markovian proper subgraph exists iff some single-edge deletion is Markovian
        for j, k in dag.sorted_edges():
            smaller = dag.remove_edge(j, k)
            if space.is_markovian(smaller):
                return Membership(False, f"deleting {j}->{k} leaves Markovian {smaller.label}")
        return IN


class PMinimalityRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.PM,
            name="P-minimality",
            criterion="No Markovian DAG entails a strict superset of the DAG's CIs.",
        )

    def prepare(self, space: HypothesisSpace):
        space.maximal_models

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        better = space.dominator(dag)
        if better is not None:
            return Membership(False, f"{better.label} entails a strict superset of its CIs")
        return IN


def unique_p_minimality(p_minimality: PMinimalityRazor) -> UniqueRazor:
    return UniqueRazor(
        RazorId.UPM,
        p_minimality,
        name="Unique P-minimality",
        criterion="P-minimality, provided every P-minimal DAG lies in one MEC.",
    )
