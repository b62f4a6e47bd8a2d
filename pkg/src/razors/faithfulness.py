"""Markov and faithfulness razors: CMC, CFC, adjF, oriF, resF and triF."""
from typing import Optional

from ..graph_core import Dag, Triple, independence_model_of_dag
from .base import IN, BaseRazor, Membership, RazorId
from .space import HypothesisSpace


class MarkovRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.CMC,
            name="Causal Markov condition",
            criterion="Every CI entailed by the DAG holds in P.",
        )

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        return self._outside_cmc(dag, space) or IN


class FaithfulnessRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.CFC,
            name="Causal faithfulness condition",
            criterion="The DAG is Markovian and entails every CI that holds in P.",
        )

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        unexplained = space.p_model.cis - independence_model_of_dag(dag).cis
        if unexplained:
            first = min(unexplained, key=lambda ci: ci.sort_key())
            return Membership(False, f"unfaithful CI {first}")
        return IN


class AdjacencyFaithfulnessRazor(BaseRazor):
    def __init__(self):
        super().__init__(
            razor_id=RazorId.ADJF,
            name="Adjacency faithfulness",
            criterion="No CI of P separates a pair of adjacent vertices.",
        )

    def violation(self, dag: Dag, space: HypothesisSpace) -> Optional[str]:
        for j, k in dag.sorted_edges():
            cis = space.statements_about(j, k)
            if cis:
                return f"adjacency {j}-{k} carries {cis[0]}"
        return None

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        witness = self.violation(dag, space)
        return Membership(False, witness) if witness else IN


def triple_violation(triple: Triple, space: HypothesisSpace) -> Optional[str]:
    """The offending CI for one triple, following the collider / non-collider clauses."""
    for ci in space.statements_about(triple.i, triple.k):
        conditioned = triple.j in ci.s
        if triple.collider_at_j and conditioned:
            return f"collider {triple.i}->{triple.j}<-{triple.k} with {ci}"
        if not triple.collider_at_j and not conditioned:
            return f"non-collider {triple.i}-{triple.j}-{triple.k} with {ci}"
    return None


class _TripleFaithfulnessRazor(BaseRazor):
    shielded = False

    def violation(self, dag: Dag, space: HypothesisSpace) -> Optional[str]:
        for triple in dag.triples:
            if triple.shielded != self.shielded:
                continue
            found = triple_violation(triple, space)
            if found:
                return f"{triple.kind} triple: {found}"
        return None

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        witness = self.violation(dag, space)
        return Membership(False, witness) if witness else IN


class OrientationFaithfulnessRazor(_TripleFaithfulnessRazor):
    shielded = False

    def __init__(self):
        super().__init__(
            razor_id=RazorId.ORIF,
            name="Orientation faithfulness",
            criterion=(
                "On every unshielded triple, a collider is never separated given its middle "
                "vertex and a non-collider is never separated without it."
            ),
        )


class TriangleFaithfulnessRazor(_TripleFaithfulnessRazor):
    shielded = True

    def __init__(self):
        super().__init__(
            razor_id=RazorId.TRIF,
            name="Triangle faithfulness",
            criterion="The orientation clauses, applied to every shielded triple.",
        )


class RestrictedFaithfulnessRazor(BaseRazor):
    """Adjacency and orientation faithfulness together."""

    def __init__(self, adjacency: AdjacencyFaithfulnessRazor, orientation: OrientationFaithfulnessRazor):
        super().__init__(
            razor_id=RazorId.RESF,
            name="Restricted faithfulness",
            criterion="Both adjacency faithfulness and orientation faithfulness hold.",
        )
        self.adjacency = adjacency
        self.orientation = orientation

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        witness = self.adjacency.violation(dag, space) or self.orientation.violation(dag, space)
        return Membership(False, witness) if witness else IN
