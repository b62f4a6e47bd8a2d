"""Parameter-minimality razors for multinomial models: ParamM and uParamM."""
from ..graph_core import Dag
from ..multinomial import param_count
from .base import IN, BaseRazor, Membership, RazorId, UniqueRazor
from .space import HypothesisSpace


class ParamMinimalityRazor(BaseRazor):
    requires_ranges = True

    def __init__(self):
        super().__init__(
            razor_id=RazorId.PARAMM,
            name="Parameter minimality",
            criterion="No Markovian DAG needs fewer multinomial parameters.",
        )

    def prepare(self, space: HypothesisSpace):
        space.min_params

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        ranges = space.require_ranges()
        outside = self._outside_cmc(dag, space)
        if outside:
            return outside
        count = param_count(dag, ranges)
        if count > space.min_params:
            leaner = next(h for h in space.markovian if param_count(h, ranges) == space.min_params)
            return Membership(
                False, f"{leaner.label} is Markovian with {space.min_params} parameters against {count}"
            )
        return IN


def unique_param_minimality(param_minimality: ParamMinimalityRazor) -> UniqueRazor:
    return UniqueRazor(
        RazorId.UPARAMM,
        param_minimality,
        name="Unique parameter minimality",
        criterion="Parameter minimality, provided every minimiser lies in one MEC.",
    )
