"""Razor classifiers and their construction."""
from typing import Dict

from .base import BaseRazor, Membership, RazorId, UniqueRazor
from .faithfulness import (
    AdjacencyFaithfulnessRazor,
    FaithfulnessRazor,
    MarkovRazor,
    OrientationFaithfulnessRazor,
    RestrictedFaithfulnessRazor,
    TriangleFaithfulnessRazor,
)
from .frugality import FrugalityRazor, unique_frugality
from .minimality import PMinimalityRazor, SgsMinimalityRazor, unique_p_minimality
from .parametric import ParamMinimalityRazor, unique_param_minimality
from .space import EXHAUSTIVE, POOL, HypothesisSpace


def build_razors() -> Dict[RazorId, BaseRazor]:
    """One instance of every razor, keyed by id, in table order."""
    adjacency = AdjacencyFaithfulnessRazor()
    orientation = OrientationFaithfulnessRazor()
    frugality = FrugalityRazor()
    p_minimality = PMinimalityRazor()
    param_minimality = ParamMinimalityRazor()
    razors = [
        FaithfulnessRazor(),
        unique_p_minimality(p_minimality),
        RestrictedFaithfulnessRazor(adjacency, orientation),
        adjacency,
        orientation,
        unique_frugality(frugality),
        frugality,
        unique_param_minimality(param_minimality),
        param_minimality,
        p_minimality,
        SgsMinimalityRazor(),
        TriangleFaithfulnessRazor(),
        MarkovRazor(),
    ]
    return {razor.razor_id: razor for razor in razors}


__all__ = [
    "BaseRazor",
    "Membership",
    "RazorId",
    "UniqueRazor",
    "HypothesisSpace",
    "EXHAUSTIVE",
    "POOL",
    "build_razors",
]
