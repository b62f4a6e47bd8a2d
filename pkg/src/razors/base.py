"""Base razor and shared vocabulary."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..graph_core import Dag
from .space import HypothesisSpace


class RazorId(str, Enum):
    """The thirteen razors, in the order used for hierarchy tables."""

    CFC = "CFC"
    UPM = "uPm"
    RESF = "resF"
    ADJF = "adjF"
    ORIF = "oriF"
    UFR = "uFr"
    FR = "Fr"
    UPARAMM = "uParamM"
    PARAMM = "ParamM"
    PM = "Pm"
    SGS = "SGS"
    TRIF = "triF"
    CMC = "CMC"

    @property
    def parametric(self) -> bool:
        return self in (RazorId.PARAMM, RazorId.UPARAMM)

    @property
    def within_sgs(self) -> bool:
        """Classes contained in SGS, hence computable from a permutation pool."""
        return self not in (RazorId.CMC, RazorId.ORIF, RazorId.TRIF)

    @classmethod
    def parse(cls, name: str) -> "RazorId":
        for rid in cls:
            if rid.value.lower() == name.strip().lower() or rid.name.lower() == name.strip().lower():
                return rid
        raise ValueError(f"unknown razor {name!r}; choose from {', '.join(r.value for r in cls)}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Membership:
    """Membership of one DAG in one razor class; ``witness`` explains a negative."""

    member: bool
    witness: Optional[str] = None


IN = Membership(True)


class BaseRazor:
    """Base class for razor classifiers."""

    requires_ranges = False

    def __init__(self, razor_id: RazorId, name: str, criterion: str):
        self.razor_id = razor_id
        self.name = name
        self.criterion = criterion

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        """
        Decide whether ``dag`` belongs to this razor's class.

        Args:
            dag: DAG under test
            space: hypothesis space holding the independence model

        Returns:
            Membership: verdict plus a witness when negative
        """
        raise NotImplementedError("Subclasses must implement check method")

    def prepare(self, space: HypothesisSpace):
        """Warm space-wide caches before members are checked, possibly in parallel."""

    def _outside_cmc(self, dag: Dag, space: HypothesisSpace) -> Optional[Membership]:
        """Every class lives inside CMC; a Markov violation rules the DAG out."""
        violation = space.markov_violation(dag)
        if violation is not None:
            return Membership(False, f"not Markovian: {violation} is entailed but not in I(P)")
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.razor_id.value})"


class UniqueRazor(BaseRazor):
    """The 'unique' variant of a base razor: its class survives only if it is one MEC."""

    def __init__(self, razor_id: RazorId, base: BaseRazor, name: str, criterion: str):
        super().__init__(razor_id, name, criterion)
        self.base = base
        self.requires_ranges = base.requires_ranges

    def prepare(self, space: HypothesisSpace):
        space.class_split(self.base)

    def check(self, dag: Dag, space: HypothesisSpace) -> Membership:
        verdict = self.base.check(dag, space)
        if not verdict.member:
            return verdict
        split = space.class_split(self.base)
        if split is not None:
            a, b = split
            return Membership(False, f"{self.base.razor_id} class spans several MECs: {a} vs {b}")
        return IN
