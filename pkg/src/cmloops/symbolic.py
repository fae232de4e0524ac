"""Loops of the form D x K with D a product of d quasicyclic 3-groups.

D is central and divisible, so it is only counted, never tabulated. A loop with
the minimum condition on subloops has exactly this shape, and the
classification verdicts below depend only on d and the structure of the
finite factor K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import LoopTable, PreconditionError
from .series import derived_series, is_minimal_of_class, lower_central_series
from .subloops import BoundExceeded, SubloopMask, all_subloops, is_associative_subloop

UNAVAILABLE = "unavailable: enumeration bound exceeded"


@dataclass(frozen=True)
class SymbolicCML:
    d: int
    K: LoopTable

    def __post_init__(self):
        if self.d < 0:
            raise PreconditionError("d must be non-negative")
        if not self.K.is_cml:
            rep = self.K.verification
            raise PreconditionError(f"finite factor is not a CML: {rep.failed_check} fails at {rep.first_failure}")

    @property
    def infinite(self) -> bool:
        return self.d >= 1


@dataclass
class ClassificationReport:
    min_condition: bool
    infinite: bool
    prop_2_17: bool | None
    prop_2_17_reason: str
    cor_2_7: int | None
    cor_2_7_reason: str
    cor_2_7_nilpotent: int | None
    cor_2_11_steady: bool
    cor_2_11_reason: str
    solvability_class: int | None
    nilpotency_class: int | None
    divisible_rank: int
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "min_condition": self.min_condition,
            "infinite": self.infinite,
            "prop_2_17": {"holds": self.prop_2_17, "reason": self.prop_2_17_reason},
            "cor_2_7": {"class": self.cor_2_7, "nilpotent_class": self.cor_2_7_nilpotent,
                        "reason": self.cor_2_7_reason},
            "cor_2_11_steady": {"holds": self.cor_2_11_steady, "reason": self.cor_2_11_reason},
            "classes": {"solvability": self.solvability_class, "nilpotency": self.nilpotency_class},
            "divisible_rank": self.divisible_rank,
            "notes": self.notes,
        }


def divisible_part(S: SymbolicCML) -> int:
    """Rank of the largest divisible subloop; a finite K adds nothing."""
    return S.d


def _whole_class(S: SymbolicCML, k_class: int | None) -> int | None:
    # a non-trivial central D lifts a trivial K to an abelian (class 1) loop
    if k_class == 0 and S.d >= 1:
        return 1
    return k_class


def _minimal_factor_verdict(S: SymbolicCML, kind: str, k_class: int | None, bound) -> tuple:
    """Class n for which S is one quasicyclic group times a minimal loop of class n."""
    if S.d != 1:
        return None, f"needs exactly one quasicyclic factor, has {S.d}"
    if k_class == 0:
        return 1, "the quasicyclic group alone: infinite abelian, every proper subgroup finite"
    if k_class == 1:
        return None, "K is a non-trivial group, so D is a proper infinite subloop of the same class"
    if is_minimal_of_class(S.K, kind, k_class, bound).holds:
        return k_class, f"K is minimal of {kind} class {k_class}"
    return None, f"K has a proper subloop of {kind} class {k_class}"


def classify(S: SymbolicCML, bound: int | None = None) -> ClassificationReport:
    K = S.K
    full = SubloopMask.full(K.order)
    k_assoc = is_associative_subloop(K, full)
    k_solv = derived_series(K).class_value
    k_nil = lower_central_series(K).class_value
    notes = []

    proper_assoc = None
    try:
        proper_assoc = all(is_associative_subloop(K, H) for H in all_subloops(K, bound) if not H.is_full())
    except BoundExceeded:
        notes.append(UNAVAILABLE)

    if S.d != 1:
        prop, why = False, ("finite loop" if S.d == 0 else f"{S.d} quasicyclic factors; exactly one is allowed")
    elif k_assoc:
        prop, why = False, "finite factor is associative"
    elif proper_assoc is None:
        prop, why = None, UNAVAILABLE
    elif not proper_assoc:
        prop, why = False, "finite factor has a proper non-associative subloop"
    else:
        prop, why = True, "one quasicyclic factor times a non-associative loop whose proper subloops are associative"

    try:
        cor27, why27 = _minimal_factor_verdict(S, "solvable", k_solv, bound)
        cor27n, _ = _minimal_factor_verdict(S, "nilpotent", k_nil, bound)
    except BoundExceeded:
        cor27, why27, cor27n = None, UNAVAILABLE, None

    steady = S.d == 0
    why211 = ("no quasicyclic factor" if steady else f"{S.d} quasicyclic factor(s) present")

    return ClassificationReport(
        min_condition=True,
        infinite=S.infinite,
        prop_2_17=prop,
        prop_2_17_reason=why,
        cor_2_7=cor27,
        cor_2_7_reason=why27,
        cor_2_7_nilpotent=cor27n,
        cor_2_11_steady=steady,
        cor_2_11_reason=why211,
        solvability_class=_whole_class(S, k_solv),
        nilpotency_class=_whole_class(S, k_nil),
        divisible_rank=divisible_part(S),
        notes=notes,
    )
