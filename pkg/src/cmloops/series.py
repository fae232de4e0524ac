"""Central series, nilpotency and solvability classes, and structural predicates.

Series are computed inside an optional ambient subloop ``within`` so the
same code gives the class of any subloop without relabelling its table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import Limits, get_limits
from .core import LoopTable, TheoremViolation, exponent, power_array
from .subloops import (
    SubloopMask,
    all_subloops,
    associator_values,
    centre,
    close,
    generated_subloop,
    is_associative_subloop,
    is_normal,
    quotient,
)

NON_TERMINATING = "does_not_terminate_at_identity"
KINDS = ("lower_central", "derived", "upper_central")


@dataclass
class SeriesReport:
    kind: str
    chain: list
    class_value: int | None

    @property
    def sizes(self) -> list:
        return [H.size for H in self.chain]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "chain": [H.to_list() for H in self.chain],
            "sizes": self.sizes,
            "class": NON_TERMINATING if self.class_value is None else self.class_value,
        }

    def render(self) -> str:
        if self.kind == "upper_central":
            names = ["1"] + [f"Z{i}" for i in range(1, len(self.chain))]
            sep = " ⊂ "
        else:
            names = ["Q"] + [
                ("Q" + "'" * i) if self.kind == "derived" else f"Γ{i + 1}"
                for i in range(1, len(self.chain))
            ]
            sep = " ⊃ "
        if self.chain and self.chain[-1].is_trivial:
            names[-1] = "1"
        if self.chain and self.kind == "upper_central" and self.chain[-1].is_full():
            names[-1] = "Q"
        if len(self.chain) == 1:
            names = ["1"]
        cls = NON_TERMINATING if self.class_value is None else f"class {self.class_value}"
        body = sep.join(f"{nm}[{H.size}]" for nm, H in zip(names, self.chain))
        return f"{body} ({cls})"


@dataclass
class ClassPredicateResult:
    holds: bool
    witness: object = None
    skipped: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.holds else "violation"

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, SubloopMask):
            w = w.to_list()
        return {"holds": self.holds, "status": self.status, "witness": w, "detail": self.detail}


def _ambient(L: LoopTable, within: SubloopMask | None) -> SubloopMask:
    return SubloopMask.full(L.order) if within is None else within


def _descending(L, top: SubloopMask, step) -> tuple:
    chain = [top]
    while not chain[-1].is_trivial:
        nxt = step(chain[-1])
        if nxt == chain[-1]:
            return chain, None
        chain.append(nxt)
    return chain, len(chain) - 1


def _assert_normal(L: LoopTable, chain: list):
    for H in chain:
        if not is_normal(L, H):
            raise TheoremViolation("series term is not normal", H.to_list())


def lower_central_series(L: LoopTable, within: SubloopMask | None = None) -> SeriesReport:
    """Γ1 = Q, Γ(i+1) = <(g, x, y) : g in Γi, x, y in Q>, down to {1} or a fixed point."""
    Q = _ambient(L, within)
    Qs = Q.elements()
    chain, cls = _descending(
        L, Q, lambda G: generated_subloop(L, associator_values(L, G.elements(), Qs, Qs))
    )
    if within is None:
        _assert_normal(L, chain)
    return SeriesReport("lower_central", chain, cls)


def derived_series(L: LoopTable, within: SubloopMask | None = None) -> SeriesReport:
    """D0 = Q, D(i+1) = <(a, b, c) : a, b, c in Di>."""
    Q = _ambient(L, within)

    def step(D):
        Ds = D.elements()
        return generated_subloop(L, associator_values(L, Ds, Ds, Ds))

    chain, cls = _descending(L, Q, step)
    if within is None:
        _assert_normal(L, chain)
    return SeriesReport("derived", chain, cls)


def upper_central_series(L: LoopTable) -> SeriesReport:
    """Z0 = 1, Z(i+1) = preimage of the centre of L/Zi; stops at a fixed point."""
    n = L.order
    chain = [SubloopMask.trivial(n)]
    while not chain[-1].is_full():
        Qt, proj = quotient(L, chain[-1])
        Zq = centre(Qt).as_bool()
        nxt = SubloopMask.from_bool(Zq[proj])
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    _assert_normal(L, chain)
    cls = len(chain) - 1 if chain[-1].is_full() else None
    return SeriesReport("upper_central", chain, cls)


def series(L: LoopTable, kind: str) -> SeriesReport:
    kind = {"lower": "lower_central", "upper": "upper_central"}.get(kind, kind)
    if kind == "lower_central":
        return lower_central_series(L)
    if kind == "derived":
        return derived_series(L)
    if kind == "upper_central":
        return upper_central_series(L)
    raise ValueError(f"unknown series kind {kind!r}")


def nilpotency_class(L: LoopTable, within: SubloopMask | None = None) -> int | None:
    if within is not None and is_associative_subloop(L, within):
        return 0 if within.is_trivial else 1
    return lower_central_series(L, within).class_value


def solvability_class(L: LoopTable, within: SubloopMask | None = None) -> int | None:
    if within is not None and is_associative_subloop(L, within):
        return 0 if within.is_trivial else 1
    return derived_series(L, within).class_value


def nested_associator_generators(L: LoopTable, depth: int) -> np.ndarray:
    """Values of the depth-fold nested associators of arbitrary elements.

    Depth 1 gives all (x1, x2, x3); depth i gives all (p, q, r) with p, q, r
    values of depth i - 1.
    """
    values = np.arange(L.order)
    for _ in range(depth):
        values = associator_values(L, values, values, values)
    return values


def derived_generators_agree(L: LoopTable) -> ClassPredicateResult:
    """Compare each derived term with the subloop generated by nested associators."""
    rep = derived_series(L)
    mismatches = []
    for i, D in enumerate(rep.chain[1:], start=1):
        G = generated_subloop(L, nested_associator_generators(L, i))
        if G != D:
            mismatches.append({"depth": i, "derived": D.size, "nested": G.size})
    return ClassPredicateResult(not mismatches, mismatches or None, detail={"depths": len(rep.chain) - 1})


class _Extender:
    """Memoized <H, g> for subloops H met while walking generator sets."""

    def __init__(self, L: LoopTable):
        self.L = L
        self.cache = {}
        self.masks = {1: SubloopMask.trivial(L.order)}

    def extend(self, bits: int, g: int) -> int:
        if bits >> g & 1:
            return bits
        key = (bits, g)
        hit = self.cache.get(key)
        if hit is None:
            K = SubloopMask.from_bool(close(self.L, self.masks[bits].as_bool(), [g]))
            self.masks.setdefault(K.bits, K)
            hit = self.cache[key] = K.bits
        return hit

    def generate(self, gens) -> int:
        bits = 1
        for g in gens:
            bits = self.extend(bits, g)
        return bits


def bruck_slaby_check(L: LoopTable, n: int = 3, limits: Limits | None = None) -> ClassPredicateResult:
    """Every n-generated subloop must be centrally nilpotent of class at most n - 1.

    All n-element subsets are visited when there are at most
    ``limits.subset_budget`` of them; otherwise every k-th subset in
    lexicographic order, for a fixed stride k.
    """
    if n < 3:
        raise ValueError("the bound is stated for n >= 3")
    limits = limits or get_limits()
    total = math.comb(L.order, n)
    stride = max(1, -(-total // limits.subset_budget))
    subsets = itertools.islice(itertools.combinations(range(L.order), n), 0, None, stride)
    ext = _Extender(L)
    classes = {}
    checked = 0
    for gens in subsets:
        checked += 1
        bits = ext.generate(gens)
        if bits not in classes:
            classes[bits] = nilpotency_class(L, ext.masks[bits])
        c = classes[bits]
        if c is None or c > n - 1:
            return ClassPredicateResult(False, {"generators": list(gens), "class": c},
                                        detail={"checked": checked, "total": total})
    detail = {
        "checked": checked, "total": total, "exhaustive": checked == total,
        "distinct_subloops": len(classes), "max_class": max(classes.values(), default=0),
    }
    return ClassPredicateResult(True, detail=detail)


def lemma_1_7_check(L: LoopTable) -> ClassPredicateResult:
    """Cubes are central, and L/Z(L) has exponent dividing 3."""
    Z = centre(L)
    cubes = power_array(L, np.arange(L.order), 3)
    zmask = Z.as_bool()
    if not zmask[cubes].all():
        x = int(np.flatnonzero(~zmask[cubes])[0])
        return ClassPredicateResult(False, {"element": x, "cube": int(cubes[x])})
    Qz, _ = quotient(L, Z)
    e = exponent(Qz)
    if 3 % e:
        return ClassPredicateResult(False, {"quotient_exponent": e})
    return ClassPredicateResult(True, detail={"centre_order": Z.size, "quotient_order": Qz.order,
                                              "quotient_exponent": e})


def is_hamiltonian(L: LoopTable, bound: int | None = None) -> ClassPredicateResult:
    for H in all_subloops(L, bound):
        if not is_normal(L, H):
            return ClassPredicateResult(False, H)
    return ClassPredicateResult(True)


def _class_of(L: LoopTable, kind: str, within=None):
    if kind == "nilpotent":
        return nilpotency_class(L, within)
    if kind == "solvable":
        return solvability_class(L, within)
    raise ValueError(f"kind must be 'nilpotent' or 'solvable', not {kind!r}")


def is_minimal_of_class(L: LoopTable, kind: str, n: int, bound: int | None = None) -> ClassPredicateResult:
    """L has class n and every proper subloop has class below n."""
    own = _class_of(L, kind)
    if own != n:
        return ClassPredicateResult(False, {"reason": "class mismatch", "class": own})
    for H in all_subloops(L, bound):
        if H.is_full():
            continue
        c = _class_of(L, kind, H)
        if c is None or c >= n:
            return ClassPredicateResult(False, H, detail={"subloop_class": c})
    return ClassPredicateResult(True)


def lemma_3_1_check(L: LoopTable) -> ClassPredicateResult:
    """An element of order 3 generating a normal subloop is central."""
    Z = centre(L)
    orders = L.element_orders
    checked = 0
    for a in np.flatnonzero(orders == 3):
        checked += 1
        if int(a) in Z:
            continue
        if is_normal(L, generated_subloop(L, [int(a)])):
            return ClassPredicateResult(False, {"element": int(a)})
    return ClassPredicateResult(True, detail={"order_3_elements": checked})


def all_nonassoc_subloops_normal(L: LoopTable, bound: int | None = None) -> ClassPredicateResult:
    nonassoc = 0
    for H in all_subloops(L, bound):
        if is_associative_subloop(L, H):
            continue
        nonassoc += 1
        if not is_normal(L, H):
            return ClassPredicateResult(False, H)
    return ClassPredicateResult(True, detail={"nonassociative_subloops": nonassoc})


def corollary_4_5_check(L: LoopTable, bound: int | None = None) -> ClassPredicateResult:
    """If every non-associative subloop is normal: Q' is nilpotent and L has derived length <= 3."""
    pre = all_nonassoc_subloops_normal(L, bound)
    if not pre.holds:
        return ClassPredicateResult(True, skipped=True,
                                    detail={"reason": "precondition fails", "non_normal": pre.witness.to_list()})
    derived = derived_series(L)
    Qp = derived.chain[1] if len(derived.chain) > 1 else derived.chain[0]
    qp_class = nilpotency_class(L, Qp)
    s = derived.class_value
    detail = {"associator_subloop_order": Qp.size, "associator_subloop_class": qp_class,
              "solvability_class": s}
    if qp_class is None:
        return ClassPredicateResult(False, {"reason": "associator subloop not nilpotent"}, detail=detail)
    if s is None or s > 3:
        return ClassPredicateResult(False, {"reason": "solvability class exceeds 3", "class": s}, detail=detail)
    return ClassPredicateResult(True, detail=detail)


def hamiltonian_implies_associative(L: LoopTable, bound: int | None = None) -> ClassPredicateResult:
    ham = is_hamiltonian(L, bound)
    if not ham.holds:
        return ClassPredicateResult(True, detail={"hamiltonian": False})
    assoc = is_associative_subloop(L, SubloopMask.full(L.order))
    return ClassPredicateResult(assoc, None if assoc else {"reason": "hamiltonian but not associative"},
                                detail={"hamiltonian": True})
