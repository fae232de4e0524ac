"""Associators, inner mappings and exhaustive identity checks.

The associator ``(a, b, c)`` is the element t with ``ab*c = (a*bc) * t``.
Everything here is vectorized over numpy index arrays, and every n^3 or n^4 scan
goes through :func:`scan_tuples`, which walks the tuple space in flat-index
chunks. When an n^4 scan is too big it switches to a stride sample and says so
in its coverage record.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import Limits, get_limits
from .core import LoopTable, power_array

CHUNK = 1 << 20

DEFAULT_EXPONENTS = ((2, 1, 1), (-1, 1, 1), (2, 2, 2), (3, 1, 1))


def memo(L: LoopTable, key: str, build):
    # LoopTable is frozen, but its instance dict is a fine write-once cache
    d = L.__dict__
    if key not in d:
        d[key] = build()
    return d[key]


def _assoc_direct(L: LoopTable, a, b, c) -> np.ndarray:
    T = L.table
    return L.left_division[T[a, T[b, c]], T[T[a, b], c]]


def associator_tensor(L: LoopTable) -> np.ndarray | None:
    """The full n^3 associator array, or None above ``Limits.tensor_order``."""

    def build():
        n = L.order
        if n > get_limits().tensor_order:
            return None
        dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
        out = np.empty((n, n, n), dtype=dtype)
        ar = np.arange(n)
        for a in range(n):
            out[a] = _assoc_direct(L, a, ar[:, None], ar[None, :])
        return out

    return memo(L, "_assoc_tensor", build)


def assoc_array(L: LoopTable, a, b, c) -> np.ndarray:
    """Associators of broadcast index arrays."""
    A = associator_tensor(L)
    if A is not None:
        return A[a, b, c]
    return _assoc_direct(L, np.asarray(a), np.asarray(b), np.asarray(c))


def associator(L: LoopTable, a: int, b: int, c: int) -> int:
    return int(_assoc_direct(L, int(a), int(b), int(c)))


def inner_apply_array(L: LoopTable, x, y, z) -> np.ndarray:
    """``L(x, y) z = z * (z, y, x)``, vectorized."""
    z = np.asarray(z)
    return L.table[z, assoc_array(L, z, y, x)]


def inner_apply(L: LoopTable, x: int, y: int, z: int) -> int:
    return int(inner_apply_array(L, int(x), int(y), int(z)))


def inner_map_definition(L: LoopTable, x, y, z) -> np.ndarray:
    """``L(xy)^-1 L(x) L(y) z``, straight from the translation maps."""
    T = L.table
    return L.left_division[T[x, y], T[x, T[y, z]]]


def inner_maps(L: LoopTable) -> np.ndarray:
    """The distinct maps ``z -> L(x, y) z`` over all pairs, one per row, sorted."""

    def build():
        n = L.order
        ar = np.arange(n)
        seen = {}
        for x in range(n):
            block = inner_apply_array(L, x, ar[:, None], ar[None, :])
            for row in block:
                key = row.tobytes()
                if key not in seen:
                    seen[key] = row.copy()
        return np.array([seen[k] for k in sorted(seen)], dtype=np.int64)

    return memo(L, "_inner_maps", build)


@dataclass
class AssociatorWitness:
    identity_id: str
    tuple: list
    lhs: int
    rhs: int
    exponents: tuple | None = None

    @property
    def failed(self) -> bool:
        return self.lhs != self.rhs

    def to_dict(self) -> dict:
        d = {"identity": self.identity_id, "tuple": list(self.tuple), "lhs": self.lhs, "rhs": self.rhs}
        if self.exponents is not None:
            d["exponents"] = list(self.exponents)
        return d


@dataclass
class Coverage:
    checked: int
    total: int
    exhaustive: bool

    def to_dict(self) -> dict:
        return {"checked": self.checked, "total": self.total, "exhaustive": self.exhaustive}


@dataclass
class IdentityReport:
    witnesses: list = field(default_factory=list)
    coverage: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.witnesses

    @property
    def partial(self) -> bool:
        return any(not c.exhaustive for c in self.coverage.values())

    def failed_identities(self) -> list:
        return sorted({w.identity_id for w in self.witnesses})

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "partial_coverage": self.partial,
            "coverage": {k: v.to_dict() for k, v in sorted(self.coverage.items())},
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def tuple_chunks(n: int, arity: int, exhaustive: bool, budget: int):
    """Yield ``(digits, shape, lead)`` blocks covering (or sampling) ``range(n)**arity``.

    Exhaustive blocks fix the leading digits as scalars and broadcast the
    trailing ones as an open grid of ``shape``. Sampled blocks are 1-D: the
    flat indices ``i * stride mod n**arity`` for ``i < budget``, with the
    stride prime to n, so the sample has no repeats and needs no seed.
    """
    total = n**arity
    if exhaustive or budget >= total:
        k = max(1, min(arity, int(math.log(CHUNK, n)) if n > 1 else arity))
        grid = np.ix_(*([np.arange(n)] * k))
        for lead in itertools.product(range(n), repeat=arity - k):
            yield list(lead) + list(grid), (n,) * k, lead
        return
    stride = max(1, total // budget)
    while math.gcd(stride, n) != 1:
        stride += 1
    for s in range(0, budget, CHUNK):
        rem = (np.arange(s, min(s + CHUNK, budget), dtype=np.int64) * stride) % total
        digits = []
        for _ in range(arity):
            digits.append(rem % n)
            rem = rem // n
        yield digits[::-1], (rem.size,), None


def scan_tuples(n: int, arity: int, evaluate, identity_id: str, limits: Limits,
                sampled_ok: bool = False, exponents=None):
    """Run ``evaluate(*digits) -> [(lhs, rhs), ...]`` over the tuple space.

    Returns ``(witnesses, Coverage)``. Only scans with ``sampled_ok`` may fall
    back to sampling, and only above ``limits.exhaustive_order``.
    """
    exhaustive = not (sampled_ok and n > limits.exhaustive_order)
    total = n**arity
    checked = 0
    witnesses = []
    for digits, shape, lead in tuple_chunks(n, arity, exhaustive, limits.sample_budget):
        checked += math.prod(shape)
        for lhs, rhs in evaluate(*digits):
            lhs = np.broadcast_to(lhs, shape).ravel()
            rhs = np.broadcast_to(rhs, shape).ravel()
            room = limits.max_witnesses - len(witnesses)
            for i in np.flatnonzero(lhs != rhs)[:room]:
                if lead is None:
                    tup = [int(d[i]) for d in digits]
                else:
                    tup = list(lead) + [int(v) for v in np.unravel_index(i, shape)]
                witnesses.append(AssociatorWitness(identity_id, tup, int(lhs[i]), int(rhs[i]), exponents))
        if len(witnesses) >= limits.max_witnesses:
            break
    return witnesses, Coverage(checked, total, checked == total)


def check_identities(L: LoopTable, exponents=DEFAULT_EXPONENTS, limits: Limits | None = None) -> IdentityReport:
    """Check the associator identities every CML satisfies, under their labels:

    * ``1.1``  L(x,y)z computed from translations equals z(z,y,x)
    * ``1.2``  (x,y,z) = (y^-1,x,z) = (y,x,z)^-1 = (y,z,x)
    * ``1.3``  (x^p, y^r, z^s) = (x,y,z)^(prs) for each exponent triple
    * ``1.4``  (x,y,z)^3 = 1
    * ``1.5``  (xy,u,v) = (x,u,v)((x,u,v),x,y)(y,u,v)((y,u,v),y,x), multiplied
      left to right

    Triples are always scanned exhaustively; the quadruples behind ``1.5`` are
    sampled above ``limits.exhaustive_order``.
    """
    limits = limits or get_limits()
    n = L.order
    T = L.table
    inv = L.inverses
    report = IdentityReport()

    def run(identity_id, arity, evaluate, sampled_ok=False, exps=None, key=None):
        w, cov = scan_tuples(n, arity, evaluate, identity_id, limits, sampled_ok, exps)
        report.witnesses.extend(w)
        report.coverage[key or identity_id] = cov

    run("1.1", 3, lambda x, y, z: [(inner_map_definition(L, x, y, z), inner_apply_array(L, x, y, z))])

    def eq_1_2(x, y, z):
        a = assoc_array(L, x, y, z)
        return [
            (a, assoc_array(L, inv[y], x, z)),
            (a, inv[assoc_array(L, y, x, z)]),
            (a, assoc_array(L, y, z, x)),
        ]

    run("1.2", 3, eq_1_2)

    pows = {}

    def pw(k):
        if k not in pows:
            pows[k] = power_array(L, np.arange(n), k)
        return pows[k]

    for p, r, s in exponents:
        run(
            "1.3", 3,
            lambda x, y, z, p=p, r=r, s=s: [
                (assoc_array(L, pw(p)[x], pw(r)[y], pw(s)[z]), pw(p * r * s)[assoc_array(L, x, y, z)])
            ],
            exps=(p, r, s), key=f"1.3{(p, r, s)}",
        )

    run("1.4", 3, lambda x, y, z: [(pw(3)[assoc_array(L, x, y, z)], 0)])

    def eq_1_5(x, y, u, v):
        a_x = assoc_array(L, x, u, v)
        a_y = assoc_array(L, y, u, v)
        rhs = T[T[T[a_x, assoc_array(L, a_x, x, y)], a_y], assoc_array(L, a_y, y, x)]
        return [(assoc_array(L, T[x, y], u, v), rhs)]

    run("1.5", 4, eq_1_5, sampled_ok=True)
    return report


def check_inner_automorphism(L: LoopTable, limits: Limits | None = None) -> IdentityReport:
    """Check that every inner mapping L(x,y) respects products: φ(uv) = φ(u)φ(v)."""
    limits = limits or get_limits()
    T = L.table

    def evaluate(x, y, u, v):
        return [(inner_apply_array(L, x, y, T[u, v]),
                 T[inner_apply_array(L, x, y, u), inner_apply_array(L, x, y, v)])]

    report = IdentityReport()
    w, cov = scan_tuples(L.order, 4, evaluate, "lemma1.1", limits, sampled_ok=True)
    report.witnesses.extend(w)
    report.coverage["lemma1.1"] = cov
    return report
