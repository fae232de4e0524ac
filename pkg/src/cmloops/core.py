"""Finite loops as Cayley tables.

Elements are plain integers ``0..n-1`` and the identity is always index 0.
A :class:`LoopTable` only checks that its table is a well-formed square array
of indices; the loop and Moufang axioms are checked by :func:`verify_cml`, so
that broken tables can still be built and diagnosed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .config import get_limits


class LoopInputError(ValueError):
    """Malformed input: bad shape, out-of-range entries, wrong identity."""


class PreconditionError(ValueError):
    """An operation was called on arguments outside its contract."""


class TheoremViolation(RuntimeError):
    """A computed structure contradicts a statement known to hold in every CML."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class LoopTable:
    """A finite magma given by its multiplication table, ``table[i, j] = i*j``."""

    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        try:
            arr = np.array(self.table, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise LoopInputError(f"table is not an integer array: {exc}") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise LoopInputError(f"table must be a non-empty square array, got shape {arr.shape}")
        n = arr.shape[0]
        limit = get_limits().max_order
        if n > limit:
            raise LoopInputError(f"order {n} exceeds the maximum supported order {limit}")
        if arr.min() < 0 or arr.max() >= n:
            bad = tuple(int(v) for v in np.argwhere((arr < 0) | (arr >= n))[0])
            raise LoopInputError(f"entry at {bad} is outside 0..{n - 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def __eq__(self, other):
        if not isinstance(other, LoopTable):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.name, self.table.tobytes()))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<LoopTable{label} order={self.order}>"

    def renamed(self, name: str) -> "LoopTable":
        return LoopTable(self.table, name)

    # Derived tables, computed once per instance.

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    @cached_property
    def inverses(self) -> np.ndarray:
        """``inverses[a]`` is the b with ``a*b = 0`` (first one if the row repeats)."""
        hits = self.table == 0
        if not hits.any(axis=1).all():
            a = int(np.flatnonzero(~hits.any(axis=1))[0])
            raise LoopInputError(f"element {a} has no right inverse")
        return hits.argmax(axis=1)

    @cached_property
    def left_division(self) -> np.ndarray:
        """``left_division[a, b]`` solves ``a*x = b``; meaningful for Latin squares."""
        n = self.order
        out = np.zeros((n, n), dtype=np.int64)
        rows = np.repeat(np.arange(n), n)
        out[rows, self.table.ravel()] = np.tile(np.arange(n), n)
        return out

    @cached_property
    def squares(self) -> np.ndarray:
        return self.table[self.elements, self.elements]

    @cached_property
    def verification(self) -> "VerificationReport":
        return verify_cml(self)

    @property
    def is_cml(self) -> bool:
        return self.verification.ok

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of every element, by left-to-right powers. 0 marks 'no return to 1'."""
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = self.elements.copy()
        for k in range(1, n + 1):
            newly = (cur == 0) & (orders == 0)
            orders[newly] = k
            if orders.all():
                break
            cur = self.table[cur, self.elements]
        return orders


def _index(L: LoopTable, a) -> int:
    a = int(a)
    if not 0 <= a < L.order:
        raise LoopInputError(f"element {a} out of range for a loop of order {L.order}")
    return a


def mul(L: LoopTable, a: int, b: int) -> int:
    return int(L.table[_index(L, a), _index(L, b)])


def inv(L: LoopTable, a: int) -> int:
    return int(L.inverses[_index(L, a)])


def power_array(L: LoopTable, elems, k: int) -> np.ndarray:
    """Vectorized ``x**k`` as ``((x*x)*x)...``; negative k multiplies inverses."""
    elems = np.asarray(elems, dtype=np.int64)
    base = L.inverses[elems] if k < 0 else elems
    out = np.zeros_like(elems)
    for _ in range(abs(k)):
        out = L.table[out, base]
    return out


def power(L: LoopTable, a: int, k: int) -> int:
    """``a**k`` in a verified CML, where diassociativity makes it bracket-free."""
    a = _index(L, a)
    assert L.is_cml, "power() needs a verified CML; bracketing is ambiguous otherwise"
    order = int(L.element_orders[a])
    return int(power_array(L, [a], k % order)[0])


def element_order(L: LoopTable, a: int) -> int:
    order = int(L.element_orders[_index(L, a)])
    if order == 0:
        raise PreconditionError(f"powers of {a} never reach the identity")
    return order


def exponent(L: LoopTable) -> int:
    return reduce(math.lcm, (int(k) for k in L.element_orders), 1)


@dataclass(frozen=True)
class VerificationReport:
    latin_square: bool
    identity_ok: bool
    commutative: bool
    moufang: bool
    first_failure: tuple | None = None
    failed_check: str | None = None

    @property
    def ok(self) -> bool:
        return self.latin_square and self.identity_ok and self.commutative and self.moufang

    def to_dict(self) -> dict:
        return {
            "latin_square": self.latin_square,
            "identity_ok": self.identity_ok,
            "commutative": self.commutative,
            "moufang": self.moufang,
            "failed_check": self.failed_check,
            "first_failure": None if self.first_failure is None else list(self.first_failure),
        }


def _latin_witness(T: np.ndarray):
    n = T.shape[0]
    target = np.arange(n)
    for axis_name, M in (("row", T), ("column", T.T)):
        bad = np.flatnonzero((np.sort(M, axis=1) != target).any(axis=1))
        if bad.size:
            i = int(bad[0])
            line = M[i]
            _, first, counts = np.unique(line, return_index=True, return_counts=True)
            value = line[first[counts > 1][0]]
            j, k = (int(v) for v in np.flatnonzero(line == value)[:2])
            if axis_name == "row":
                return (i, j, i, k)
            return (j, i, k, i)
    return None


def verify_cml(L: LoopTable) -> VerificationReport:
    """Check the Latin-square, identity, commutative and Moufang laws exhaustively.

    The Moufang law is tested in its commutative form ``x^2 (yz) = (xy)(xz)``
    over all n^3 triples. A Latin-square witness ``(r1, c1, r2, c2)`` names two
    cells of one row or column holding the same value.
    """
    T = L.table
    n = L.order
    ar = np.arange(n)

    latin_witness = _latin_witness(T)

    identity_witness = None
    if not np.array_equal(T[0], ar):
        identity_witness = (0, int(np.flatnonzero(T[0] != ar)[0]))
    elif not np.array_equal(T[:, 0], ar):
        identity_witness = (int(np.flatnonzero(T[:, 0] != ar)[0]), 0)

    comm_witness = None
    asym = np.argwhere(T != T.T)
    if asym.size:
        comm_witness = tuple(int(v) for v in asym[0])

    moufang_witness = None
    sq = L.squares
    for x in range(n):
        lhs = T[sq[x], T]
        rhs = T[T[x][:, None], T[x][None, :]]
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            moufang_witness = (x, int(diff[0, 0]), int(diff[0, 1]))
            break

    failures = [
        ("latin_square", latin_witness),
        ("identity", identity_witness),
        ("commutative", comm_witness),
        ("moufang", moufang_witness),
    ]
    failed = next(((k, w) for k, w in failures if w is not None), (None, None))
    return VerificationReport(
        latin_square=latin_witness is None,
        identity_ok=identity_witness is None,
        commutative=comm_witness is None,
        moufang=moufang_witness is None,
        first_failure=failed[1],
        failed_check=failed[0],
    )


def identity_index(T) -> int | None:
    """Index of a two-sided identity in a raw table, or None."""
    T = np.asarray(T)
    ar = np.arange(T.shape[0])
    rows = np.flatnonzero((T == ar[None, :]).all(axis=1))
    for e in rows:
        if np.array_equal(T[:, e], ar):
            return int(e)
    return None


def require_cml(L: LoopTable) -> None:
    rep = L.verification
    if not rep.ok:
        raise PreconditionError(
            f"{L!r} is not a commutative Moufang loop: {rep.failed_check} fails at {rep.first_failure}"
        )
