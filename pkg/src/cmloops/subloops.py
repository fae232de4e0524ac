"""Subloops as bitsets: closure, lattice enumeration, normality, centre, quotients.

A :class:`SubloopMask` stores its elements as the bits of a Python int, which
gives cheap hashing for lattice deduplication; numpy boolean masks are used
for the actual arithmetic.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .associators import assoc_array, associator_tensor, inner_apply_array, inner_maps
from .config import Limits, enumeration_bound, get_limits
from .core import LoopInputError, LoopTable, PreconditionError, TheoremViolation, exponent


class BoundExceeded(LoopInputError):
    """The loop is larger than the configured enumeration bound."""


def _bool_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _int_to_bool(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


@dataclass(frozen=True, order=False)
class SubloopMask:
    parent_order: int
    bits: int

    @classmethod
    def from_elements(cls, n: int, elems) -> "SubloopMask":
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(list(elems), dtype=np.int64)] = True
        return cls(n, _bool_to_int(mask))

    @classmethod
    def from_bool(cls, mask: np.ndarray) -> "SubloopMask":
        return cls(mask.size, _bool_to_int(mask))

    @classmethod
    def full(cls, n: int) -> "SubloopMask":
        return cls(n, (1 << n) - 1)

    @classmethod
    def trivial(cls, n: int) -> "SubloopMask":
        return cls(n, 1)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self):
        return self.size

    def __contains__(self, a) -> bool:
        return bool(self.bits >> int(a) & 1)

    def as_bool(self) -> np.ndarray:
        return _int_to_bool(self.bits, self.parent_order)

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.as_bool())

    def to_list(self) -> list:
        return [int(a) for a in self.elements()]

    def issubset(self, other: "SubloopMask") -> bool:
        return self.bits & ~other.bits == 0

    @property
    def is_trivial(self) -> bool:
        return self.bits == 1

    def is_full(self) -> bool:
        return self.bits == (1 << self.parent_order) - 1

    def sort_key(self):
        return (self.size, self.bits)

    def __repr__(self):
        elems = self.to_list()
        shown = elems if len(elems) <= 12 else elems[:12] + ["..."]
        return f"SubloopMask(size={self.size}, {shown})"


@dataclass
class CosetPartition:
    subloop: SubloopMask
    representative_of: np.ndarray
    is_partition: bool = True
    witness: tuple | None = None

    @property
    def representatives(self) -> np.ndarray:
        return np.unique(self.representative_of)

    def classes(self) -> list:
        return [np.flatnonzero(self.representative_of == r) for r in self.representatives]


def close(L: LoopTable, base: np.ndarray, new) -> np.ndarray:
    """Smallest subloop containing the closed set ``base`` and the elements ``new``.

    Worklist closure: every freshly added element is multiplied against all
    current members on both sides, so each pair is formed exactly once.
    """
    T = L.table
    inside = base.copy()
    inside[0] = True
    members = np.flatnonzero(inside)
    new = np.unique(np.asarray(list(new) if not isinstance(new, np.ndarray) else new, dtype=np.int64))
    frontier = new[~inside[new]] if new.size else new
    inside[frontier] = True
    while frontier.size:
        members = np.concatenate([members, frontier])
        prods = np.concatenate([
            T[np.ix_(frontier, members)].ravel(),
            T[np.ix_(members, frontier)].ravel(),
            L.inverses[frontier],
        ])
        fresh = np.unique(prods[~inside[prods]])
        inside[fresh] = True
        frontier = fresh
    return inside


def generated_subloop(L: LoopTable, gens) -> SubloopMask:
    base = np.zeros(L.order, dtype=bool)
    base[0] = True
    return SubloopMask.from_bool(close(L, base, list(gens)))


def _check_bound(L: LoopTable, bound: int | None):
    b = enumeration_bound(bound)
    if L.order > b:
        raise BoundExceeded(f"order {L.order} exceeds the enumeration bound {b}")


def all_subloops(L: LoopTable, bound: int | None = None) -> list:
    """Every subloop of L, sorted by (size, bits).

    Breadth-first from {1}: each known subloop H is extended by one outside
    element g and closed. Since <H, g> = <H, h g^k> for h in H and k prime to
    the order of g, one closure per such class of g suffices.
    """
    _check_bound(L, bound)
    n = L.order
    T = L.table
    orders = L.element_orders
    start = np.zeros(n, dtype=bool)
    start[0] = True
    seen = {1: start}
    queue = deque([start])
    while queue:
        H = queue.popleft()
        h_elems = np.flatnonzero(H)
        done = H.copy()
        for g in range(n):
            if done[g]:
                continue
            K = close(L, H, [g])
            bits = _bool_to_int(K)
            if bits not in seen:
                seen[bits] = K
                queue.append(K)
            p, k = g, 1
            o = int(orders[g]) or n
            while k <= o:
                if math.gcd(k, o) == 1:
                    done[T[h_elems, p]] = True
                p = T[p, g]
                k += 1
    return sorted((SubloopMask(n, b) for b in seen), key=SubloopMask.sort_key)


def _assoc_block(L: LoopTable, X, Y, Z) -> np.ndarray:
    """Associators over X x Y x Z as an array of shape (|X|, |Y|, |Z|)."""
    X, Y, Z = (np.asarray(v, dtype=np.int64) for v in (X, Y, Z))
    A = associator_tensor(L)
    if A is not None:
        return A[np.ix_(X, Y, Z)]
    out = np.empty((X.size, Y.size, Z.size), dtype=np.int64)
    for i, x in enumerate(X):
        out[i] = assoc_array(L, x, Y[:, None], Z[None, :])
    return out


def associator_values(L: LoopTable, X, Y, Z) -> np.ndarray:
    """Sorted distinct values of (x, y, z) over X x Y x Z."""
    X, Y, Z = (np.asarray(v, dtype=np.int64).ravel() for v in (X, Y, Z))
    seen = np.zeros(L.order, dtype=bool)
    step = max(1, (1 << 24) // max(1, Y.size * Z.size))
    for i in range(0, X.size, step):
        block = assoc_array(L, X[i:i + step, None, None], Y[None, :, None], Z[None, None, :])
        seen[block.ravel()] = True
    return np.flatnonzero(seen)


def is_associative_subloop(L: LoopTable, H: SubloopMask) -> bool:
    S = H.elements()
    A = associator_tensor(L)
    if A is not None and S.size**3 <= 1 << 24:
        return not A[np.ix_(S, S, S)].any()
    # slice by slice, so large subloops without a cached tensor stay in memory
    Y, Z = S[:, None], S[None, :]
    return not any(assoc_array(L, x, Y, Z).any() for x in S)


def is_normal(L: LoopTable, H: SubloopMask) -> bool:
    """True iff every inner mapping L(x, y) sends H into H."""
    mask = H.as_bool()
    return bool(mask[inner_maps(L)[:, H.elements()]].all())


def centre(L: LoopTable) -> SubloopMask:
    n = L.order
    ar = np.arange(n)
    central = np.array([not _assoc_block(L, [x], ar, ar).any() for x in range(n)])
    return SubloopMask.from_bool(central)


def centralizer(L: LoopTable, H: SubloopMask, M: SubloopMask) -> SubloopMask:
    """Elements x of H with (x, u, v) = 1 for all u, v in M."""
    Hs, Ms = H.elements(), M.elements()
    block = _assoc_block(L, Hs, Ms, Ms)
    keep = ~block.reshape(Hs.size, -1).any(axis=1)
    Z = SubloopMask.from_elements(L.order, Hs[keep])
    if generated_subloop(L, Z.elements()) != Z:
        raise TheoremViolation("centralizer is not closed under multiplication", Z.to_list())
    return Z


def cosets(L: LoopTable, H: SubloopMask) -> CosetPartition:
    """Left cosets xH with minimal-index representatives.

    For a subloop that is not normal the sets xH need not partition the loop;
    that case is returned with ``is_partition=False`` and a witness pair
    (x, y) with y in xH but yH != xH.
    """
    T = L.table
    S = H.elements()
    C = np.sort(T[:, S], axis=1)
    reps = C[:, 0].copy()
    same = (C[C] == C[:, None, :]).all(axis=2)
    if same.all():
        return CosetPartition(H, reps)
    x, j = (int(v) for v in np.argwhere(~same)[0])
    return CosetPartition(H, reps, False, (x, int(C[x, j])))


def quotient(L: LoopTable, N: SubloopMask):
    """Quotient loop L/N and the projection, coset of 0 first, cosets ordered by representative."""
    if not is_normal(L, N):
        raise PreconditionError("quotient needs a normal subloop")
    part = cosets(L, N)
    if not part.is_partition:
        raise TheoremViolation("cosets of a normal subloop fail to partition the loop", part.witness)
    reps = part.representatives
    position = np.zeros(L.order, dtype=np.int64)
    position[reps] = np.arange(reps.size)
    proj = position[part.representative_of]
    table = proj[L.table[np.ix_(reps, reps)]]
    if not np.array_equal(proj[L.table], table[proj[:, None], proj[None, :]]):
        raise TheoremViolation("coset multiplication is not well defined")
    Q = LoopTable(table, f"{L.name}/N{N.size}" if L.name else "")
    if L.is_cml and not Q.is_cml:
        rep = Q.verification
        raise TheoremViolation(f"quotient fails {rep.failed_check}", rep.first_failure)
    return Q, proj


def direct_product(A: LoopTable, B: LoopTable) -> LoopTable:
    """Componentwise product; (a, b) is encoded as ``a * |B| + b``."""
    n = A.order * B.order
    limit = get_limits().max_order
    if n > limit:
        raise LoopInputError(f"product order {n} exceeds the maximum supported order {limit}")
    nb = B.order
    table = A.table[:, None, :, None] * nb + B.table[None, :, None, :]
    name = f"{A.name} x {B.name}" if A.name and B.name else ""
    return LoopTable(table.reshape(n, n), name)


def subloop_table(L: LoopTable, H: SubloopMask):
    """H as a loop in its own right, with elements relabelled by rank in H."""
    S = H.elements()
    position = np.full(L.order, -1, dtype=np.int64)
    position[S] = np.arange(S.size)
    return LoopTable(position[L.table[np.ix_(S, S)]], L.name and f"{L.name}|{H.size}"), S


def _prime_factors(m: int) -> list:
    primes, p = [], 2
    while p * p <= m:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        primes.append(m)
    return primes


def p_components(L: LoopTable) -> dict:
    """Split a finite CML into its maximal p-subloops.

    Raises :class:`TheoremViolation` if a component is not a normal subloop,
    two components meet non-trivially, the component sizes do not multiply to
    |L|, or a component for p != 3 leaves the centre.
    """
    orders = L.element_orders
    n = L.order
    comps = {}
    for p in _prime_factors(exponent(L)):
        ppower = np.zeros(n, dtype=bool)
        for i, o in enumerate(orders):
            o = int(o)
            while o % p == 0:
                o //= p
            ppower[i] = o == 1
        mask = SubloopMask.from_bool(ppower)
        if generated_subloop(L, mask.elements()) != mask:
            raise TheoremViolation(f"{p}-elements do not form a subloop", mask.to_list())
        if not is_normal(L, mask):
            raise TheoremViolation(f"{p}-component is not normal", mask.to_list())
        comps[p] = mask
    ps = sorted(comps)
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            if comps[p].bits & comps[q].bits != 1:
                raise TheoremViolation(f"{p}- and {q}-components intersect", (p, q))
    if math.prod(c.size for c in comps.values()) != n:
        raise TheoremViolation("component sizes do not multiply to the loop order")
    union = [a for c in comps.values() for a in c.elements()]
    if not generated_subloop(L, union).is_full():
        raise TheoremViolation("components do not generate the loop")
    Z = centre(L)
    for p, c in comps.items():
        if p != 3 and not c.issubset(Z):
            raise TheoremViolation(f"{p}-component is not central", c.to_list())
    return comps


def is_normal_in(L: LoopTable, H: SubloopMask, M: SubloopMask) -> bool:
    """Normality of M inside the subloop H, under the inner mappings of H."""
    Hs, Ms = H.elements(), M.elements()
    mask = M.as_bool()
    for a in Hs:
        images = inner_apply_array(L, a, Hs[:, None], Ms[None, :])
        if not mask[images].all():
            return False
    return True


def lemma_1_6_check(L: LoopTable, H: SubloopMask, M: SubloopMask, limits: Limits | None = None) -> list:
    """Compare two tests for a, b in H lying in one coset of C = Z_H(M).

    For M normal in H, aC = bC should hold exactly when L(a, b)(a, u, v) = (b, u, v)
    for all u, v in M. Returns up to ``max_witnesses`` pairs where the two
    tests disagree.
    """
    limits = limits or get_limits()
    if not M.issubset(H) or not is_normal_in(L, H, M):
        raise PreconditionError("M must be a normal subloop of H")
    T = L.table
    C = centralizer(L, H, M)
    Hs, Ms, Cs = H.elements(), M.elements(), C.elements()
    coset_of = np.sort(T[np.ix_(Hs, Cs)], axis=1)
    # (b, u, v) for every b in H, flattened over (u, v)
    assoc_b = _assoc_block(L, Hs, Ms, Ms).reshape(Hs.size, -1)
    witnesses = []
    for i, a in enumerate(Hs):
        w = assoc_b[i]
        moved = T[w[None, :], assoc_array(L, w[None, :], Hs[:, None], a)]
        inner_ok = (moved == assoc_b).all(axis=1)
        same_coset = (coset_of == coset_of[i]).all(axis=1)
        for j in np.flatnonzero(inner_ok != same_coset):
            witnesses.append({
                "a": int(a), "b": int(Hs[j]),
                "same_coset": bool(same_coset[j]), "inner_condition": bool(inner_ok[j]),
            })
            if len(witnesses) >= limits.max_witnesses:
                return witnesses
    return witnesses
