"""Built-in loops, the JSON loop file format, and a non-Moufang negative control.

Construction strings::

    trivial | cyclic:M | elem3:K | cml81 | product:SPEC,SPEC,... | file:PATH

``cml81`` is the smallest non-associative CML: 4-tuples over Z/3 encoded as
``27*a1 + 9*a2 + 3*a3 + a4`` with

    (a1,a2,a3,a4)(b1,b2,b3,b4) = (a1+b1, a2+b2, a3+b3, a4+b4 + (a3-b3)(a1*b2-a2*b1))

The encoding is part of the public contract; regression masks depend on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .associators import associator
from .core import LoopInputError, LoopTable, TheoremViolation, identity_index, _latin_witness
from .subloops import direct_product

KINDS = ("trivial", "cyclic", "elem3", "cml81", "product", "file")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    param: int = 0
    parts: tuple = field(default_factory=tuple)
    path: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LoopInputError(f"unknown construction kind {self.kind!r}")
        if self.kind == "cyclic" and self.param < 1:
            raise LoopInputError("cyclic:M needs M >= 1")
        if self.kind == "elem3" and self.param < 0:
            raise LoopInputError("elem3:K needs K >= 0")
        if self.kind == "product" and not self.parts:
            raise LoopInputError("product needs at least one factor")

    @property
    def name(self) -> str:
        if self.kind == "cyclic":
            return f"C{self.param}"
        if self.kind == "elem3":
            return f"C3^{self.param}"
        if self.kind == "cml81":
            return "CML81"
        if self.kind == "product":
            return " x ".join(p.name for p in self.parts)
        if self.kind == "file":
            return Path(self.path).stem
        return "1"

    @classmethod
    def parse(cls, text: str) -> "ConstructionSpec":
        text = text.strip()
        kind, _, rest = text.partition(":")
        if kind == "product":
            return cls("product", parts=tuple(cls.parse(p) for p in rest.split(",")))
        if kind == "file":
            return cls("file", path=rest)
        if kind in ("cyclic", "elem3"):
            try:
                return cls(kind, int(rest))
            except ValueError:
                raise LoopInputError(f"bad integer in construction {text!r}") from None
        if kind in ("trivial", "cml81") and not rest:
            return cls(kind)
        raise LoopInputError(f"cannot parse construction {text!r}")


def cyclic(m: int) -> LoopTable:
    ar = np.arange(m)
    return LoopTable((ar[:, None] + ar[None, :]) % m, f"C{m}")


def trivial() -> LoopTable:
    return LoopTable([[0]], "1")


def elem3(k: int) -> LoopTable:
    L = trivial()
    for _ in range(k):
        L = direct_product(L, cyclic(3))
    return L.renamed(f"C3^{k}")


def cml81_coords(i):
    i = np.asarray(i)
    return i // 27 % 3, i // 9 % 3, i // 3 % 3, i % 3


def cml81() -> LoopTable:
    ar = np.arange(81)
    a1, a2, a3, a4 = (c[:, None] for c in cml81_coords(ar))
    b1, b2, b3, b4 = (c[None, :] for c in cml81_coords(ar))
    c4 = a4 + b4 + (a3 - b3) * (a1 * b2 - a2 * b1)
    table = 27 * ((a1 + b1) % 3) + 9 * ((a2 + b2) % 3) + 3 * ((a3 + b3) % 3) + c4 % 3
    return LoopTable(table, "CML81")


@lru_cache(maxsize=64)
def _build_cached(spec: ConstructionSpec) -> LoopTable:
    if spec.kind == "trivial":
        L = trivial()
    elif spec.kind == "cyclic":
        L = cyclic(spec.param)
    elif spec.kind == "elem3":
        L = elem3(spec.param)
    elif spec.kind == "cml81":
        L = cml81()
        if associator(L, 27, 9, 3) == 0:
            raise TheoremViolation("cml81 formula regression: the loop came out associative")
    elif spec.kind == "product":
        L = _build_cached(spec.parts[0])
        for part in spec.parts[1:]:
            L = direct_product(L, _build_cached(part))
        L = L.renamed(spec.name)
    else:
        return load(spec.path)
    rep = L.verification
    if not rep.ok:
        raise TheoremViolation(
            f"built-in construction {spec.name} fails {rep.failed_check} at {rep.first_failure}",
            rep.first_failure,
        )
    return L


def build(spec) -> LoopTable:
    """Build and verify a loop from a :class:`ConstructionSpec` or its string form."""
    if isinstance(spec, str):
        spec = ConstructionSpec.parse(spec)
    if spec.kind == "file":
        return load(spec.path)
    return _build_cached(spec)


def to_json(L: LoopTable) -> dict:
    return {"name": L.name, "order": L.order, "table": L.table.tolist()}


def save(L: LoopTable, path) -> None:
    Path(path).write_text(json.dumps(to_json(L)) + "\n")


def from_json(data, strict: bool = True) -> LoopTable:
    """Parse a loop document. ``strict`` also rejects non-Latin tables and a misplaced identity."""
    if not isinstance(data, dict) or "table" not in data:
        raise LoopInputError("loop file must be an object with a 'table' field")
    L = LoopTable(data["table"], str(data.get("name", "")))
    if "order" in data and data["order"] != L.order:
        raise LoopInputError(f"declared order {data['order']} does not match table size {L.order}")
    if strict:
        witness = _latin_witness(L.table)
        if witness is not None:
            raise LoopInputError(f"table is not a Latin square (repeated value at cells {witness})")
        e = identity_index(L.table)
        if e is None:
            raise LoopInputError("table has no identity element")
        if e != 0:
            raise LoopInputError(f"identity must be index 0 (found at index {e})")
        L.verification  # noqa: B018 - attaches the report to the instance
    return L


def load(path, strict: bool = True) -> LoopTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise LoopInputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoopInputError(f"{path} is not valid JSON: {exc}") from None
    return from_json(data, strict)


def _commutative_loop_squares(n: int):
    """Commutative Latin squares with identity 0, in lexicographic order."""
    table = np.full((n, n), -1, dtype=np.int64)
    table[0] = table[:, 0] = np.arange(n)
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]

    def fill(k):
        if k == len(cells):
            yield table.copy()
            return
        i, j = cells[k]
        used = set(table[i][table[i] >= 0]) | set(table[:, j][table[:, j] >= 0])
        for v in range(n):
            if v in used:
                continue
            table[i, j] = table[j, i] = v
            yield from fill(k + 1)
            table[i, j] = table[j, i] = -1

    yield from fill(0)


@lru_cache(maxsize=1)
def fixture_non_moufang() -> LoopTable:
    """First commutative loop failing the Moufang law, in lexicographic search order.

    All six commutative loops of order 5 are relabellings of Z/5, so the search
    starts at 5 and moves on to the next order; it succeeds at order 6.
    """
    for n in range(5, 8):
        for sq in _commutative_loop_squares(n):
            L = LoopTable(sq, f"non-moufang-{n}")
            if not L.verification.moufang:
                return L
    raise TheoremViolation("no commutative non-Moufang loop of order <= 7 found")


CATALOG = {
    "trivial": "trivial",
    "z3": "cyclic:3",
    "z5": "cyclic:5",
    "z9": "cyclic:9",
    "z15": "cyclic:15",
    "z3xz3": "elem3:2",
    "elem27": "elem3:3",
    "z3xz9": "product:cyclic:3,cyclic:9",
    "cml81": "cml81",
    "z3xcml81": "product:cyclic:3,cml81",
    "z5xcml81": "product:cyclic:5,cml81",
    "z9xcml81": "product:cyclic:9,cml81",
}


def catalog(max_order: int | None = None) -> dict:
    """Named catalog loops, optionally only those up to ``max_order``."""
    out = {}
    for key, text in CATALOG.items():
        L = build(text)
        if max_order is None or L.order <= max_order:
            out[key] = L
    return out
