"""Size limits shared by every module.

Exhaustive checks are cubic or quartic in the loop order, so every entry point
consults one of these caps before starting work.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_BOUND = "MOUFANG_BOUND"


@dataclass(frozen=True)
class Limits:
    # largest table accepted at all (3**7)
    max_order: int = 2187
    # largest order for which the full subloop lattice is enumerated
    enumeration_bound: int = 243
    # largest order for which n**4 scans run exhaustively
    exhaustive_order: int = 243
    # tuples visited by a stride-sampled scan above exhaustive_order
    sample_budget: int = 2_000_000
    # generator subsets visited by Bruck-Slaby before switching to sampling
    subset_budget: int = 250_000
    # largest order for which the n**3 associator tensor is cached
    tensor_order: int = 405
    # failures recorded per identity before the scan stops collecting
    max_witnesses: int = 10


_limits = Limits()


def get_limits() -> Limits:
    """Current limits, with ``MOUFANG_BOUND`` overriding the enumeration bound."""
    env = os.environ.get(ENV_BOUND)
    if env:
        return replace(_limits, enumeration_bound=int(env))
    return _limits


def set_limits(**changes) -> Limits:
    global _limits
    _limits = replace(_limits, **changes)
    return _limits


def enumeration_bound(bound: int | None = None) -> int:
    return get_limits().enumeration_bound if bound is None else bound
