"""Every finite-instance property check, run together with per-check status."""

from __future__ import annotations

from .associators import check_identities, check_inner_automorphism
from .config import Limits, get_limits
from .core import LoopTable, TheoremViolation
from .series import (
    bruck_slaby_check,
    corollary_4_5_check,
    derived_generators_agree,
    derived_series,
    hamiltonian_implies_associative,
    lemma_1_7_check,
    lemma_3_1_check,
    lower_central_series,
    upper_central_series,
)
from .subloops import BoundExceeded, SubloopMask, centre, lemma_1_6_check, p_components

PASS, VIOLATION = "pass", "violation"
SKIP_BOUND, SKIP_NOT_CML = "skipped(bound)", "skipped(not_cml)"

# largest |H|^2 |M|^2 the coset criterion is evaluated on
COSET_CRITERION_BUDGET = 10**8


def _identity_entry(report) -> dict:
    return {"status": PASS if report.ok else VIOLATION, **report.to_dict()}


def _predicate_entry(result) -> dict:
    d = result.to_dict()
    d["status"] = "skipped(precondition)" if result.skipped else (PASS if result.holds else VIOLATION)
    return d


def _guarded(fn):
    try:
        return fn()
    except BoundExceeded as exc:
        return {"status": SKIP_BOUND, "reason": str(exc)}
    except TheoremViolation as exc:
        return {"status": VIOLATION, "reason": str(exc), "witness": exc.witness}


def run_theorems(L: LoopTable, bound: int | None = None, limits: Limits | None = None) -> dict:
    """Run the property suite; returns ``{check_name: entry}`` with a ``status`` in each entry."""
    limits = limits or get_limits()
    out = {}
    rep = L.verification
    out["verify_cml"] = {"status": PASS if rep.ok else VIOLATION, **rep.to_dict()}
    latin = rep.latin_square and rep.identity_ok
    if latin:
        out["identities"] = _identity_entry(check_identities(L, limits=limits))
        out["lemma_1_1"] = _identity_entry(check_inner_automorphism(L, limits=limits))
    else:
        out["identities"] = out["lemma_1_1"] = {"status": SKIP_NOT_CML}

    cml_checks = ["lemma_1_4", "lemma_1_5", "lemma_1_6", "lemma_1_7", "lemma_3_1", "corollary_4_5",
                  "hamiltonian_associative", "derived_generators", "class_agreement"]
    if not rep.ok:
        out.update({name: {"status": SKIP_NOT_CML} for name in cml_checks})
        return out

    def lemma_1_4():
        comps = p_components(L)
        return {"status": PASS, "components": {str(p): c.to_list() for p, c in comps.items()}}

    out["lemma_1_4"] = _guarded(lemma_1_4)
    out["lemma_1_5"] = _predicate_entry(bruck_slaby_check(L, 3, limits))

    def lemma_1_6():
        Q = SubloopMask.full(L.order)
        candidates = {"associator_subloop": derived_series(L).chain[1] if L.order > 1 else Q,
                      "centre": centre(L), "whole": Q}
        runs, skipped, witnesses = {}, [], []
        for label, M in candidates.items():
            if L.order**2 * M.size**2 > COSET_CRITERION_BUDGET:
                skipped.append(label)
                continue
            w = lemma_1_6_check(L, Q, M, limits)
            runs[label] = len(w)
            witnesses.extend(w)
        return {"status": VIOLATION if witnesses else PASS, "checked": runs,
                "skipped": skipped, "witnesses": witnesses}

    out["lemma_1_6"] = _guarded(lemma_1_6)
    out["lemma_1_7"] = _predicate_entry(lemma_1_7_check(L))
    out["lemma_3_1"] = _predicate_entry(lemma_3_1_check(L))
    out["corollary_4_5"] = _guarded(lambda: _predicate_entry(corollary_4_5_check(L, bound)))
    out["hamiltonian_associative"] = _guarded(lambda: _predicate_entry(hamiltonian_implies_associative(L, bound)))
    out["derived_generators"] = _predicate_entry(derived_generators_agree(L))

    classes = {
        "lower_central": lower_central_series(L).class_value,
        "upper_central": upper_central_series(L).class_value,
        "derived": derived_series(L).class_value,
    }
    agree = classes["lower_central"] == classes["upper_central"] and (
        classes["derived"] is not None and classes["derived"] <= classes["lower_central"]
    )
    out["class_agreement"] = {"status": PASS if agree else VIOLATION, "classes": classes}
    return out


def overall_status(results: dict) -> str:
    return VIOLATION if any(v["status"] == VIOLATION for v in results.values()) else PASS
