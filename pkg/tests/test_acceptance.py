"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its runtime."""

import contextlib
import json
import math
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from cmloops.associators import associator, check_identities, check_inner_automorphism
from cmloops.constructions import build, catalog, fixture_non_moufang, save
from cmloops.core import exponent, power, power_array
from cmloops.series import (
    all_nonassoc_subloops_normal,
    bruck_slaby_check,
    corollary_4_5_check,
    is_minimal_of_class,
    lemma_3_1_check,
    series,
    solvability_class,
)
from cmloops.subloops import (
    SubloopMask,
    all_subloops,
    centre,
    generated_subloop,
    is_associative_subloop,
    is_normal,
    p_components,
    quotient,
)
from cmloops.symbolic import SymbolicCML, classify

from . import oracles

CML81_SUBLOOPS = 185


@pytest.fixture
def criterion(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    @contextlib.contextmanager
    def run(label, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None:
                assert elapsed < limit, f"{label} took {elapsed:.2f}s, limit {limit}s"
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            line = f"[acceptance] {'PASS' if ok else 'FAIL'} {label} ({elapsed:.2f}s)"
            if reporter is not None:
                reporter.write_line(line)
            else:
                print(line)

    return run


def test_ac01_cml81_construction(criterion):
    with criterion("AC1 cml81 verified over 531441 triples and associator(27,9,3)=1", limit=1.0):
        from cmloops.constructions import cml81
        L = cml81()
        rep = L.verification
        assert rep.ok and rep.latin_square and rep.commutative and rep.moufang
        assert associator(L, 27, 9, 3) == 1


def test_ac02_identity_suite(criterion):
    with criterion("AC2 associator identities on four CMLs and the non-Moufang control", limit=30.0):
        for spec in ("cml81", "cyclic:9", "elem3:2"):
            rep = check_identities(build(spec))
            assert rep.ok and not rep.partial, spec
        rep = check_identities(build("product:cyclic:5,cml81"))
        assert rep.ok
        for key, cov in rep.coverage.items():
            assert cov.exhaustive or (key == "1.5" and cov.checked >= 10**6), key
        bad = check_identities(fixture_non_moufang())
        assert len(bad.witnesses) >= 1


def test_ac03_inner_maps_are_automorphisms(criterion):
    with criterion("AC3 inner mappings of cml81 are automorphisms on all 81^4 quadruples", limit=60.0):
        rep = check_inner_automorphism(build("cml81"))
        cov = rep.coverage["lemma1.1"]
        assert rep.ok and cov.exhaustive and cov.checked == 81**4


def test_ac04_bruck_slaby(criterion):
    with criterion("AC4 every 3-generated subloop of cml81 has class <= 2", limit=300.0):
        res = bruck_slaby_check(build("cml81"), 3)
        assert res.holds
        assert res.detail["checked"] == math.comb(81, 3) == 85_320


def test_ac05_series_profile(criterion):
    with criterion("AC5 cml81 lower/derived/upper series [81,3,1]/[81,3,1]/[1,3,81], class 2"):
        L = build("cml81")
        lower, derived, upper = (series(L, k) for k in ("lower", "derived", "upper"))
        assert lower.sizes == derived.sizes == [81, 3, 1]
        assert upper.sizes == [1, 3, 81]
        assert lower.class_value == derived.class_value == upper.class_value == 2


def test_ac06_quotient_by_centre(criterion):
    with criterion("AC6 cml81/Z has order 27, exponent 3, associative; cubes central"):
        L = build("cml81")
        Q, _ = quotient(L, centre(L))
        assert Q.order == 27 and exponent(Q) == 3
        assert is_associative_subloop(Q, SubloopMask.full(27))
        for M in (L, build("product:cyclic:9,cml81")):
            Z = centre(M)
            assert all(power(M, x, 3) in Z for x in range(M.order))
            assert Z.as_bool()[power_array(M, np.arange(M.order), 3)].all()


def test_ac07_primary_components(criterion):
    with criterion("AC7 p_components(Z5 x cml81): central 5-part of order 5, 3-part of order 81"):
        L = build("product:cyclic:5,cml81")
        comps = p_components(L)
        assert sorted(comps) == [3, 5]
        assert comps[5].size == 5 and comps[5].issubset(centre(L))
        assert comps[3].size == 81
        assert math.prod(c.size for c in comps.values()) == 405


def test_ac08_normal_order_three_is_central(criterion):
    with criterion("AC8 order-3 elements of cml81 generating normal subloops are central"):
        L = build("cml81")
        assert lemma_3_1_check(L).holds
        Z = centre(L)
        for a in np.flatnonzero(L.element_orders == 3):
            if is_normal(L, generated_subloop(L, [int(a)])):
                assert int(a) in Z
        assert not is_normal(L, SubloopMask.from_elements(81, [0, 27, 54]))


def test_ac09_subloop_lattice(criterion):
    with criterion(f"AC9 proper subloops of cml81 associative; lattice size pinned at {CML81_SUBLOOPS}"):
        L = build("cml81")
        assert is_minimal_of_class(L, "nilpotent", 2).holds
        subs = all_subloops(L)
        assert len(subs) == CML81_SUBLOOPS
        assert all(is_associative_subloop(L, H) for H in subs if not H.is_full())


def test_ac10_single_quasicyclic_classifier(criterion):
    with criterion("AC10 D x K classifier: (1,cml81) true, (2,cml81) false, (1,Z3) false"):
        K = build("cml81")
        assert classify(SymbolicCML(1, K)).prop_2_17 is True
        assert classify(SymbolicCML(2, K)).prop_2_17 is False
        assert classify(SymbolicCML(1, build("cyclic:3"))).prop_2_17 is False


def test_ac11_normal_nonassociative_subloops_bound_solvability(criterion):
    with criterion("AC11 catalog loops with all non-associative subloops normal have solvability class <= 3"):
        seen = 0
        for name, L in catalog().items():
            if not all_nonassoc_subloops_normal(L, bound=L.order).holds:
                continue
            seen += 1
            res = corollary_4_5_check(L, bound=L.order)
            assert res.holds and not res.skipped, name
            assert solvability_class(L) <= 3, name
        assert seen >= 1
        assert solvability_class(build("cml81")) == 2


def test_ac12_oracle_equivalence(criterion):
    with criterion("AC12 lattice and closure agree with naive oracles"):
        groups = {k: L for k, L in catalog(max_order=81).items()
                  if is_associative_subloop(L, SubloopMask.full(L.order))}
        assert set(groups) >= {"z9", "z3xz3", "elem27"}
        for name, L in groups.items():
            got = {frozenset(H.to_list()) for H in all_subloops(L)}
            assert got == oracles.naive_subgroups(L.table.tolist()), name
        L, T = build("cml81"), oracles.cml81_table()
        rng = random.Random(2024)
        for _ in range(100):
            gens = rng.sample(range(81), rng.randint(1, 4))
            assert set(generated_subloop(L, gens).to_list()) == oracles.naive_closure(T, gens)


def test_ac13_cli_determinism(criterion, tmp_path):
    with criterion("AC13 every CLI command gives byte-identical JSON on repeat runs"):
        path = tmp_path / "cml81.json"
        save(build("cml81"), path)
        commands = [
            ["verify", str(path)],
            ["identities", str(path)],
            ["series", str(path), "--kind", "lower"],
            ["series", str(path), "--kind", "derived"],
            ["series", str(path), "--kind", "upper"],
            ["subloops", str(path)],
            ["decompose", str(path)],
            ["theorems", str(path)],
            ["make", "--construction", "cml81"],
            ["classify-symbolic", "--d", "1", "--k", str(path)],
        ]
        for argv in commands:
            outs = [subprocess.run([sys.executable, "-m", "cmloops", *argv],
                                   capture_output=True, check=False).stdout for _ in range(2)]
            assert outs[0] == outs[1], argv
            assert json.loads(outs[0])["status"] == "pass", argv
