import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmloops.constructions import build, cml81 as make_cml81, cyclic
from cmloops.core import (
    LoopInputError,
    LoopTable,
    element_order,
    exponent,
    inv,
    mul,
    power,
    verify_cml,
)
from cmloops.subloops import generated_subloop, is_associative_subloop

from . import oracles

LOOPS = ["cml81", "cyclic:9", "elem3:2", "product:cyclic:3,cyclic:9", "product:cyclic:5,cml81"]


def test_mul_examples(cml81):
    assert mul(build("cyclic:3"), 1, 2) == 0
    assert all(mul(cml81, 0, b) == b for b in range(81))
    # (1,0,0,0)(0,1,0,0) = (1,1,0,0)
    assert mul(cml81, 27, 9) == 36 == oracles.encode(oracles.cml81_product((1, 0, 0, 0), (0, 1, 0, 0)))


def test_mul_rejects_bad_index(cml81):
    with pytest.raises(LoopInputError):
        mul(cml81, 81, 0)
    with pytest.raises(LoopInputError):
        inv(cml81, -1)


def test_inv_examples(cml81, z9):
    assert inv(cml81, 0) == 0
    assert inv(z9, 4) == 5
    # negate coordinates of (1,0,0,1)
    assert oracles.decode(28) == (1, 0, 0, 1)
    assert inv(cml81, 28) == 56 == oracles.encode((2, 0, 0, 2))
    assert mul(cml81, 28, 56) == 0


def test_pow_and_orders(cml81, z9):
    assert power(cml81, 17, 0) == 0
    assert power(z9, 2, 3) == 6
    assert all(power(cml81, a, 3) == 0 for a in range(81))
    assert element_order(cml81, 0) == 1
    assert element_order(z9, 3) == 3
    assert element_order(cml81, 27) == 3


def test_exponent():
    assert exponent(build("cyclic:3")) == 3
    assert exponent(build("product:cyclic:3,cyclic:9")) == 9
    assert exponent(build("cml81")) == 3


def test_table_matches_pure_python_formula(cml81):
    assert cml81.table.tolist() == oracles.cml81_table()


def test_verify_cml_accepts(cml81):
    rep = verify_cml(cml81)
    assert rep.ok and rep.first_failure is None
    assert verify_cml(cyclic(5)).ok


def test_verify_cml_swapped_entries(cml81):
    t = cml81.table.copy()
    t[1, 2], t[1, 3] = t[1, 3], t[1, 2]
    rep = verify_cml(LoopTable(t))
    assert not rep.latin_square
    assert rep.failed_check == "latin_square"
    r1, c1, r2, c2 = rep.first_failure
    assert t[r1, c1] == t[r2, c2] and (r1, c1) != (r2, c2)


def test_verify_reports_identity_and_commutativity():
    shifted = LoopTable([[1, 0], [0, 1]])
    rep = verify_cml(shifted)
    assert rep.latin_square and not rep.identity_ok and rep.first_failure is not None
    noncomm = LoopTable([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    rep = verify_cml(noncomm)
    assert rep.latin_square and rep.identity_ok and not rep.commutative


@pytest.mark.parametrize("bad", [[[0, 1], [1]], [[0, 1], [1, 2]], [[0, 1, 2], [1, 2, 0]], []])
def test_malformed_tables_are_input_errors(bad):
    with pytest.raises(LoopInputError):
        LoopTable(bad)


def test_non_moufang_fixture_flags(non_moufang):
    rep = verify_cml(non_moufang)
    assert rep.latin_square and rep.identity_ok and rep.commutative
    assert not rep.moufang


def test_equality_and_hash(cml81):
    again = make_cml81()
    assert again == cml81 and hash(again) == hash(cml81)
    assert cml81 != cml81.renamed("other")


loop_and_element = st.sampled_from(LOOPS).flatmap(
    lambda s: st.tuples(st.just(build(s)), st.integers(0, build(s).order - 1), st.integers(0, build(s).order - 1))
)


@settings(max_examples=200, deadline=None)
@given(loop_and_element)
def test_commutative_and_inverse(case):
    L, a, b = case
    assert mul(L, a, b) == mul(L, b, a)
    assert mul(L, a, inv(L, a)) == 0
    assert inv(L, inv(L, a)) == a


@settings(max_examples=200, deadline=None)
@given(loop_and_element, st.integers(-6, 6), st.integers(-6, 6))
def test_power_additive(case, k, m):
    L, a, _ = case
    assert power(L, a, k + m) == mul(L, power(L, a, k), power(L, a, m))


@settings(max_examples=100, deadline=None)
@given(loop_and_element)
def test_two_generated_subloops_are_associative(case):
    L, a, b = case
    assert is_associative_subloop(L, generated_subloop(L, [a, b]))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 9, 12])
def test_abelian_groups_verify(m):
    assert verify_cml(cyclic(m)).ok


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7), st.data())
def test_random_non_latin_rejected(n, data):
    table = np.array(data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
                                        min_size=n, max_size=n)))
    rep = verify_cml(LoopTable(table))
    rows_ok = all(sorted(r) == list(range(n)) for r in table.tolist())
    cols_ok = all(sorted(c) == list(range(n)) for c in table.T.tolist())
    assert rep.latin_square == (rows_ok and cols_ok)
    if not rep.latin_square:
        assert not rep.ok and rep.first_failure is not None
