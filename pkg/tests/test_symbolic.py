import pytest

from cmloops.constructions import build, fixture_non_moufang
from cmloops.core import PreconditionError
from cmloops.symbolic import UNAVAILABLE, SymbolicCML, classify, divisible_part


def test_one_quasicyclic_times_cml81(cml81):
    rep = classify(SymbolicCML(1, cml81))
    assert rep.prop_2_17 is True
    assert rep.cor_2_7 == 2 and rep.cor_2_7_nilpotent == 2
    assert (rep.solvability_class, rep.nilpotency_class) == (2, 2)
    assert rep.infinite and not rep.cor_2_11_steady


def test_two_quasicyclic_factors(cml81):
    rep = classify(SymbolicCML(2, cml81))
    assert rep.prop_2_17 is False
    assert rep.cor_2_7 is None
    assert rep.divisible_rank == 2


def test_associative_finite_factor():
    rep = classify(SymbolicCML(1, build("cyclic:3")))
    assert rep.prop_2_17 is False
    assert rep.cor_2_11_steady is False
    assert rep.cor_2_7 is None


def test_quasicyclic_alone():
    rep = classify(SymbolicCML(1, build("trivial")))
    assert rep.cor_2_7 == 1
    assert rep.solvability_class == rep.nilpotency_class == 1


def test_finite_case(cml81):
    rep = classify(SymbolicCML(0, cml81))
    assert not rep.infinite and rep.cor_2_11_steady
    assert rep.prop_2_17 is False and divisible_part(SymbolicCML(0, cml81)) == 0


def test_classes_follow_finite_factor(cml81, z9):
    for K in (cml81, z9, build("product:cyclic:3,cml81")):
        for d in (0, 1, 3):
            rep = classify(SymbolicCML(d, K))
            ref = classify(SymbolicCML(0, K))
            assert rep.nilpotency_class == ref.nilpotency_class
            assert rep.solvability_class == ref.solvability_class


def test_bound_exceeded_is_reported(cml81):
    rep = classify(SymbolicCML(1, cml81), bound=27)
    assert rep.prop_2_17 is None and UNAVAILABLE in rep.notes
    assert rep.to_dict()["prop_2_17"]["reason"] == UNAVAILABLE


def test_preconditions():
    with pytest.raises(PreconditionError):
        SymbolicCML(-1, build("cyclic:3"))
    with pytest.raises(PreconditionError):
        SymbolicCML(1, fixture_non_moufang())
