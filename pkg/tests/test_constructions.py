import json

import numpy as np
import pytest

from cmloops.constructions import (
    CATALOG,
    ConstructionSpec,
    build,
    catalog,
    cml81_coords,
    fixture_non_moufang,
    from_json,
    load,
    save,
    to_json,
)
from cmloops.core import LoopInputError, exponent

from . import oracles


@pytest.mark.parametrize("text,order", [
    ("trivial", 1), ("cyclic:7", 7), ("elem3:3", 27), ("cml81", 81),
    ("product:cyclic:3,cyclic:5", 15), ("product:cyclic:2,cyclic:3,cyclic:5", 30),
])
def test_build_orders(text, order):
    L = build(text)
    assert L.order == order and L.is_cml


@pytest.mark.parametrize("bad", ["cyclic:0", "cyclic:x", "elem3:-1", "torus:3", "cml81:2", "product:"])
def test_bad_specs(bad):
    with pytest.raises(LoopInputError):
        ConstructionSpec.parse(bad)


def test_names():
    assert ConstructionSpec.parse("product:cyclic:3,cml81").name == "C3 x CML81"
    assert build("elem3:2").name == "C3^2"


def test_cml81_matches_formula(cml81):
    assert cml81.table.tolist() == oracles.cml81_table()
    coords = np.stack(cml81_coords(np.arange(81)), axis=1)
    assert coords[28].tolist() == [1, 0, 0, 1]
    assert exponent(cml81) == 3


def test_builds_are_deterministic():
    for text in CATALOG.values():
        a = build(text)
        b = build(ConstructionSpec.parse(text))
        assert np.array_equal(a.table, b.table)


def test_catalog_all_cml():
    cat = catalog()
    assert set(cat) == set(CATALOG)
    assert all(L.is_cml for L in cat.values())
    assert set(catalog(max_order=27)) == {"trivial", "z3", "z5", "z9", "z15", "z3xz3", "elem27", "z3xz9"}


def test_save_load_roundtrip(tmp_path, cml81):
    path = tmp_path / "q.json"
    save(cml81, path)
    again = load(path)
    assert again == cml81
    assert build(f"file:{path}") == cml81
    assert json.loads(path.read_text())["order"] == 81


def test_identity_not_at_zero():
    # Z3 relabelled so that 1 is the identity
    doc = {"table": [[2, 0, 1], [0, 1, 2], [1, 2, 0]]}
    with pytest.raises(LoopInputError, match="identity must be index 0 \\(found at index 1\\)"):
        from_json(doc)


def test_rejects_malformed(tmp_path):
    with pytest.raises(LoopInputError):
        from_json({"rows": []})
    with pytest.raises(LoopInputError):
        from_json({"table": [[0, 1], [1, 1]]})
    with pytest.raises(LoopInputError):
        from_json({"table": [[0, 1], [1, 0]], "order": 3})
    with pytest.raises(LoopInputError):
        from_json({"table": [[0, 1, 2], [1, 2, 0]]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(LoopInputError, match="not valid JSON"):
        load(bad)
    with pytest.raises(LoopInputError, match="cannot read"):
        load(tmp_path / "missing.json")


def test_lenient_load_keeps_broken_table():
    L = from_json({"table": [[0, 1], [1, 1]]}, strict=False)
    assert not L.verification.latin_square


def test_fixture_non_moufang(non_moufang):
    assert non_moufang.order == 6
    rep = non_moufang.verification
    assert rep.latin_square and rep.identity_ok and rep.commutative and not rep.moufang
    assert fixture_non_moufang() is non_moufang
    assert to_json(non_moufang)["table"][2] == [2, 3, 4, 5, 0, 1]
