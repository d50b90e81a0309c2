from fractions import Fraction as F

import pytest

from dsmult.errors import OrderInconsistent, SchemaError, ValidationError
from dsmult.lattice import (
    BUNDLED_DATASETS,
    EllipticClassData,
    derive_class,
    effective_period,
    load_bundled,
    load_lattice,
)
from dsmult.roots import sl2_root_system, su21_root_system


def sl2_dataset(*classes):
    return {
        "root_system": "sl2",
        "classes": [
            {"label": label, "t": [t], "order": n, "vol": vol} for label, t, n, vol in classes
        ],
    }


def test_torsion_free_has_period_one(sl2_free):
    assert sl2_free.n_gamma == 1
    assert len(sl2_free.classes) == 1


def test_237_period(sl2_237):
    assert sl2_237.n_gamma == 84
    assert sorted({c.order for c in sl2_237.classes}) == [1, 2, 3, 4, 6, 7, 14]


def test_orders_4_6_14_give_84():
    ld = load_lattice(sl2_dataset(("e", "0", 1, "1"), ("a", "1/8", 4, "1"), ("b", "1/12", 6, "1"), ("c", "1/28", 14, "1")))
    assert ld.n_gamma == 84
    assert not ld.warnings


def test_order_inconsistent():
    with pytest.raises(OrderInconsistent):
        load_lattice(sl2_dataset(("a", "1/8", 2, "1")))


def test_loose_order_is_a_warning():
    ld = load_lattice(sl2_dataset(("a", "1/4", 4, "1")))
    assert ld.n_gamma == 4 and len(ld.warnings) == 1


@pytest.mark.parametrize(
    "bad",
    [
        {"classes": []},
        {"root_system": "sl2", "classes": []},
        sl2_dataset(("a", "0", 1, "0")),
        sl2_dataset(("a", "0", 1, "1"), ("a", "1/4", 2, "1")),
        {"root_system": "sl2", "classes": [{"label": "a", "t": ["0", "0"], "order": 1, "vol": "1"}]},
        {"root_system": "sl2", "classes": [{"label": "a", "order": 1, "vol": "1"}]},
        {"root_system": 5, "classes": [{"label": "a", "t": ["0"], "order": 1, "vol": "1"}]},
    ],
)
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        load_lattice(bad)


def test_dataset_file_with_relative_root_system(tmp_path):
    import json

    (tmp_path / "rs.json").write_text(json.dumps(su21_root_system().to_json()))
    data = {"root_system": "rs.json", "classes": [{"label": "e", "t": ["0", "0"], "order": 1, "vol": "2"}]}
    (tmp_path / "d.json").write_text(json.dumps(data))
    ld = load_lattice(tmp_path / "d.json")
    assert ld.root_system.rank == 2 and ld.classes[0].vol == 2


def test_derive_identity():
    rs = su21_root_system()
    d = derive_class(rs, EllipticClassData("e", (F(0), F(0)), 1, F(1)))
    assert d.phi_y == frozenset(range(6))
    assert d.delta_y == rs.delta
    assert d.d_y == rs.dim_p
    assert len(d.w_y) == 2


def test_derive_order_four_rotation():
    rs = sl2_root_system()
    d = derive_class(rs, EllipticClassData("r", (F(1, 8),), 4, F(1)))
    assert d.phi_y == frozenset()
    assert len(d.w_y) == 1 and d.d_y == 0 and d.sign == -1


def test_derive_compact_pair_only(su21_data):
    rs = su21_data.root_system
    (c,) = [c for c in su21_data.classes if c.label == "order2"]
    d = derive_class(rs, c)
    assert d.phi_y == frozenset({0, 3})
    assert len(d.w_y) == 2 and d.d_y == 0


def test_full_subsystem_mode_uses_all_roots():
    rs = sl2_root_system()
    d = derive_class(rs, EllipticClassData("e", (F(0),), 1, F(1)), "full-subsystem")
    assert len(d.w_y) == 2


def test_parity_invariants_on_bundled():
    for name in BUNDLED_DATASETS:
        ld = load_bundled(name)
        rs = ld.root_system
        assert rs.dim_p % 2 == 0
        for c in ld.classes:
            d = derive_class(rs, c)
            assert d.d_y % 2 == 0
            assert all(rs.pair(d.delta_y, rs.roots[i]) > 0 for i in d.phi_y_pos)
            assert all((ld.n_gamma * rs.pair(a, c.t)).denominator == 1 for a in rs.roots)


def test_derive_is_independent_of_root_order():
    rs = su21_root_system()
    spec = rs.to_json()
    order = [4, 2, 0, 5, 3, 1]
    from dsmult.roots import load_root_system

    shuffled = load_root_system(
        {
            **spec,
            "roots": [spec["roots"][i] for i in order],
            "compact": [spec["compact"][i] for i in order],
            "positive": [order.index(i) for i in spec["positive"]],
        }
    )
    c = EllipticClassData("x", (F(1, 2), F(0)), 2, F(1))
    a, b = derive_class(rs, c), derive_class(shuffled, c)
    assert {rs.roots[i] for i in a.phi_y} == {shuffled.roots[i] for i in b.phi_y}
    assert a.delta_y == b.delta_y and a.sign == b.sign and len(a.w_y) == len(b.w_y)


def test_unknown_wy_mode_rejected():
    with pytest.raises(ValidationError):
        derive_class(sl2_root_system(), EllipticClassData("e", (F(0),), 1, F(1)), "bogus")


def test_effective_period_examples(sl2_free):
    assert effective_period(sl2_free, (F(-1),)) == 1
    one = load_lattice(sl2_dataset(("y", "1/12", 6, "1")))
    assert effective_period(one, (F(-1),)) == 6
    two = load_lattice(sl2_dataset(("a", "1/8", 4, "1"), ("b", "1/12", 6, "1")))
    assert effective_period(two, (F(-1),)) == 12


def test_json_round_trip(sl2_237):
    again = load_lattice(sl2_237.to_json())
    assert again.classes == sl2_237.classes
