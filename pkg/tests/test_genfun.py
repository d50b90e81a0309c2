from fractions import Fraction as F

import pytest

from dsmult.errors import Mismatch, NotInDstar
from dsmult.exact import series_coefficients
from dsmult.genfun import crosscheck, genfun_closed, genfun_series, leading_coefficients, string_period
from dsmult.hpformula import HPEvaluator
from dsmult.lattice import WY_MODES, load_lattice
from dsmult.params import make_string
from dsmult.roots import sl2_root_system, su21_root_system

SL2 = sl2_root_system()


def x(v):
    return (F(v),)


def sl2_string():
    return make_string(SL2, x(F(-3, 2)), x(-1))


def order_two_only():
    return load_lattice({"root_system": "sl2", "classes": [{"label": "y", "t": ["1/4"], "order": 2, "vol": "1/3"}]})


def test_torsion_free_series_is_linear(sl2_free):
    values = [v.rational_part for v in genfun_series(sl2_string(), sl2_free, 12)]
    diffs = {b - a for a, b in zip(values, values[1:])}
    assert len(diffs) == 1
    assert genfun_series(sl2_string(), sl2_free, 0) == []


def test_torsion_free_closed_form(sl2_free):
    g = genfun_closed(sl2_string(), sl2_free)
    assert g.N == 1 and g.s == 2
    assert g.model.numerator.degree <= 1


def test_order_two_closed_form():
    ld = order_two_only()
    g = genfun_closed(sl2_string(), ld)
    assert g.N == 2 and g.s == 2 and g.model.numerator.degree <= 3
    values = [v.rational_part for v in genfun_series(sl2_string(), ld, 8)]
    assert values[0::2] == [values[0]] * 4 and values[1::2] == [values[1]] * 4
    assert values[0] != values[1]


def test_series_requires_qualifying_string(sl2_free):
    s = make_string(SL2, x(F(1, 2)), x(F(1, 2)))
    with pytest.raises(NotInDstar):
        genfun_series(s, sl2_free, 3)
    with pytest.raises(NotInDstar):
        genfun_closed(s, sl2_free)


def test_base_outside_dstar_is_flagged(sl2_free):
    s = make_string(SL2, x(F(1, 2)), x(2))
    values = genfun_series(s, sl2_free, 4)
    assert not values[0].in_dstar and all(v.in_dstar for v in values[1:])
    crosscheck(s, sl2_free)


@pytest.mark.parametrize("mode", WY_MODES)
def test_crosscheck_torsion_free(sl2_free, mode):
    report = crosscheck(sl2_string(), sl2_free, wy_mode=mode)
    assert report.N == 1 and report.window == 6


def test_crosscheck_237(sl2_237):
    report = crosscheck(sl2_string(), sl2_237)
    assert report.N == 84 and report.degree < 168
    assert report.closed.model == report.fitted.model


@pytest.mark.parametrize("base,direction", [((2, 3), (1, 1)), ((1, 0), (F(8, 3), F(-2, 3)))])
def test_crosscheck_su21(su21_data, base, direction):
    s = make_string(su21_root_system(), tuple(map(F, base)), tuple(map(F, direction)))
    report = crosscheck(s, su21_data)
    assert report.N == string_period(s, su21_data)
    assert report.degree < report.N * 4


def test_corrupted_dataset_detected(sl2_237):
    c = sl2_237.classes[0]  # identity class: keeps the values rational
    perturbed = sl2_237.with_classes(
        [cls if cls is not c else cls.__class__(c.label, c.t, c.order, c.vol * 2, c.component_index) for cls in sl2_237.classes]
    )
    with pytest.raises(Mismatch) as info:
        crosscheck(sl2_string(), sl2_237, series_ld=perturbed)
    assert info.value.index is not None


def test_window_too_small(sl2_free):
    with pytest.raises(ValueError):
        crosscheck(sl2_string(), sl2_free, window=3)


def test_closed_form_matches_series_beyond_window(sl2_237):
    ev = HPEvaluator(SL2)
    g = genfun_closed(sl2_string(), sl2_237, ev)
    coeffs = series_coefficients(g.model, 700)
    for k in (300, 511, 700):
        assert coeffs[k] == ev.multiplicity(sl2_string().member(k), sl2_237).rational_part


def test_infinitely_many_nonzero(sl2_237, sl2_free):
    for ld in (sl2_free, sl2_237):
        lead = leading_coefficients(genfun_closed(sl2_string(), ld).model)
        assert all(c != 0 for c in lead)
