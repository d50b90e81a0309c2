import random
from fractions import Fraction as F

import pytest

from dsmult.errors import ChamberMismatch, ValidationError
from dsmult.params import (
    delta_of_chamber,
    exhaustion_witness,
    in_D,
    in_Dstar,
    make_multistring,
    make_string,
    random_integral_regular,
    satisfies_tv_estimate,
    string_members_inequivalent,
)
from dsmult.roots import add, chamber_of, sl2_root_system, su21_root_system

SL2 = sl2_root_system()
SU21 = su21_root_system()


def x(v):
    return (F(v),)


def test_in_D_examples():
    assert in_D(SL2, x(1))  # (k - 1)/2 alpha with k = 3
    assert not in_D(SL2, x(0))
    assert not in_D(SL2, x(F(1, 3)))
    # positive on alpha_2 and alpha_1 + alpha_2 but negative on the compact alpha_1
    assert not in_D(SU21, (F(-1), F(2)))
    assert in_D(SU21, (F(2), F(3)))


def test_in_Dstar_examples():
    assert in_Dstar(SL2, x(-1))
    assert not in_Dstar(SL2, x(F(1, 2)))
    for k in range(3, 30):
        assert in_Dstar(SL2, x(F(k - 1, 2)))
        assert in_Dstar(SL2, x(F(-(k - 1), 2)))


def test_tv_examples():
    assert satisfies_tv_estimate(SL2, x(2))
    assert not satisfies_tv_estimate(SL2, x(F(1, 2)))


@pytest.mark.parametrize("rs", [SL2, SU21], ids=["sl2", "su21"])
def test_tv_implies_dstar_on_random_forms(rs):
    rng = random.Random(11)
    for _ in range(300):
        lam = random_integral_regular(rs, rng)
        if in_D(rs, lam) and satisfies_tv_estimate(rs, lam):
            assert in_Dstar(rs, lam)


def test_make_string_examples():
    s = make_string(SL2, x(F(-3, 2)), x(-1))
    assert s.member(2) == x(F(-7, 2))
    assert s.qualifies
    with pytest.raises(ChamberMismatch):
        make_string(SL2, x(F(3, 2)), x(-1))
    with pytest.raises(ValidationError):
        s.member(-1)


def test_string_with_base_outside_dstar():
    s = make_string(SL2, x(F(1, 2)), x(2))
    assert not s.base_in_dstar and s.direction_in_dstar
    # the base itself (k = 0) is outside D*, every later member is inside
    assert not in_Dstar(SL2, s.member(0))
    assert all(in_Dstar(SL2, s.member(k)) for k in range(1, 11))


def test_direction_outside_D_rejected():
    with pytest.raises(ValidationError):
        make_string(SL2, x(-1), x(F(1, 3)))


@pytest.mark.parametrize("rs", [SL2, SU21], ids=["sl2", "su21"])
def test_scaling_and_string_members_stay_in_dstar(rs):
    rng = random.Random(5)
    pool = [lam for lam in (random_integral_regular(rs, rng) for _ in range(400)) if in_D(rs, lam)]
    dstar = [lam for lam in pool if in_Dstar(rs, lam)]
    assert dstar
    for lam in dstar[:40]:
        for k in range(1, 11):
            mu = tuple(k * c for c in lam)
            assert in_Dstar(rs, mu) and chamber_of(rs, mu) == chamber_of(rs, lam)
    checked = 0
    for a in pool[:60]:
        for b in dstar[:20]:
            if chamber_of(rs, a) != chamber_of(rs, b):
                continue
            s = make_string(rs, a, b)
            assert all(in_Dstar(rs, s.member(k)) for k in range(1, 21))
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("rs", [SL2, SU21], ids=["sl2", "su21"])
def test_chamber_sandwich(rs):
    rng = random.Random(3)
    for _ in range(200):
        a, b = random_integral_regular(rs, rng), random_integral_regular(rs, rng)
        pa, pb, pab = chamber_of(rs, a), chamber_of(rs, b), chamber_of(rs, add(a, b))
        assert pa & pb <= pab <= pa | pb


def test_delta_of_chamber():
    assert delta_of_chamber(SL2, x(-3)) == x(F(-1, 2))
    assert delta_of_chamber(SU21, (F(2), F(3))) == SU21.delta


def test_members_inequivalent():
    s = make_string(SL2, x(F(-3, 2)), x(-1))
    assert string_members_inequivalent(s, 10)
    assert string_members_inequivalent(s, 0)
    t = make_string(SU21, (F(2), F(3)), (F(1), F(1)))
    assert string_members_inequivalent(t, 6)


def test_exhaustion_witness():
    lam1 = (F(2), F(2))
    lam2 = (F(2), F(3))
    m, mu = exhaustion_witness(SU21, lam1, lam2)
    assert m >= 1 and in_Dstar(SU21, mu) and chamber_of(SU21, mu) == chamber_of(SU21, lam1)
    # minimality
    for smaller in range(1, m):
        cand = tuple(smaller * a - b for a, b in zip(lam1, lam2))
        assert not (in_Dstar(SU21, cand) and chamber_of(SU21, cand) == chamber_of(SU21, lam1))
    deep = (F(20), F(21))
    assert exhaustion_witness(SU21, deep, (F(1), F(1)))[0] == 1
    with pytest.raises(ValidationError):
        exhaustion_witness(SU21, lam1, (F(3), F(3)))


def test_multistring():
    ms = make_multistring(SU21, [(F(1), F(1)), (F(2), F(3))])
    assert ms.member((2, 1)) == (F(4), F(5))
    with pytest.raises(ChamberMismatch):
        make_multistring(SU21, [(F(2), F(2)), (F(2), F(0))])
