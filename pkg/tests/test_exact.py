import cmath
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close, to_complex
from dsmult.errors import NotRational, NotRepresentable, Singular, ValidationError
from dsmult.exact import (
    CyclotomicNumber,
    Polynomial,
    RationalSeriesModel,
    cyclotomic_polynomial,
    determinant,
    euler_phi,
    exp_2pi_i,
    fit_numerator,
    inverse_matrix,
    power_sum_model,
    rank,
    root_of_unity,
    series_coefficients,
    solve,
    sum_cyclotomic,
    to_rational,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def cyclotomics(draw, conductors=(1, 2, 3, 4, 5, 6, 7, 8, 12)):
    L = draw(st.sampled_from(conductors))
    coeffs = draw(st.lists(fractions, min_size=euler_phi(L), max_size=euler_phi(L)))
    return CyclotomicNumber(L, coeffs)


def test_cyclotomic_polynomials():
    assert list(cyclotomic_polynomial(1)) == [-1, 1]
    assert list(cyclotomic_polynomial(4)) == [1, 0, 1]
    assert list(cyclotomic_polynomial(6)) == [1, -1, 1]
    assert list(cyclotomic_polynomial(12)) == [1, 0, -1, 0, 1]
    assert [euler_phi(n) for n in (1, 2, 7, 12, 84)] == [1, 1, 6, 4, 24]


def test_roots_of_unity_identities():
    i = root_of_unity(4, 1)
    assert i * i == -1
    assert root_of_unity(6, 1) ** 3 == -1
    assert root_of_unity(3, 1) + root_of_unity(3, 2) == -1
    assert root_of_unity(12, 1) ** 12 == 1
    assert sum_cyclotomic(root_of_unity(12, a) for a in range(12)) == 0
    assert root_of_unity(3, 1) == root_of_unity(6, 2)
    assert exp_2pi_i(F(1, 2)) == -1
    assert exp_2pi_i(F(-5, 4)) == root_of_unity(4, 3)


def test_to_rational():
    assert to_rational(CyclotomicNumber.from_rational(F(3, 7), 12)) == F(3, 7)
    with pytest.raises(NotRational):
        to_rational(root_of_unity(5, 1))


def test_inverse_in_q_zeta_7():
    x = 1 - root_of_unity(7, 1) + 2 * root_of_unity(7, 3)
    assert x * x.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        CyclotomicNumber.from_rational(0, 7).inverse()


@settings(max_examples=150, deadline=None)
@given(cyclotomics(), cyclotomics())
def test_ring_operations_match_complex_embedding(a, b):
    assert close(to_complex(a + b), to_complex(a) + to_complex(b))
    assert close(to_complex(a - b), to_complex(a) - to_complex(b))
    assert close(to_complex(a * b), to_complex(a) * to_complex(b))
    if not b.is_zero():
        assert close(to_complex(a / b), to_complex(a) / to_complex(b), 1e-7)


@settings(max_examples=80, deadline=None)
@given(cyclotomics(), cyclotomics(), cyclotomics())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=30))
def test_exp_matches_complex(q):
    assert close(to_complex(exp_2pi_i(q)), cmath.exp(2j * cmath.pi * float(q)))


def test_equal_values_hash_equal():
    a = root_of_unity(3, 1)
    b = root_of_unity(6, 2)
    assert a == b and hash(a) == hash(b)
    assert hash(CyclotomicNumber.from_rational(F(1, 2), 5)) == hash(F(1, 2))


def test_polynomial_arithmetic():
    p = Polynomial([1, 2, 3])
    q = Polynomial([0, 1])
    assert (p * q).coeffs == (0, 1, 2, 3)
    assert (p - p).is_zero() and (p - p).degree == -1
    assert p(2) == 17
    quo, rem = (p * q + 5).divmod(q)
    assert quo == p and rem == Polynomial([5])
    assert Polynomial([1, 1]).substitute_scaled(2) == Polynomial([1, 2])
    assert Polynomial([1, 1]) ** 3 == Polynomial([1, 3, 3, 1])


@pytest.mark.parametrize(
    "j,expected",
    [(0, [0, 1]), (1, [0, 1]), (2, [0, 1, 1]), (3, [0, 1, 4, 1])],
)
def test_power_sum_numerators(j, expected):
    num, order = power_sum_model(j)
    assert list(num) == expected and order == j + 1


@pytest.mark.parametrize("j", range(1, 6))
def test_power_sum_series(j):
    num, order = power_sum_model(j, 1)
    model = RationalSeriesModel(num, 1, order)
    assert series_coefficients(model, 12) == [k**j for k in range(13)]


def test_series_model_and_fit_round_trip():
    model = RationalSeriesModel([1, 1], 2, 2)
    assert series_coefficients(model, 5) == [1, 1, 2, 2, 3, 3]
    assert fit_numerator(series_coefficients(model, 11), 2, 2) == model


def test_fit_rejects_non_models():
    seq = [k * k for k in range(12)]
    with pytest.raises(NotRepresentable):
        fit_numerator(seq, 1, 2)
    with pytest.raises(ValidationError):
        fit_numerator(seq[:3], 1, 2)


def test_degree_bound_enforced():
    with pytest.raises(ValidationError):
        RationalSeriesModel([0, 0, 0, 0, 1], 2, 2)


def test_linear_algebra():
    m = [[F(2), F(1)], [F(1), F(1)]]
    assert determinant(m) == 1
    assert inverse_matrix(m) == [[1, -1], [-1, 2]]
    assert solve(m, [F(3), F(2)]) == [1, 1]
    assert rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(Singular):
        inverse_matrix([[1, 2], [2, 4]])


def test_solve_with_cyclotomic_rhs():
    i = root_of_unity(4, 1)
    x = solve([[F(1), F(1)], [F(1), F(-1)]], [1 + i, 1 - i])
    assert x[0] == 1 and x[1] == i
