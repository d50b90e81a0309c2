import random
from fractions import Fraction as F

import pytest

from dsmult.errors import GridRequired, HeldOutMismatch, SamplingSetError
from dsmult.exact import RationalSeriesModel, determinant, series_coefficients
from dsmult.genfun import genfun_closed
from dsmult.hpformula import HPEvaluator
from dsmult.params import make_multistring, make_string
from dsmult.roots import sl2_root_system, su21_root_system
from dsmult.solver import (
    Insufficient,
    binomial_matrix,
    check_sampling_set,
    compare_lattices,
    density_certificate,
    linear_coefficients,
    minimal_sampling_set,
    multi_reconstruct,
    reconstruct,
)

SL2 = sl2_root_system()


def test_check_sampling_set_examples():
    assert check_sampling_set({0, 1}, 1, 2)
    assert not check_sampling_set({0, 2, 4, 6}, 2, 2)
    assert check_sampling_set({0, 1, 2, 3}, 2, 2)
    assert not check_sampling_set({-1, 0, 1}, 1, 2)


def test_binomial_matrix_examples():
    assert binomial_matrix([0, 1], 2) == [[1, 0], [2, 1]]
    assert determinant(binomial_matrix([0, 1, 2], 3)) == 1
    assert binomial_matrix([0], 1) == [[1]]
    with pytest.raises(SamplingSetError):
        binomial_matrix([1, 0], 2)


def test_binomial_matrix_random_nonsingular():
    rng = random.Random(0)
    for _ in range(200):
        s = rng.randint(1, 6)
        ms = sorted(rng.sample(range(40), s))
        assert determinant(binomial_matrix(ms, s)) != 0


def test_linear_sequence_extrapolates():
    V = F(1, 7)
    seq = {0: V * 3, 1: V * 5}
    p = reconstruct(seq, 1, 2)
    assert [p.evaluate(k) for k in range(6)] == [V * (3 + 2 * k) for k in range(6)]


def test_reconstruct_rejects_bad_sampling():
    with pytest.raises(SamplingSetError):
        reconstruct({0: 1, 2: 1}, 2, 2)


def test_held_out_validation():
    model = RationalSeriesModel([1, 2, 0, 1], 2, 2)
    seq = series_coefficients(model, 9)
    reconstruct(dict(enumerate(seq)), 2, 2)
    bad = dict(enumerate(seq))
    bad[7] += 1
    with pytest.raises(HeldOutMismatch) as info:
        reconstruct(bad, 2, 2)
    assert info.value.index == 7


def test_linear_coefficients_examples():
    p = reconstruct({0: 1, 1: 3}, 1, 2)
    assert linear_coefficients(p, 2) == {0: -1, 1: 2}
    assert linear_coefficients(p, 1) == {0: 0, 1: 1}
    q = reconstruct({k: k * k for k in range(4)}, 2, 2)
    coeffs = linear_coefficients(q, 5)
    assert all(c.denominator == 1 for c in coeffs.values())
    assert sum(c * k * k for k, c in coeffs.items()) == q.evaluate(5)


def test_non_minimal_sampling_set_can_give_fractions():
    # A = {0, 2} in one class: interpolating a line through m = 0, 2 halves the slope
    p = reconstruct({0: 0, 2: 2}, 1, 2)
    assert not p.coefficients_integral(1)


def test_sample_independence():
    A = minimal_sampling_set(4, 3)
    rng = random.Random(9)
    a = reconstruct({k: F(rng.randint(-9, 9)) for k in A}, 4, 3)
    b = reconstruct({k: F(rng.randint(-9, 9), 7) for k in A}, 4, 3)
    for ell in range(40):
        assert a.linear_coefficients(ell) == b.linear_coefficients(ell)


def test_predictor_matches_hp_on_237(sl2_237):
    s = make_string(SL2, (F(-3, 2),), (F(-1),))
    ev = HPEvaluator(SL2)
    model = genfun_closed(s, sl2_237, ev).model
    N, order = model.period, model.order
    seq = series_coefficients(model, 5 * N * order)
    p = reconstruct({k: seq[k] for k in minimal_sampling_set(N, order)}, N, order)
    for ell in range(0, 5 * N * order + 1, 37):
        assert p.evaluate(ell) == ev.multiplicity(s.member(ell), sl2_237).rational_part


def test_compare_relabelled_datasets(sl2_237):
    s = make_string(SL2, (F(-3, 2),), (F(-1),))
    relabelled = sl2_237.with_classes(
        [c.__class__(c.label + "_x", c.t, c.order, c.vol, c.component_index) for c in sl2_237.classes]
    )
    a = series_coefficients(genfun_closed(s, sl2_237).model, 400)
    b = series_coefficients(genfun_closed(s, relabelled).model, 400)
    assert compare_lattices(a, b, minimal_sampling_set(84, 2), 84, 2).status == "agree"
    assert compare_lattices(a, a, minimal_sampling_set(84, 2), 84, 2).status == "agree"


def test_compare_inconclusive_and_disagree():
    base = RationalSeriesModel([1, 1, 1, 1], 2, 2)
    other = RationalSeriesModel([1, 2, 1, 1], 2, 2)  # differs only in residue class 1
    a = series_coefficients(base, 30)
    b = series_coefficients(other, 30)
    evens = [0, 2, 4, 6]
    assert all(a[k] == b[k] for k in evens)
    assert compare_lattices(a, b, evens, 2, 2).status == "inconclusive sampling set"
    verdict = compare_lattices(a, b, [0, 1, 2, 3], 2, 2)
    assert verdict.status == "disagree" and verdict.index == 1


def test_density_examples():
    N, s = 6, 3
    t = 2 * N * s
    assert density_certificate(lambda k: True, t, N, s) == list(range(t + 1))
    bad = density_certificate(lambda k: k % N != 4, t, N, s)
    assert isinstance(bad, Insufficient) and bad.residue == 4 and bad.count == 0
    finite = {3, 10, 11}
    A = density_certificate(lambda k: k not in finite, 200, N, s)
    assert not isinstance(A, Insufficient) and check_sampling_set(A, N, s)


def test_density_sequence_input():
    flags = [True] * 10
    assert density_certificate(flags, 9, 1, 2) == list(range(10))


def test_density_below_three_quarters_threshold_certifies():
    # at horizon 4Ns a residue class holds 4s samples; at most 3s disagreements leave s
    rng = random.Random(1)
    for N, s in ((6, 4), (84, 2), (3, 2)):
        t = 4 * N * s
        for _ in range(50):
            bad = set(rng.sample(range(t + 1), (3 * (t + 1)) // (4 * N)))
            A = density_certificate(lambda k: k not in bad, t, N, s)
            assert not isinstance(A, Insufficient)


def test_multi_reconstruct_one_dimension_equals_reconstruct():
    seq = series_coefficients(RationalSeriesModel([1, 2, 0, 1], 2, 2), 20)
    A = minimal_sampling_set(2, 2)
    mp = multi_reconstruct({(k,): seq[k] for k in A}, 2, 2)
    p = reconstruct({k: seq[k] for k in A}, 2, 2)
    assert all(mp.evaluate((k,)) == p.evaluate(k) for k in range(21))


def test_multi_reconstruct_matches_hp(su21_data):
    rs = su21_root_system()
    ms = make_multistring(rs, [(F(2), F(3)), (F(1), F(1))])
    ev = HPEvaluator(rs)
    N = su21_data.n_gamma
    s = len(rs.positive) + 1
    A = minimal_sampling_set(N, s, start=1)
    samples = {(a, b): ev.multiplicity(ms.member((a, b)), su21_data).rational_part for a in A for b in A}
    mp = multi_reconstruct(samples, N, s)
    rng = random.Random(3)
    for _ in range(20):
        ks = (rng.randint(1, 60), rng.randint(1, 60))
        assert mp.evaluate(ks) == ev.multiplicity(ms.member(ks), su21_data).rational_part


def test_multi_reconstruct_requires_grid():
    with pytest.raises(GridRequired):
        multi_reconstruct({(0, 0): 1, (1, 1): 1, (0, 1): 1}, 1, 1)
    with pytest.raises(SamplingSetError):
        multi_reconstruct({(0, 0): 1}, 1, 2)
