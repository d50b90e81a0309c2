"""Generating functions of multiplicities along a string.

F(z) = sum_{k >= 0} m(lambda_k) z^k, where lambda_k = base + k * direction.
The closed form is a rational function p(z) / (1 - z^N)^(|Phi+| + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegreeOverflow, Mismatch, NotInDstar, NotRational
from .exact import (
    CyclotomicNumber,
    Polynomial,
    RationalSeriesModel,
    exp_2pi_i,
    fit_numerator,
    lcm,
    power_sum_model,
    series_coefficients,
)
from .hpformula import HPEvaluator, MultiplicityValue
from .lattice import DEFAULT_WY_MODE, LatticeData, effective_period
from .params import StringSpec, in_Dstar
from .roots import apply, sub


@dataclass(frozen=True)
class GenFunResult:
    model: RationalSeriesModel
    N: int
    source: str

    @property
    def s(self) -> int:
        return self.model.order


def _evaluator(ld: LatticeData, evaluator: HPEvaluator | None, wy_mode: str) -> HPEvaluator:
    return evaluator if evaluator is not None else HPEvaluator(ld.root_system, wy_mode)


def string_period(s: StringSpec, ld: LatticeData) -> int:
    """N = lcm(effective period of the direction, N_Gamma)."""
    return lcm(effective_period(ld, s.direction), ld.n_gamma)


def genfun_series(
    s: StringSpec,
    ld: LatticeData,
    n: int,
    evaluator: HPEvaluator | None = None,
    wy_mode: str = DEFAULT_WY_MODE,
) -> list[MultiplicityValue]:
    """Multiplicities of members 0 .. n-1.

    A member outside D*(G) (only possible for the base) is evaluated by the
    same class sum and flagged with ``in_dstar=False``.
    """
    if not s.qualifies:
        raise NotInDstar("neither base nor direction lies in D*(G)")
    ev = _evaluator(ld, evaluator, wy_mode)
    out = []
    for k in range(n):
        lam = s.member(k)
        if in_Dstar(s.rs, lam):
            out.append(ev.multiplicity(lam, ld))
        else:
            out.append(MultiplicityValue(ev.hp_sum(lam, ld), False))
    return out


def _poly_in_k(factors: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """Coefficients b_j of prod (a + k*b) as a polynomial in k."""
    coeffs = [Fraction(1)]
    for a, b in factors:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j] += a * c
            nxt[j + 1] += b * c
        coeffs = nxt
    return coeffs


def _block(j: int, N: int, order: int) -> Polynomial:
    """Rational polynomial Q with sum_{k>=0} k^j (cz)^k = Q(cz) / (1 - z^N)^order whenever c^N = 1.

    Uses 1/(1 - x)^m = (1 + x + ... + x^(N-1))^m / (1 - x^N)^m, then pads to ``order``.
    """
    m = j + 1
    num = Polynomial([1]) if j == 0 else power_sum_model(j)[0]
    geometric = Polynomial([1] * N)
    return num * geometric**m * Polynomial([1] + [0] * (N - 1) + [-1]) ** (order - m)


def genfun_closed(
    s: StringSpec,
    ld: LatticeData,
    evaluator: HPEvaluator | None = None,
    wy_mode: str = DEFAULT_WY_MODE,
) -> GenFunResult:
    """Closed-form numerator assembled class by class and Weyl element by element."""
    if not s.qualifies:
        raise NotInDstar("neither base nor direction lies in D*(G)")
    ev = _evaluator(ld, evaluator, wy_mode)
    rs = s.rs
    N = string_period(s, ld)
    order = len(rs.positive) + 1
    # group by (c, j): every such term is scalar * Q_j(cz)
    grouped: dict[tuple[CyclotomicNumber, int], CyclotomicNumber] = {}
    for cls in ld.classes:
        d = ev.derived(cls)
        constant = ev.inverse_denominator(cls) * (cls.vol * ev.class_constant(cls) / len(d.w_y))
        for w, sign in ev.weyl_c_signed:
            w1, w2 = apply(w, s.base), apply(w, s.direction)
            b = _poly_in_k([(rs.pair(w1, rs.roots[i]), rs.pair(w2, rs.roots[i])) for i in d.phi_y_pos])
            scalar = constant * exp_2pi_i(rs.pair(sub(w1, rs.delta), cls.t)) * sign
            c = exp_2pi_i(rs.pair(w2, cls.t))
            for j, bj in enumerate(b):
                if bj:
                    key = (c, j)
                    grouped[key] = grouped[key] + scalar * bj if key in grouped else scalar * bj

    blocks: dict[int, Polynomial] = {}
    total: list = [0] * (N * order)
    for (c, j), scalar in grouped.items():
        if scalar.is_zero():
            continue
        q = blocks.get(j)
        if q is None:
            q = blocks[j] = _block(j, N, order)
            if len(q) > N * order:
                raise DegreeOverflow(f"block for k^{j} has degree {q.degree} >= {N * order}")
        power = CyclotomicNumber.from_rational(1, c.conductor)
        for i, qi in enumerate(q):
            if qi:
                total[i] = total[i] + scalar * power * qi
            power = power * c

    rational = []
    for i, coeff in enumerate(total):
        if isinstance(coeff, CyclotomicNumber):
            if not coeff.is_rational():
                raise NotRational(f"numerator coefficient {i} is not rational")
            coeff = coeff.coeffs[0]
        rational.append(Fraction(coeff))
    numerator = Polynomial(rational)
    if numerator.degree >= N * order:
        raise DegreeOverflow(f"numerator degree {numerator.degree} >= {N * order}")
    return GenFunResult(RationalSeriesModel(numerator, N, order), N, "closed-form")


@dataclass(frozen=True)
class CrosscheckReport:
    N: int
    s: int
    window: int
    degree: int
    closed: GenFunResult
    fitted: GenFunResult


def _rational_values(values: list[MultiplicityValue]) -> list[Fraction]:
    out = []
    for k, v in enumerate(values):
        r = v.rational_part
        if r is None:
            raise NotRational(f"member {k} has an irrational multiplicity")
        out.append(r)
    return out


def crosscheck(
    s: StringSpec,
    ld: LatticeData,
    window: int | None = None,
    evaluator: HPEvaluator | None = None,
    wy_mode: str = DEFAULT_WY_MODE,
    series_ld: LatticeData | None = None,
) -> CrosscheckReport:
    """Compare the closed form with directly evaluated multiplicities.

    ``series_ld`` lets a test feed a different dataset to the series side.
    """
    ev = _evaluator(ld, evaluator, wy_mode)
    closed = genfun_closed(s, ld, ev)
    N, order = closed.N, closed.s
    window = window if window is not None else 3 * N * order
    if window < 2 * N * order:
        raise ValueError(f"window must be at least {2 * N * order}")
    series = _rational_values(genfun_series(s, series_ld or ld, window, ev))
    expected = series_coefficients(closed.model, window - 1)
    for k, (a, b) in enumerate(zip(expected, series)):
        if a != b:
            raise Mismatch(f"closed form and series differ at index {k}: {a} != {b}", k)
    fitted_model = fit_numerator(series, N, order)
    if fitted_model != closed.model:
        raise Mismatch("fitted numerator differs from closed form")
    return CrosscheckReport(N, order, window, closed.model.numerator.degree, closed, GenFunResult(fitted_model, N, "series-fit"))


def leading_coefficients(model: RationalSeriesModel) -> list[Fraction]:
    """Per residue class j, the coefficient of m^(s-1) in the quasi-polynomial m -> coefficient(mN + j)."""
    N, s = model.period, model.order
    return [sum((Fraction(model.numerator[h * N + j]) for h in range(s)), Fraction(0)) / factorial(s - 1) for j in range(N)]
