"""Exact elliptic-class local terms, multiplicities and Lefschetz numbers.

All values live in cyclotomic fields; a character ``mu`` evaluated at the
class with torus point ``t`` is ``exp(2 pi i <mu, t>)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import DivisorVanishes, NotInDstar, SingularElement, ValidationError
from .exact import CyclotomicNumber, exp_2pi_i, sum_cyclotomic
from .lattice import DEFAULT_WY_MODE, DerivedClassData, EllipticClassData, LatticeData, derive_class
from .params import in_D, in_Dstar
from .roots import RootSystem, Vector, apply, chamber_of, find_w0, generate_weyl, length_and_sign, matmul, sub, vec


@dataclass(frozen=True)
class MultiplicityValue:
    value: CyclotomicNumber
    in_dstar: bool = True

    @property
    def rational_part(self) -> Fraction | None:
        return self.value.coeffs[0] if self.value.is_rational() else None

    @property
    def is_integral(self) -> bool:
        r = self.rational_part
        return r is not None and r.denominator == 1

    def to_json(self):
        return self.value.to_json()


def _product(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


class HPEvaluator:
    """Caches Weyl data and per-class derivations for one root system."""

    def __init__(self, rs: RootSystem, wy_mode: str = DEFAULT_WY_MODE):
        self.rs = rs
        self.wy_mode = wy_mode
        self._derived: dict[EllipticClassData, DerivedClassData] = {}
        self._inv_denominator: dict[EllipticClassData, CyclotomicNumber] = {}

    @cached_property
    def weyl(self):
        return generate_weyl(self.rs)

    @cached_property
    def weyl_c(self):
        return generate_weyl(self.rs, compact_only=True)

    @cached_property
    def weyl_c_signed(self) -> tuple[tuple[tuple, int], ...]:
        return tuple((w, length_and_sign(w, self.rs)[1]) for w in self.weyl_c)

    def derived(self, c: EllipticClassData) -> DerivedClassData:
        d = self._derived.get(c)
        if d is None:
            d = self._derived[c] = derive_class(self.rs, c, self.wy_mode)
        return d

    def inverse_denominator(self, c: EllipticClassData) -> CyclotomicNumber:
        """1 / prod over Phi+ minus Phi_y+ of (1 - e^{-a}(y))."""
        inv = self._inv_denominator.get(c)
        if inv is None:
            rs = self.rs
            d = self.derived(c)
            den = CyclotomicNumber.from_rational(1)
            for i in rs.positive:
                if i in d.phi_y:
                    continue
                factor = 1 - exp_2pi_i(-rs.pair(rs.roots[i], c.t))
                if factor.is_zero():
                    raise DivisorVanishes(f"class {c.label!r}: 1 - e^(-a)(y) vanishes off Phi_y")
                den = den * factor
            inv = self._inv_denominator[c] = den.inverse()
        return inv

    def class_constant(self, c: EllipticClassData) -> Fraction:
        """sign / (prod <delta_y, a> * |W_y| * [G_y : G_y^0]), without the volume."""
        d = self.derived(c)
        rs = self.rs
        prod = _product(rs.pair(d.delta_y, rs.roots[i]) for i in d.phi_y_pos)
        return Fraction(d.sign) / (prod * len(d.w_y) * c.component_index)

    def psi0_summand(self, lam: Vector, w, c: EllipticClassData) -> CyclotomicNumber:
        """det(w) e^{w lam - delta}(y) prod_{Phi_y+} <w lam, a> for one Weyl element."""
        rs = self.rs
        d = self.derived(c)
        wl = apply(w, lam)
        poly = _product(rs.pair(wl, rs.roots[i]) for i in d.phi_y_pos)
        sign = length_and_sign(w, rs)[1]
        return exp_2pi_i(rs.pair(sub(wl, rs.delta), c.t)) * (sign * poly)

    def psi0(self, lam: Sequence, c: EllipticClassData) -> CyclotomicNumber:
        rs = self.rs
        lam = vec(lam)
        d = self.derived(c)
        terms = []
        for w, sign in self.weyl_c_signed:
            wl = apply(w, lam)
            poly = _product(rs.pair(wl, rs.roots[i]) for i in d.phi_y_pos)
            if poly:
                terms.append(exp_2pi_i(rs.pair(sub(wl, rs.delta), c.t)) * (sign * poly))
        numerator = sum_cyclotomic(terms)
        return numerator * self.inverse_denominator(c) / len(d.w_y)

    def psi(self, lam: Sequence, c: EllipticClassData) -> CyclotomicNumber:
        return self.psi0(lam, c) * self.class_constant(c)

    def hp_sum(self, lam: Sequence, ld: LatticeData) -> CyclotomicNumber:
        """sum over classes of vol * Psi_lambda(y), without any parameter check."""
        lam = vec(lam)
        return sum_cyclotomic(self.psi(lam, c) * c.vol for c in ld.classes)

    def multiplicity(self, lam: Sequence, ld: LatticeData) -> MultiplicityValue:
        lam = vec(lam)
        if not in_Dstar(self.rs, lam):
            raise NotInDstar(f"{[str(x) for x in lam]} is not in D*(G)")
        return MultiplicityValue(self.hp_sum(lam, ld), True)

    def w0_sign(self, lam: Sequence) -> int:
        w0 = find_w0(self.rs, chamber_of(self.rs, lam), self.weyl)
        return (-1) ** length_and_sign(w0, self.rs)[0]

    def lefschetz(self, lam: Sequence, ld: LatticeData) -> MultiplicityValue:
        lam = vec(lam)
        if not in_D(self.rs, lam):
            raise ValidationError(f"{[str(x) for x in lam]} is not a Harish-Chandra parameter")
        return MultiplicityValue(self.hp_sum(lam, ld) * self.w0_sign(lam), in_Dstar(self.rs, lam))

    def formal_degree(self, lam: Sequence) -> Fraction:
        return formal_degree(self.rs, lam, len(self.weyl))

    def character_at(self, lam: Sequence, c: EllipticClassData) -> CyclotomicNumber:
        """Global character at a regular elliptic class, evaluated as printed:
        (-1)^m prod<l,a> sum_{W_c} det(w) e^{w l} / prod (e^{a/2} - e^{-a/2})."""
        rs = self.rs
        lam = vec(lam)
        if self.derived(c).phi_y:
            raise SingularElement(f"class {c.label!r} is not regular")
        numerator = sum_cyclotomic(exp_2pi_i(rs.pair(apply(w, lam), c.t)) * sign for w, sign in self.weyl_c_signed)
        den = CyclotomicNumber.from_rational(1)
        for i in rs.positive:
            half = rs.pair(rs.roots[i], c.t) / 2
            den = den * (exp_2pi_i(half) - exp_2pi_i(-half))
        m = rs.dim_p // 2
        prod = _product(rs.pair(lam, rs.roots[i]) for i in rs.positive)
        return numerator * ((-1) ** m * prod) / den

    def coset_audit(self, ld: LatticeData, lam: Sequence) -> list[tuple[str, int, int]]:
        """Pairs (class, w index, u index) where the summand for w*u differs from w."""
        lam = vec(lam)
        violations = []
        for c in ld.classes:
            d = self.derived(c)
            for i, w in enumerate(self.weyl_c):
                base = self.psi0_summand(lam, w, c)
                for j, u in enumerate(d.w_y):
                    if self.psi0_summand(lam, matmul(w, u), c) != base:
                        violations.append((c.label, i, j))
        return violations

    def convention_factor(self) -> Fraction:
        """Predicted Psi_lambda(1) / formal degree under the active W_y mode."""
        ratio = Fraction(len(self.weyl), len(self.weyl_c))
        return ratio if self.wy_mode == "compact-subgroup" else 1 / ratio


def formal_degree(rs: RootSystem, lam: Sequence, weyl_order: int | None = None) -> Fraction:
    """prod_{Phi+} <lam, a> / (prod_{Phi+} <delta, a> * |W|), signed."""
    lam = vec(lam)
    weyl_order = weyl_order or len(generate_weyl(rs))
    num = _product(rs.pair(lam, rs.roots[i]) for i in rs.positive)
    den = _product(rs.pair(rs.delta, rs.roots[i]) for i in rs.positive)
    return num / (den * weyl_order)


# Convenience wrappers -------------------------------------------------------


def psi0(lam, c: EllipticClassData, rs: RootSystem, wy_mode: str = DEFAULT_WY_MODE) -> CyclotomicNumber:
    return HPEvaluator(rs, wy_mode).psi0(lam, c)


def psi(lam, c: EllipticClassData, rs: RootSystem, wy_mode: str = DEFAULT_WY_MODE) -> CyclotomicNumber:
    return HPEvaluator(rs, wy_mode).psi(lam, c)


def multiplicity(lam, ld: LatticeData, wy_mode: str = DEFAULT_WY_MODE) -> MultiplicityValue:
    return HPEvaluator(ld.root_system, wy_mode).multiplicity(lam, ld)


def lefschetz(lam, ld: LatticeData, wy_mode: str = DEFAULT_WY_MODE) -> MultiplicityValue:
    return HPEvaluator(ld.root_system, wy_mode).lefschetz(lam, ld)


def character_at(lam, c: EllipticClassData, rs: RootSystem) -> CyclotomicNumber:
    return HPEvaluator(rs).character_at(lam, c)
