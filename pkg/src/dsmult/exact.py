"""Exact arithmetic: dense polynomials, cyclotomic fields Q(zeta_L),
and rational series with denominator (1 - z^N)^s.

Rationals are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Iterable, Sequence, Union

from .errors import NotRational, NotRepresentable, Singular, ValidationError

Scalar = Union[int, Fraction]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _is_zero(c) -> bool:
    return c == 0


class Polynomial:
    """Dense univariate polynomial, coefficients lowest degree first.

    Coefficients may be Fractions or CyclotomicNumbers; the class only
    relies on ``+``, ``*`` and comparison with 0.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            if _is_zero(other):
                return Polynomial()
            return Polynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out: list = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                if _is_zero(y):
                    continue
                out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    def __rmul__(self, other) -> "Polynomial":
        return Polynomial(other * c for c in self.coeffs)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Long division over a field (Fraction coefficients)."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [as_fraction(c) for c in self.coeffs]
        d = [as_fraction(c) for c in divisor.coeffs]
        lead = d[-1]
        q = [Fraction(0)] * max(len(rem) - len(d) + 1, 0)
        for i in range(len(rem) - len(d), -1, -1):
            c = rem[i + len(d) - 1] / lead
            q[i] = c
            if c:
                for j, dj in enumerate(d):
                    rem[i + j] -= c * dj
        return Polynomial(q), Polynomial(rem[: len(d) - 1])

    def substitute_scaled(self, c) -> "Polynomial":
        """Return p(c*z)."""
        out = []
        power = 1
        for coeff in self.coeffs:
            out.append(coeff * power)
            power = power * c
        return Polynomial(out)


# ---------------------------------------------------------------------------
# Cyclotomic fields
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic_int(L: int) -> tuple[int, ...]:
    if L < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (L - 1) + [1]  # x^L - 1
    for d in range(1, L):
        if L % d == 0:
            den = _cyclotomic_int(d)
            # exact division by a monic integer polynomial
            q = [0] * (len(num) - len(den) + 1)
            rem = list(num)
            for i in range(len(q) - 1, -1, -1):
                c = rem[i + len(den) - 1]
                q[i] = c
                if c:
                    for j, dj in enumerate(den):
                        rem[i + j] -= c * dj
            assert not any(rem[: len(den) - 1])
            num = q
    return tuple(num)


def cyclotomic_polynomial(L: int) -> Polynomial:
    """Phi_L as a monic polynomial with integer (Fraction) coefficients."""
    return Polynomial(Fraction(c) for c in _cyclotomic_int(L))


def euler_phi(L: int) -> int:
    return len(_cyclotomic_int(L)) - 1


@lru_cache(maxsize=None)
def _power_table(L: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds x^e mod Phi_L for 0 <= e < L, as integer vectors."""
    phi = _cyclotomic_int(L)
    n = len(phi) - 1
    rows = []
    cur = [0] * n
    cur[0] = 1
    for _ in range(L):
        rows.append(tuple(cur))
        # multiply by x, reduce the overflowing x^n term
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(n):
                cur[j] -= top * phi[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def _embedding_table(L: int, M: int) -> tuple[tuple[int, ...], ...]:
    step = M // L
    table = _power_table(M)
    return tuple(table[(i * step) % M] for i in range(euler_phi(L)))


class CyclotomicNumber:
    """An element of Q(zeta_L), stored as its residue modulo Phi_L.

    ``coeffs[i]`` is the coefficient of zeta_L**i, ``len(coeffs) == phi(L)``.
    Mixed-conductor operands are embedded into Q(zeta_lcm) first.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Sequence):
        n = euler_phi(conductor)
        cs = tuple(as_fraction(c) for c in coeffs)
        if len(cs) != n:
            raise ValueError(f"Q(zeta_{conductor}) needs {n} coordinates, got {len(cs)}")
        self.conductor = conductor
        self.coeffs = cs

    # construction -------------------------------------------------------

    @classmethod
    def from_rational(cls, x: Scalar, conductor: int = 1) -> "CyclotomicNumber":
        n = euler_phi(conductor)
        return cls(conductor, [as_fraction(x)] + [Fraction(0)] * (n - 1))

    @classmethod
    def _from_exponents(cls, L: int, dense: Sequence[Fraction]) -> "CyclotomicNumber":
        """Reduce sum dense[e] * zeta_L**e (any length) modulo Phi_L."""
        table = _power_table(L)
        n = euler_phi(L)
        acc = [Fraction(0)] * n
        folded: dict[int, Fraction] = {}
        for e, c in enumerate(dense):
            if c:
                k = e % L
                folded[k] = folded.get(k, 0) + c
        for e, c in folded.items():
            if not c:
                continue
            if e < n:
                acc[e] += c
            else:
                for j, t in enumerate(table[e]):
                    if t:
                        acc[j] += c * t
        obj = cls.__new__(cls)
        obj.conductor = L
        obj.coeffs = tuple(acc)
        return obj

    # coercion -----------------------------------------------------------

    def embed(self, M: int) -> "CyclotomicNumber":
        """Image under Q(zeta_L) -> Q(zeta_M), zeta_L -> zeta_M**(M/L)."""
        if M == self.conductor:
            return self
        if M % self.conductor:
            raise ValueError(f"Q(zeta_{self.conductor}) does not embed in Q(zeta_{M})")
        table = _embedding_table(self.conductor, M)
        acc = [Fraction(0)] * euler_phi(M)
        for c, row in zip(self.coeffs, table):
            if c:
                for j, t in enumerate(row):
                    if t:
                        acc[j] += c * t
        obj = CyclotomicNumber.__new__(CyclotomicNumber)
        obj.conductor = M
        obj.coeffs = tuple(acc)
        return obj

    def _coerce(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.from_rational(as_fraction(other), self.conductor)
        if other.conductor == self.conductor:
            return self, other
        M = lcm(self.conductor, other.conductor)
        return self.embed(M), other.embed(M)

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        # equal values may live in different conductors; hash coarsely
        return hash("cyclotomic-irrational")

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            cs = list(self.coeffs)
            cs[0] += other
            return _raw(self.conductor, cs)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerce(other)
        return _raw(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return _raw(self.conductor, [Fraction(0)] * len(self.coeffs))
            return _raw(self.conductor, [x * other for x in self.coeffs])
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerce(other)
        L = a.conductor
        if L <= 2:
            return _raw(L, [a.coeffs[0] * b.coeffs[0]])
        bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
        dense = [Fraction(0)] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in bnz:
                    dense[i + j] += x * y
        return CyclotomicNumber._from_exponents(L, dense)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coeffs[0], self.conductor)
        # extended Euclid: find u with u * a == 1 mod Phi_L
        modulus = cyclotomic_polynomial(self.conductor)
        r0, r1 = modulus, Polynomial(self.coeffs)
        s0, s1 = Polynomial(), Polynomial([Fraction(1)])
        while r1.degree > 0:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        # r1 is a nonzero constant because Phi_L is irreducible
        c = as_fraction(r1[0])
        u = s1 * (1 / c)
        n = euler_phi(self.conductor)
        dense = [as_fraction(u[i]) for i in range(max(len(u), 1))]
        return CyclotomicNumber._from_exponents(self.conductor, dense + [Fraction(0)] * max(0, n - len(dense)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / as_fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicNumber.from_rational(1, self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CyclotomicNumber({self.conductor}, rational={self.coeffs[0]})"
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CyclotomicNumber({self.conductor}, {' + '.join(terms)})"

    def to_json(self):
        """'p/q' when rational, else {"conductor": L, "coeffs": [...]}."""
        if self.is_rational():
            return str(self.coeffs[0])
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}


def _raw(L: int, coeffs: list) -> CyclotomicNumber:
    obj = CyclotomicNumber.__new__(CyclotomicNumber)
    obj.conductor = L
    obj.coeffs = tuple(coeffs)
    return obj


def root_of_unity(L: int, a: int) -> CyclotomicNumber:
    """zeta_L ** a."""
    if L < 1:
        raise ValueError("conductor must be positive")
    return _raw(L, [Fraction(t) for t in _power_table(L)[a % L]])


def exp_2pi_i(q: Fraction) -> CyclotomicNumber:
    """exp(2*pi*i*q) for rational q, in the field of conductor denominator(q)."""
    q = as_fraction(q)
    return root_of_unity(q.denominator, q.numerator)


def to_rational(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if not x.is_rational():
        raise NotRational(f"value {x!r} is not in Q")
    return x.coeffs[0]


def sum_cyclotomic(values: Iterable) -> CyclotomicNumber | Fraction:
    """Sum values grouping by conductor, so each group is embedded once."""
    by_conductor: dict[int, CyclotomicNumber] = {}
    rational = Fraction(0)
    for v in values:
        if isinstance(v, (int, Fraction)):
            rational += v
            continue
        cur = by_conductor.get(v.conductor)
        by_conductor[v.conductor] = v if cur is None else cur + v
    if not by_conductor:
        return CyclotomicNumber.from_rational(rational)
    M = lcm(*by_conductor)
    total = CyclotomicNumber.from_rational(rational, M)
    for v in by_conductor.values():
        total = total + v.embed(M)
    return total


# ---------------------------------------------------------------------------
# Power sums and rational series
# ---------------------------------------------------------------------------


def _rising_coeffs(j: int) -> list[int]:
    """Integer coefficients (in k) of (k+1)(k+2)...(k+j)."""
    poly = [1]
    for m in range(1, j + 1):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += m * c
            nxt[i + 1] += c
        poly = nxt
    return poly


@lru_cache(maxsize=None)
def _power_sum_numerator(j: int) -> Polynomial:
    """N_j with sum_{k>=1} k^j x^k = N_j(x) / (1-x)^(j+1)."""
    one_minus_x = Polynomial([Fraction(1), Fraction(-1)])
    # j! * (1/(1-x)^(j+1) - 1) = sum_{k>=1} (k+1)...(k+j) x^k
    #                          = S_j + sum_{l<j} c_l S_l
    rising = _rising_coeffs(j)
    num = (Polynomial([Fraction(1)]) - one_minus_x ** (j + 1)) * factorial(j)
    for ell in range(j):
        c = rising[ell]
        if c:
            num = num - _power_sum_numerator(ell) * (one_minus_x ** (j - ell)) * c
    return num


def power_sum_model(j: int, c=1) -> tuple[Polynomial, int]:
    """(p_j, j+1) with sum_{k>=1} k^j (c z)^k = p_j(z) / (1 - c z)^(j+1)."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    return _power_sum_numerator(j).substitute_scaled(c), j + 1


class RationalSeriesModel:
    """numerator(z) / (1 - z^period)^order with deg numerator < period*order."""

    __slots__ = ("numerator", "period", "order")

    def __init__(self, numerator: Polynomial | Sequence, period: int, order: int):
        if not isinstance(numerator, Polynomial):
            numerator = Polynomial(numerator)
        if period < 1 or order < 1:
            raise ValidationError("period and order must be positive")
        if numerator.degree >= period * order:
            raise ValidationError(
                f"numerator degree {numerator.degree} >= period*order = {period * order}"
            )
        self.numerator = numerator
        self.period = period
        self.order = order

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSeriesModel):
            return NotImplemented
        return (self.period, self.order) == (other.period, other.order) and self.numerator == other.numerator

    __hash__ = None

    def __repr__(self) -> str:
        return f"RationalSeriesModel(numerator={list(self.numerator)!r}, period={self.period}, order={self.order})"

    def coefficient(self, index: int):
        N, s = self.period, self.order
        m, j = divmod(index, N)
        acc = 0
        for h in range(min(s - 1, m) + 1):
            b = self.numerator[h * N + j]
            if not _is_zero(b):
                acc = acc + b * comb(m - h + s - 1, s - 1)
        return acc


def series_coefficients(model: RationalSeriesModel, upto: int) -> list:
    """Coefficients of z^0 .. z^upto (inclusive)."""
    return [model.coefficient(k) for k in range(upto + 1)]


def fit_numerator(series: Sequence, N: int, s: int) -> RationalSeriesModel:
    """Recover the numerator by multiplying the series by (1 - z^N)^s.

    All product coefficients of degree >= N*s inside the window must vanish;
    otherwise the sequence has no such model and NotRepresentable is raised.
    """
    n = len(series)
    if n < 2 * N * s:
        raise ValidationError(f"need at least {2 * N * s} terms, got {n}")
    weights = [(h * N, (-1) ** h * comb(s, h)) for h in range(s + 1)]
    product = []
    for i in range(n):
        acc = 0
        for shift, w in weights:
            if shift > i:
                break
            acc = acc + series[i - shift] * w
        product.append(acc)
    for i in range(N * s, n):
        if not _is_zero(product[i]):
            raise NotRepresentable(
                f"sequence is not generated over (1-z^{N})^{s}: product coefficient {i} is {product[i]}"
            )
    return RationalSeriesModel(Polynomial(product[: N * s]), N, s)


# ---------------------------------------------------------------------------
# Small exact linear algebra over Q
# ---------------------------------------------------------------------------


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    a = [[as_fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def inverse_matrix(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    a = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise Singular("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve matrix @ x = rhs exactly; rhs entries may be any field elements."""
    inv = inverse_matrix(matrix)
    out = []
    for row in inv:
        acc = 0
        for w, b in zip(row, rhs):
            if w:
                acc = acc + b * w
        out.append(acc)
    return out


def rank(vectors: Sequence[Sequence]) -> int:
    a = [[as_fraction(x) for x in v] for v in vectors]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r
