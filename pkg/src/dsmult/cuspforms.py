"""Cusp forms on cocompact Fuchsian groups and holomorphic discrete series of SL(2,R).

Weights are split over two strings of parameters (in units of the root alpha):

* even weight 2i  <->  -1/2 - i   (string with base -1/2, direction -1)
* odd weight 2i+1 <->  -1 - i     (string with base -1, direction -1)

so weight k corresponds to -(k+1)/2 alpha, and each string is indexed by
i >= 1 for weights k >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UnqualifiedF, ValidationError
from .exact import RationalSeriesModel, fit_numerator, lcm
from .params import in_D, in_Dstar
from .roots import Vector, sl2_root_system
from .solver import minimal_sampling_set, reconstruct, starving_residue

S_SL2 = 2  # |Phi+| + 1 for SL(2,R)


@dataclass(frozen=True)
class FuchsianSignature:
    genus: int
    periods: tuple[int, ...]
    contains_minus_one: bool = True

    def __post_init__(self):
        if self.genus < 0 or any(e < 2 for e in self.periods):
            raise ValidationError("genus must be >= 0 and periods >= 2")
        if self.orbifold_euler_characteristic() >= 0:
            raise ValidationError("signature is not hyperbolic")
        if not self.contains_minus_one and any(e % 2 == 0 for e in self.periods):
            # an even period lifts to an element whose power is -I
            raise ValidationError("a group without -I has only odd periods")

    def orbifold_euler_characteristic(self) -> Fraction:
        """2 - 2g - sum(1 - 1/e); negative for hyperbolic signatures."""
        return 2 - 2 * self.genus - sum((1 - Fraction(1, e) for e in self.periods), Fraction(0))

    @classmethod
    def parse(cls, text: str, minus_one: bool = True) -> "FuchsianSignature":
        """Parse "g;e1,e2,..."."""
        try:
            g, _, rest = text.partition(";")
            periods = tuple(int(x) for x in rest.split(",") if x.strip())
            return cls(int(g), periods, minus_one)
        except ValueError as exc:
            raise ValidationError(f"bad signature {text!r}: {exc}") from exc

    def __str__(self) -> str:
        return f"({self.genus};{','.join(map(str, self.periods))}){'' if self.contains_minus_one else ' without -I'}"


def fuchsian_dim(sig: FuchsianSignature, k: int) -> int:
    """dim S_k for a cocompact group with the given signature, k >= 2.

    Riemann-Roch on the quotient curve: an automorphic form of weight k has
    divisor of degree k(g-1) + sum k(e-1)/(2e); the integral part of the
    local orders gives a line bundle of degree
    k(g-1) + sum floor(k(e-1)/(2e)), which exceeds 2g-2 for k >= 3, so
    dim = deg - g + 1. Weight 2 gives the holomorphic differentials, dim g.
    For odd k the same count holds when -I is absent (odd periods only);
    when -I is present every odd-weight form vanishes.
    """
    if k < 2:
        raise ValidationError("weights start at 2")
    if k % 2 and sig.contains_minus_one:
        return 0
    if k == 2:
        return sig.genus
    return (k - 1) * (sig.genus - 1) + sum(k * (e - 1) // (2 * e) for e in sig.periods)


def max_elliptic_order(sig: FuchsianSignature) -> int:
    """lcm of element orders in the SL(2,R) preimage.

    With -I a period e lifts to order 2e; without -I periods are odd and lift
    to order e.
    """
    if sig.contains_minus_one:
        return lcm(2, *(2 * e for e in sig.periods))
    return lcm(1, *sig.periods)


def sl2_param_of_weight(k: int) -> Vector:
    """-(k+1)/2 alpha in the coordinate frame where alpha = (1)."""
    if k < 2:
        raise ValidationError("weights start at 2")
    return (Fraction(-(k + 1), 2),)


STRINGS = {
    "even": ((Fraction(-1, 2),), (Fraction(-1),)),
    "odd": ((Fraction(-1),), (Fraction(-1),)),
}


def weight_to_member(k: int) -> tuple[str, int]:
    if k < 2:
        raise ValidationError("weights start at 2")
    return ("even", k // 2) if k % 2 == 0 else ("odd", (k - 1) // 2)


def member_to_weight(string: str, i: int) -> int:
    return 2 * i if string == "even" else 2 * i + 1


def weight_sequence(sig: FuchsianSignature, string: str, n: int) -> list[int]:
    """dim S_k along one string for members i = 1 .. n, re-indexed from 0."""
    return [fuchsian_dim(sig, member_to_weight(string, i)) for i in range(1, n + 1)]


def fit_weight_sequence(sig: FuchsianSignature, string: str, N: int | None = None, s: int = S_SL2) -> RationalSeriesModel:
    """Fit dim S_k along one string over (1 - z^N)^s, using 3Ns terms."""
    N = N or max_elliptic_order(sig)
    return fit_numerator(weight_sequence(sig, string, 3 * N * s), N, s)


def qualifying_weights(N: int, s: int = S_SL2) -> list[int]:
    """Smallest weights whose member indices qualify per string (i >= 1)."""
    out = []
    for string in ("even", "odd"):
        out.extend(member_to_weight(string, p + 1) for p in minimal_sampling_set(N, s))
    return sorted(out)


def _split(F: Iterable[int]) -> dict[str, list[int]]:
    """Sequence positions i - 1 of the weights in F, per string."""
    parts: dict[str, list[int]] = {"even": [], "odd": []}
    for k in sorted(set(F)):
        string, i = weight_to_member(k)
        parts[string].append(i - 1)
    return parts


@dataclass(frozen=True)
class DeterminationVerdict:
    status: str  # "agree", "disagree", "prediction-mismatch"
    weight: int | None = None
    detail: str = ""


def verify_finite_determination(
    sig_a: FuchsianSignature,
    sig_b: FuchsianSignature,
    F: Sequence[int],
    horizon: int = 500,
    s: int = S_SL2,
) -> DeterminationVerdict:
    """Determine dim S_k for k <= horizon from the weights in F.

    Dimensions on F are compared first; if they agree, each string is
    reconstructed from its part of F and compared with the oracle for both
    signatures at every weight up to the horizon.
    """
    N = lcm(max_elliptic_order(sig_a), max_elliptic_order(sig_b))
    parts = _split(F)
    for string, idx in parts.items():
        j = starving_residue(idx, N, s)
        if j is not None:
            raise UnqualifiedF(f"{string} string: residue class {j} mod {N} has fewer than {s} weights in F")
    for k in sorted(set(F)):
        a, b = fuchsian_dim(sig_a, k), fuchsian_dim(sig_b, k)
        if a != b:
            return DeterminationVerdict("disagree", k, f"dim S_{k}: {a} vs {b}")
    for string, idx in parts.items():
        predictor = reconstruct({p: fuchsian_dim(sig_a, member_to_weight(string, p + 1)) for p in idx}, N, s)
        for i in range(1, horizon // 2 + 1):
            k = member_to_weight(string, i)
            if k > horizon:
                break
            predicted = predictor.evaluate(i - 1)
            for sig in (sig_a, sig_b):
                actual = fuchsian_dim(sig, k)
                if predicted != actual:
                    return DeterminationVerdict("prediction-mismatch", k, f"{sig}: predicted {predicted}, oracle {actual}")
    return DeterminationVerdict("agree", None, f"dim S_k agree for all 2 <= k <= {horizon}")


def sl2_D_minus_Dstar(bound: int = 50) -> list[Fraction]:
    """Coefficients x (lambda = x alpha, |x| <= bound) with lambda in D but not D*."""
    rs = sl2_root_system()
    out = []
    for twice in range(-2 * bound, 2 * bound + 1):
        lam = (Fraction(twice, 2),)
        if in_D(rs, lam) and not in_Dstar(rs, lam):
            out.append(lam[0])
    return out

