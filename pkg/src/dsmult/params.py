"""Harish-Chandra parameters, the D(G) and D*(G) predicates, and strings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ChamberMismatch, ValidationError
from .exact import rank
from .roots import (
    RootSystem,
    Vector,
    add,
    apply,
    chamber_of,
    generate_weyl,
    is_integral,
    is_regular,
    scale,
    sub,
    vec,
)


def delta_of_chamber(rs: RootSystem, lam: Sequence) -> Vector:
    """delta^lambda, the half sum of the roots positive on lambda."""
    return rs.half_sum(sorted(chamber_of(rs, lam)))


def in_D(rs: RootSystem, lam: Sequence) -> bool:
    """Integral, regular, and positive on every compact positive root."""
    lam = vec(lam)
    if len(lam) != rs.rank or not is_regular(rs, lam) or not is_integral(rs, lam):
        return False
    return all(rs.pair(lam, rs.roots[i]) > 0 for i in rs.compact_positive)


def in_Dstar(rs: RootSystem, lam: Sequence) -> bool:
    """In D(G) and <lambda - delta^lambda, a> > 0 on noncompact roots of P^lambda."""
    lam = vec(lam)
    if not in_D(rs, lam):
        return False
    shifted = sub(lam, delta_of_chamber(rs, lam))
    chamber = chamber_of(rs, lam)
    return all(rs.pair(shifted, rs.roots[i]) > 0 for i in chamber if i in rs.noncompact)


def satisfies_tv_estimate(rs: RootSystem, lam: Sequence) -> bool:
    """|<l, b>| > 1/2 sum_{a in P^l} |<a, b>| for every noncompact b in P^l."""
    lam = vec(lam)
    chamber = sorted(chamber_of(rs, lam))
    for b in chamber:
        if b not in rs.noncompact:
            continue
        beta = rs.roots[b]
        bound = sum((abs(rs.pair(rs.roots[a], beta)) for a in chamber), Fraction(0)) / 2
        if not abs(rs.pair(lam, beta)) > bound:
            return False
    return True


def _require_D(rs: RootSystem, lam: Vector, what: str) -> None:
    if not in_D(rs, lam):
        raise ValidationError(f"{what} {[str(x) for x in lam]} is not a Harish-Chandra parameter")


@dataclass(frozen=True)
class StringSpec:
    """The parameters base + k * direction, k >= 0."""

    rs: RootSystem
    base: Vector
    direction: Vector
    base_in_dstar: bool
    direction_in_dstar: bool

    @property
    def qualifies(self) -> bool:
        """Every member with k >= 1 lies in D*(G)."""
        return self.base_in_dstar or self.direction_in_dstar

    @property
    def chamber(self) -> frozenset[int]:
        return chamber_of(self.rs, self.base)

    def member(self, k: int) -> Vector:
        if k < 0:
            raise ValidationError("string members are indexed by k >= 0")
        return add(self.base, scale(k, self.direction))


def make_string(rs: RootSystem, base: Sequence, direction: Sequence) -> StringSpec:
    base, direction = vec(base), vec(direction)
    _require_D(rs, base, "base")
    _require_D(rs, direction, "direction")
    if chamber_of(rs, base) != chamber_of(rs, direction):
        raise ChamberMismatch("base and direction lie in different chambers; translate by W first")
    return StringSpec(rs, base, direction, in_Dstar(rs, base), in_Dstar(rs, direction))


def wc_orbit(rs: RootSystem, lam: Sequence, weyl_c=None) -> frozenset[Vector]:
    weyl_c = weyl_c or generate_weyl(rs, compact_only=True)
    return frozenset(apply(w, lam) for w in weyl_c)


def string_members_inequivalent(s: StringSpec, upto: int) -> bool:
    """No two members with index <= upto are W_c-conjugate."""
    weyl_c = generate_weyl(s.rs, compact_only=True)
    seen: set[Vector] = set()
    for k in range(upto + 1):
        orbit = wc_orbit(s.rs, s.member(k), weyl_c)
        if seen & orbit:
            return False
        seen |= orbit
    return True


def exhaustion_witness(rs: RootSystem, lam1: Sequence, lam2: Sequence, max_m: int = 10_000) -> tuple[int, Vector]:
    """Smallest m >= 1 with m*lam1 - lam2 in D*(G) and in the common chamber."""
    lam1, lam2 = vec(lam1), vec(lam2)
    if not in_Dstar(rs, lam1):
        raise ValidationError("lam1 must lie in D*(G)")
    chamber = chamber_of(rs, lam1)
    if chamber != chamber_of(rs, lam2):
        raise ChamberMismatch("lam1 and lam2 lie in different chambers")
    if rank([lam1, lam2]) < 2:
        raise ValidationError("lam1 and lam2 must be linearly independent")
    for m in range(1, max_m + 1):
        mu = sub(scale(m, lam1), lam2)
        if chamber_of(rs, mu) == chamber and in_Dstar(rs, mu):
            return m, mu
    raise ValidationError(f"no witness with m <= {max_m}")  # pragma: no cover


@dataclass(frozen=True)
class MultiStringSpec:
    """Parameters sum_i k_i * direction_i for k in N^n minus the origin."""

    rs: RootSystem
    directions: tuple[Vector, ...]

    @property
    def n(self) -> int:
        return len(self.directions)

    def member(self, ks: Sequence[int]) -> Vector:
        if len(ks) != self.n or any(k < 0 for k in ks):
            raise ValidationError("multi-index must be a vector of nonnegative integers of length n")
        total = tuple(Fraction(0) for _ in range(self.rs.rank))
        for k, d in zip(ks, self.directions):
            total = add(total, scale(k, d))
        return total


def make_multistring(rs: RootSystem, directions: Iterable[Sequence]) -> MultiStringSpec:
    dirs = tuple(vec(d) for d in directions)
    if not dirs:
        raise ValidationError("at least one direction required")
    for d in dirs:
        _require_D(rs, d, "direction")
    chamber = chamber_of(rs, dirs[0])
    if any(chamber_of(rs, d) != chamber for d in dirs):
        raise ChamberMismatch("directions lie in different chambers")
    if not any(in_Dstar(rs, d) for d in dirs):
        raise ValidationError("at least one direction must lie in D*(G)")
    return MultiStringSpec(rs, dirs)


def random_integral_regular(rs: RootSystem, rng: random.Random, bound: int = 6) -> Vector:
    """A random integral regular form delta + sum n_i w_i with |n_i| <= bound."""
    while True:
        lam = rs.delta
        for w in rs.fundamental_weights:
            lam = add(lam, scale(rng.randint(-bound, bound), w))
        if is_regular(rs, lam):
            return lam
