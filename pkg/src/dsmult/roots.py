"""Root systems with a compact/noncompact coloring, and their Weyl groups.

Vectors live in a fixed rational coordinate frame; the pairing is
``<x, y> = x^T G y`` for the stored gram matrix ``G``. Weyl group elements
are stored as exact matrices acting on column vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidRootSystem, NoSuchElement
from .exact import as_fraction, determinant, rank, solve

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def vec(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def add(x: Sequence, y: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in x)


def neg(x: Sequence) -> Vector:
    return tuple(-a for a in x)


def apply(m: Matrix, x: Sequence) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def identity(r: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))


@dataclass(frozen=True)
class RootSystem:
    """A colored root system with a fixed positive system.

    Construct through :func:`load_root_system`, which validates every axiom.
    """

    rank: int
    gram: Matrix
    roots: tuple[Vector, ...]
    compact_flags: tuple[bool, ...]
    positive_indices: frozenset[int]
    name: str = ""
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        g = self.gram
        return sum((x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j]), Fraction(0))

    def index_of(self, v: Sequence) -> int | None:
        return self._index.get(tuple(v))

    def coroot_pairing(self, x: Sequence, i: int) -> Fraction:
        """2<x, a_i>/<a_i, a_i>."""
        a = self.roots[i]
        return 2 * self.pair(x, a) / self.pair(a, a)

    # root subsets ------------------------------------------------------

    @cached_property
    def positive(self) -> tuple[int, ...]:
        return tuple(sorted(self.positive_indices))

    @cached_property
    def compact(self) -> frozenset[int]:
        return frozenset(i for i, f in enumerate(self.compact_flags) if f)

    @cached_property
    def noncompact(self) -> frozenset[int]:
        return frozenset(range(len(self.roots))) - self.compact

    @cached_property
    def compact_positive(self) -> tuple[int, ...]:
        return tuple(i for i in self.positive if i in self.compact)

    @cached_property
    def noncompact_positive(self) -> tuple[int, ...]:
        return tuple(i for i in self.positive if i not in self.compact)

    def half_sum(self, indices: Iterable[int]) -> Vector:
        total = tuple(Fraction(0) for _ in range(self.rank))
        for i in indices:
            total = add(total, self.roots[i])
        return scale(Fraction(1, 2), total)

    @cached_property
    def delta(self) -> Vector:
        return self.half_sum(self.positive)

    @cached_property
    def delta_c(self) -> Vector:
        return self.half_sum(self.compact_positive)

    @cached_property
    def delta_n(self) -> Vector:
        return sub(self.delta, self.delta_c)

    @cached_property
    def dim_p(self) -> int:
        """d = |Phi_n| = dim G/K."""
        return len(self.noncompact)

    @cached_property
    def simple(self) -> tuple[int, ...]:
        """Simple roots of the fixed positive system."""
        pos = set(self.positive)
        decomposable = set()
        for i in pos:
            for j in pos:
                k = self.index_of(add(self.roots[i], self.roots[j]))
                if k is not None:
                    decomposable.add(k)
        return tuple(sorted(pos - decomposable))

    @cached_property
    def fundamental_weights(self) -> tuple[Vector, ...]:
        """Weights w_i with 2<w_i, a_j>/<a_j, a_j> = [i == j] over simple a_j."""
        simple = self.simple
        # rows: coroot functional x -> 2 <x, a_j>/<a_j,a_j> = (2/|a_j|^2) a_j^T G x
        rows = []
        for j in simple:
            a = self.roots[j]
            norm = self.pair(a, a)
            ga = apply(self.gram, a)
            rows.append([2 * c / norm for c in ga])
        weights = []
        for i in range(len(simple)):
            rhs = [Fraction(int(i == j)) for j in range(len(simple))]
            weights.append(tuple(solve(rows, rhs)))
        return tuple(weights)

    def reflection(self, i: int) -> Matrix:
        a = self.roots[i]
        norm = self.pair(a, a)
        ga = apply(self.gram, a)
        r = self.rank
        return tuple(
            tuple(Fraction(int(p == q)) - 2 * a[p] * ga[q] / norm for q in range(r)) for p in range(r)
        )

    def image_indices(self, w: Matrix, indices: Iterable[int]) -> frozenset[int]:
        out = set()
        for i in indices:
            k = self.index_of(apply(w, self.roots[i]))
            if k is None:
                raise InvalidRootSystem("matrix does not permute the roots")
            out.add(k)
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "gram": [[str(x) for x in row] for row in self.gram],
            "roots": [[str(x) for x in v] for v in self.roots],
            "compact": list(self.compact_flags),
            "positive": sorted(self.positive_indices),
        }


def _positive_definite(g: Matrix) -> bool:
    n = len(g)
    return all(determinant([row[:k] for row in g[:k]]) > 0 for k in range(1, n + 1))


def load_root_system(spec: dict | str | Path) -> RootSystem:
    """Build and validate a root system from its JSON description.

    ``spec`` may be a dict, a JSON string, or a path to a JSON file with keys
    ``rank``, ``gram``, ``roots``, ``compact``, ``positive``.
    """
    if isinstance(spec, Path) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        spec = json.loads(Path(spec).read_text())
    elif isinstance(spec, str):
        spec = json.loads(spec)
    try:
        r = int(spec["rank"])
        gram = tuple(vec(row) for row in spec["gram"])
        roots = tuple(vec(v) for v in spec["roots"])
        compact = tuple(bool(c) for c in spec["compact"])
        positive = frozenset(int(i) for i in spec["positive"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidRootSystem(f"malformed root-system description: {exc}") from exc

    if r < 1 or len(gram) != r or any(len(row) != r for row in gram):
        raise InvalidRootSystem("gram must be rank x rank")
    if any(gram[i][j] != gram[j][i] for i in range(r) for j in range(r)):
        raise InvalidRootSystem("gram is not symmetric")
    if not _positive_definite(gram):
        raise InvalidRootSystem("gram is not positive definite")
    if any(len(v) != r for v in roots):
        raise InvalidRootSystem("root of wrong length")
    if len(set(roots)) != len(roots):
        raise InvalidRootSystem("duplicate roots")
    if len(compact) != len(roots):
        raise InvalidRootSystem("one compact flag per root required")
    if any(not 0 <= i < len(roots) for i in positive):
        raise InvalidRootSystem("positive index out of range")

    index = {v: i for i, v in enumerate(roots)}
    rs = RootSystem(r, gram, roots, compact, positive, spec.get("name", ""), index)

    if any(all(x == 0 for x in v) for v in roots):
        raise InvalidRootSystem("zero vector is not a root")
    if rank(roots) != r:
        raise InvalidRootSystem("roots do not span the frame")
    for i, v in enumerate(roots):
        j = index.get(neg(v))
        if j is None:
            raise InvalidRootSystem("not closed under negation")
        if compact[i] != compact[j]:
            raise InvalidRootSystem("compact flags not negation-invariant")
    for i in range(len(roots)):
        for j in range(len(roots)):
            c = rs.coroot_pairing(roots[i], j)
            if c.denominator != 1:
                raise InvalidRootSystem("Cartan integer not integral")
        s = rs.reflection(i)
        for v in roots:
            if apply(s, v) not in index:
                raise InvalidRootSystem("not closed under reflections")
    for i, v in enumerate(roots):
        j = index[neg(v)]
        if (i in positive) == (j in positive):
            raise InvalidRootSystem("positive system must contain exactly one of each +-root")
    for i in positive:
        for j in positive:
            k = index.get(add(roots[i], roots[j]))
            if k is not None and k not in positive:
                raise InvalidRootSystem("positive system not closed under sums")
    if len(rs.noncompact) % 2:
        raise InvalidRootSystem("|Phi_n| must be even")
    return rs


# ---------------------------------------------------------------------------
# Built-in systems
# ---------------------------------------------------------------------------


def sl2_root_system() -> RootSystem:
    """SL(2,R): Phi = {+-alpha}, no compact roots, gram <alpha, alpha> = 2."""
    return load_root_system(
        {"name": "SL(2,R)", "rank": 1, "gram": [["2"]], "roots": [["1"], ["-1"]], "compact": [False, False], "positive": [0]}
    )


def su21_root_system() -> RootSystem:
    """SU(2,1): A2 in simple-root coordinates, alpha_1 compact.

    Roots in order: a1, a2, a1+a2, -a1, -a2, -a1-a2.
    """
    return load_root_system(
        {
            "name": "SU(2,1)",
            "rank": 2,
            "gram": [["2", "-1"], ["-1", "2"]],
            "roots": [["1", "0"], ["0", "1"], ["1", "1"], ["-1", "0"], ["0", "-1"], ["-1", "-1"]],
            "compact": [True, False, False, True, False, False],
            "positive": [0, 1, 2],
        }
    )


BUILTIN_ROOT_SYSTEMS = {"sl2": sl2_root_system, "su21": su21_root_system}


# ---------------------------------------------------------------------------
# Weyl groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylGroup:
    elements: tuple[Matrix, ...]
    generator_roots: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w) -> bool:
        return w in set(self.elements)


def generate_group(rs: RootSystem, generator_roots: Iterable[int]) -> WeylGroup:
    """Closure of the reflections in ``generator_roots`` under multiplication."""
    gens_idx = tuple(sorted(set(generator_roots)))
    gens = [rs.reflection(i) for i in gens_idx]
    e = identity(rs.rank)
    seen = {e: None}
    order = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                u = matmul(s, w)
                if u not in seen:
                    seen[u] = None
                    order.append(u)
                    nxt.append(u)
        frontier = nxt
    return WeylGroup(tuple(order), gens_idx)


def generate_weyl(rs: RootSystem, compact_only: bool = False) -> WeylGroup:
    """W (all reflections) or W_c (reflections in compact roots)."""
    idx = rs.compact if compact_only else range(len(rs.roots))
    return generate_group(rs, idx)


def length_and_sign(w: Matrix, rs: RootSystem) -> tuple[int, int]:
    """(l(w), det w) with l(w) = |w(-Phi+) cap Phi+|."""
    neg_pos = [rs.index_of(neg(rs.roots[i])) for i in rs.positive]
    length = len(rs.image_indices(w, neg_pos) & rs.positive_indices)
    d = determinant(w)
    return length, int(d)


def find_w0(rs: RootSystem, target: Iterable[int], weyl: WeylGroup | None = None) -> Matrix:
    """The unique w with w(Phi+) = target."""
    target = frozenset(target)
    weyl = weyl or generate_weyl(rs)
    for w in weyl:
        if rs.image_indices(w, rs.positive) == target:
            return w
    raise NoSuchElement("target is not a chamber of the root system")


def chamber_of(rs: RootSystem, lam: Sequence) -> frozenset[int]:
    """P^lambda = {a : <lambda, a> > 0}."""
    return frozenset(i for i, a in enumerate(rs.roots) if rs.pair(lam, a) > 0)


def is_regular(rs: RootSystem, lam: Sequence) -> bool:
    return all(rs.pair(lam, a) != 0 for a in rs.roots)


def is_integral(rs: RootSystem, lam: Sequence) -> bool:
    """2<lambda - delta, a>/<a, a> is an integer for every root a."""
    shifted = sub(lam, rs.delta)
    return all(rs.coroot_pairing(shifted, i).denominator == 1 for i in range(len(rs.roots)))


def chamber_basis(rs: RootSystem, sigma_plus: Iterable[int], search_radius: int = 12) -> list[Vector]:
    """``rank`` linearly independent integral regular forms with chamber ``sigma_plus``.

    Scans integer combinations of fundamental weights by growing box size.
    """
    sigma_plus = frozenset(sigma_plus)
    find_w0(rs, sigma_plus)  # raises unless sigma_plus is a chamber
    weights = rs.fundamental_weights
    found: list[Vector] = []
    for radius in range(1, search_radius + 1):
        for coeffs in product(range(-radius, radius + 1), repeat=rs.rank):
            if max(abs(c) for c in coeffs) != radius:
                continue
            lam = tuple(Fraction(0) for _ in range(rs.rank))
            for c, w in zip(coeffs, weights):
                lam = add(lam, scale(c, w))
            if not is_regular(rs, lam) or chamber_of(rs, lam) != sigma_plus:
                continue
            if rank(found + [lam]) == len(found) + 1:
                found.append(lam)
                if len(found) == rs.rank:
                    return found
    raise NoSuchElement("no basis found within the search radius")  # pragma: no cover
