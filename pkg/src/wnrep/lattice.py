"""Exact weight-lattice combinatorics.

Weights are vectors of rationals (eigenvalues of the commuting operators
x_i d_i), roots of the vector-field algebra are monomial labels x^a d_j,
shadows are four-way partitions of the gl(n) root set, and supports are
finite unions of axis-aligned shifted cones.  Everything is immutable and
all arithmetic is over Fraction; no floats anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, UnsupportedCaseError, ValidationError

Scalar = Fraction


def frac(x) -> Fraction:
    """Coerce ints, strings like "1/2", and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValidationError(f"not an exact rational: {x!r}")


class Weight:
    """A point of the weight space: a length-n vector of exact rationals."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords = tuple(frac(c) for c in coords)

    @staticmethod
    def zero(n: int) -> "Weight":
        return Weight([0] * n)

    @property
    def n(self) -> int:
        return len(self.coords)

    def _check(self, other: "Weight") -> None:
        if len(self.coords) != len(other.coords):
            raise DimensionError(
                f"weight length {len(self.coords)} vs {len(other.coords)}"
            )

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Weight":
        return Weight(-a for a in self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, Weight) and self.coords == other.coords

    def __lt__(self, other: "Weight") -> bool:
        return self.coords < other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def weight_add(a: Weight, b: Weight) -> Weight:
    """Coordinate-wise sum; raises DimensionError on length mismatch."""
    return a + b


def eps(i: int, n: int) -> Weight:
    """The i-th coordinate weight (0-based index)."""
    return Weight([1 if k == i else 0 for k in range(n)])


# ---------------------------------------------------------------------------
# Roots


@dataclass(frozen=True, order=True)
class WnRoot:
    """The root vector x^alpha d_j of the vector-field algebra.

    Its weight is alpha - eps_j and its degree is |alpha| - 1.  Indices are
    0-based.
    """

    alpha: tuple
    j: int

    def __post_init__(self):
        if any(a < 0 for a in self.alpha):
            raise ValidationError("multi-index must be nonnegative")
        if not 0 <= self.j < len(self.alpha):
            raise ValidationError("direction index out of range")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def degree(self) -> int:
        return sum(self.alpha) - 1

    def weight(self) -> Weight:
        return Weight(
            [a - (1 if k == self.j else 0) for k, a in enumerate(self.alpha)]
        )

    def __repr__(self) -> str:
        xs = "".join(f"x{k}^{a}" for k, a in enumerate(self.alpha) if a)
        return f"{xs or '1'}*d{self.j}"


def wn_roots_up_to(n: int, max_degree: int) -> list:
    """All root vectors x^alpha d_j with |alpha| - 1 <= max_degree, in
    lexicographic (alpha, j) order."""
    if max_degree < -1:
        raise ValidationError("max_degree must be >= -1")
    out = []
    for total in range(0, max_degree + 2):
        for alpha in compositions(total, n):
            for j in range(n):
                out.append(WnRoot(alpha, j))
    return out


def compositions(total: int, n: int) -> Iterator[tuple]:
    """Nonnegative integer vectors of length n summing to total, lex order."""
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, n - 1):
            yield (first,) + rest


def gl_roots(n: int) -> tuple:
    """Roots eps_i - eps_j of gl(n) as ordered pairs (i, j), i != j."""
    return tuple((i, j) for i in range(n) for j in range(n) if i != j)


# ---------------------------------------------------------------------------
# Shadows


@dataclass(frozen=True)
class Shadow:
    """Partition of the gl(n) roots into finite / injective / raising /
    lowering parts, recording how root vectors act on a weight module."""

    n: int
    f_set: frozenset
    i_set: frozenset
    plus: frozenset
    minus: frozenset

    def __post_init__(self):
        allr = set(gl_roots(self.n))
        parts = [self.f_set, self.i_set, self.plus, self.minus]
        if set().union(*parts) != allr or sum(map(len, parts)) != len(allr):
            raise ValidationError("shadow parts must partition the root set")
        if {(j, i) for i, j in self.minus} != set(self.plus):
            raise ValidationError("minus part must be the negative of plus")
        if {(j, i) for i, j in self.f_set} != set(self.f_set):
            raise ValidationError("finite part must be symmetric")
        if {(j, i) for i, j in self.i_set} != set(self.i_set):
            raise ValidationError("injective part must be symmetric")


def shadow_from_isets(n: int, iplus: Iterable[int], izero: Iterable[int],
                      iminus: Iterable[int]) -> Shadow:
    """Shadow of a simple weight module of the Weyl algebra, from the index
    sets recording where x_i, d_i act locally nilpotently / injectively.

    All of {0..n-1} must be covered exactly once.
    """
    ip, iz, im = set(iplus), set(izero), set(iminus)
    if ip | iz | im != set(range(n)) or len(ip) + len(iz) + len(im) != n:
        raise ValidationError("index sets must partition {0..n-1}")
    f_set, i_set, plus, minus = set(), set(), set(), set()
    for i, j in gl_roots(n):
        if i in iz and j in iz:
            i_set.add((i, j))
        elif (i in ip and j in ip) or (i in im and j in im):
            f_set.add((i, j))
        elif (i in ip and j not in ip) or (i not in im and j in im):
            minus.add((i, j))
        else:
            plus.add((i, j))
    return Shadow(n, frozenset(f_set), frozenset(i_set), frozenset(plus),
                  frozenset(minus))


def all_finite_shadow(n: int) -> Shadow:
    """Shadow of a finite-dimensional module: every root acts locally
    finitely."""
    return Shadow(n, frozenset(gl_roots(n)), frozenset(), frozenset(),
                  frozenset())


def negate_shadow(s: Shadow) -> Shadow:
    """Shadow of the restricted dual: raising and lowering swap."""
    return Shadow(s.n, s.f_set, s.i_set, s.minus, s.plus)


def finmult_criterion(shadow_p: Shadow, shadow_v: Shadow) -> bool:
    """Whether the tensor module built on modules with these shadows has
    finite weight multiplicities: the injective-plus-lowering part of the
    first must land in the finite-plus-lowering part of the second."""
    if shadow_p.n != shadow_v.n:
        raise DimensionError("shadows over different gl(n)")
    left = shadow_p.i_set | shadow_p.minus
    right = shadow_v.f_set | shadow_v.minus
    return left <= right


# ---------------------------------------------------------------------------
# Supports


class Mode(Enum):
    """Per-coordinate shape of a shifted cone."""

    POINT = "point"
    NONNEG = "nonneg"
    NONPOS = "nonpos"
    FULL = "full"


_JOIN = {
    (Mode.POINT, Mode.POINT): Mode.POINT,
    (Mode.POINT, Mode.NONNEG): Mode.NONNEG,
    (Mode.POINT, Mode.NONPOS): Mode.NONPOS,
    (Mode.POINT, Mode.FULL): Mode.FULL,
    (Mode.NONNEG, Mode.NONNEG): Mode.NONNEG,
    (Mode.NONNEG, Mode.NONPOS): Mode.FULL,
    (Mode.NONNEG, Mode.FULL): Mode.FULL,
    (Mode.NONPOS, Mode.NONPOS): Mode.NONPOS,
    (Mode.NONPOS, Mode.FULL): Mode.FULL,
    (Mode.FULL, Mode.FULL): Mode.FULL,
}


def join_modes(a: Mode, b: Mode) -> Mode:
    return _JOIN.get((a, b)) or _JOIN[(b, a)]


@dataclass(frozen=True)
class ShiftedCone:
    """Product over coordinates of {base_i}, base_i + Z>=0, base_i + Z<=0,
    or base_i + Z, according to the mode vector."""

    base: Weight
    modes: tuple

    def __post_init__(self):
        if len(self.base) != len(self.modes):
            raise DimensionError("base and modes length mismatch")

    @property
    def n(self) -> int:
        return len(self.base)

    def contains(self, w: Weight) -> bool:
        if len(w) != self.n:
            raise DimensionError("weight in wrong ambient dimension")
        for wi, bi, m in zip(w, self.base, self.modes):
            d = wi - bi
            if m is Mode.POINT:
                if d != 0:
                    return False
            else:
                if d.denominator != 1:
                    return False
                if m is Mode.NONNEG and d < 0:
                    return False
                if m is Mode.NONPOS and d > 0:
                    return False
        return True

    def shift(self, w: Weight) -> "ShiftedCone":
        return ShiftedCone(self.base + w, self.modes)

    def minkowski(self, other: "ShiftedCone") -> "ShiftedCone":
        return ShiftedCone(
            self.base + other.base,
            tuple(join_modes(a, b) for a, b in zip(self.modes, other.modes)),
        )

    def negate(self) -> "ShiftedCone":
        flip = {Mode.NONNEG: Mode.NONPOS, Mode.NONPOS: Mode.NONNEG}
        return ShiftedCone(-self.base,
                           tuple(flip.get(m, m) for m in self.modes))

    def canonical(self) -> "ShiftedCone":
        # FULL coordinates only see the base mod 1
        base = [
            b - b.__floor__() if m is Mode.FULL else b
            for b, m in zip(self.base, self.modes)
        ]
        return ShiftedCone(Weight(base), self.modes)

    def subset_of(self, other: "ShiftedCone") -> bool:
        """Exact coordinate-wise containment test."""
        for b, m, c, mo in zip(self.base, self.modes, other.base, other.modes):
            d = b - c
            integral = d.denominator == 1
            if m is Mode.POINT:
                ok = (
                    (mo is Mode.POINT and d == 0)
                    or (mo is Mode.NONNEG and integral and d >= 0)
                    or (mo is Mode.NONPOS and integral and d <= 0)
                    or (mo is Mode.FULL and integral)
                )
            elif m is Mode.NONNEG:
                ok = (mo is Mode.NONNEG and integral and d >= 0) or (
                    mo is Mode.FULL and integral)
            elif m is Mode.NONPOS:
                ok = (mo is Mode.NONPOS and integral and d <= 0) or (
                    mo is Mode.FULL and integral)
            else:
                ok = mo is Mode.FULL and integral
            if not ok:
                return False
        return True

    def is_finite(self) -> bool:
        return all(m is Mode.POINT for m in self.modes)


class SupportSet:
    """Finite union of shifted cones; the exact description of the weight
    support of every module family in this package."""

    __slots__ = ("n", "cones")

    def __init__(self, n: int, cones: Iterable[ShiftedCone] = ()):
        self.n = n
        seen, kept = set(), []
        for c in cones:
            if c.n != n:
                raise DimensionError("cone in wrong ambient dimension")
            cc = c.canonical()
            if cc not in seen:
                seen.add(cc)
                kept.append(cc)
        # drop cones swallowed by another cone (equal sets have equal
        # canonical forms, so containment here is strict)
        pruned = [
            c for c in kept
            if not any(d is not c and c.subset_of(d) for d in kept)
        ]
        self.cones = tuple(sorted(
            pruned, key=lambda c: (tuple(c.base), tuple(m.value for m in c.modes))
        ))

    @staticmethod
    def single(base: Weight, modes: Sequence[Mode]) -> "SupportSet":
        return SupportSet(len(base), [ShiftedCone(base, tuple(modes))])

    @staticmethod
    def points(ws: Iterable[Weight]) -> "SupportSet":
        ws = list(ws)
        if not ws:
            raise ValidationError("empty point list has no ambient dimension")
        n = len(ws[0])
        return SupportSet(
            n, [ShiftedCone(w, (Mode.POINT,) * n) for w in ws]
        )

    def contains(self, w: Weight) -> bool:
        return any(c.contains(w) for c in self.cones)

    def is_empty(self) -> bool:
        return not self.cones

    def shift(self, w: Weight) -> "SupportSet":
        return SupportSet(self.n, [c.shift(w) for c in self.cones])

    def negate(self) -> "SupportSet":
        return SupportSet(self.n, [c.negate() for c in self.cones])

    def union(self, other: "SupportSet") -> "SupportSet":
        if self.n != other.n:
            raise DimensionError("supports in different dimensions")
        return SupportSet(self.n, self.cones + other.cones)

    def __add__(self, other: "SupportSet") -> "SupportSet":
        """Exact Minkowski sum via the per-coordinate mode join."""
        if self.n != other.n:
            raise DimensionError("supports in different dimensions")
        return SupportSet(
            self.n,
            [a.minkowski(b) for a in self.cones for b in other.cones],
        )

    def subset_of(self, other: "SupportSet") -> bool:
        """Exact inclusion.  Decides each cone against single cones of the
        other side, falling back to point enumeration for finite cones;
        raises UnsupportedCaseError when a genuinely joint covering would be
        required."""
        for c in self.cones:
            if any(c.subset_of(d) for d in other.cones):
                continue
            if c.is_finite():
                if other.contains(c.base):
                    continue
                return False
            # not inside any single cone: certain failure needs a witness
            if not other.contains(c.base):
                return False
            raise UnsupportedCaseError(
                "support inclusion needs a multi-cone covering argument"
            )
        return True

    def equals(self, other: "SupportSet") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, SupportSet) and self.cones == other.cones

    def __hash__(self):
        return hash((self.n, self.cones))

    def __repr__(self) -> str:
        sym = {Mode.POINT: ".", Mode.NONNEG: "+", Mode.NONPOS: "-",
               Mode.FULL: "*"}
        parts = [
            repr(c.base) + "".join(sym[m] for m in c.modes)
            for c in self.cones
        ]
        return "Support{" + " u ".join(parts) + "}"


def support_sum(a: SupportSet, b: SupportSet) -> SupportSet:
    return a + b


def support_contains(s: SupportSet, w: Weight) -> bool:
    return s.contains(w)


# ---------------------------------------------------------------------------
# Windows


def _ceil_to_coset(lo: Fraction, base: Fraction) -> Fraction:
    """Smallest element of base + Z that is >= lo."""
    d = lo - base
    k = d.__ceil__()
    return base + k


@dataclass(frozen=True)
class Window:
    """Per-coordinate closed interval of rationals plus an interior margin
    used when reporting results that are unreliable near the boundary."""

    lows: tuple
    highs: tuple
    margin: int = 0

    def __post_init__(self):
        if len(self.lows) != len(self.highs):
            raise DimensionError("window bounds length mismatch")
        if any(lo > hi for lo, hi in zip(self.lows, self.highs)):
            raise ValidationError("window interval with lo > hi")
        if self.margin < 0:
            raise ValidationError("interior margin must be nonnegative")

    @staticmethod
    def radius(n: int, r, margin: int = 0) -> "Window":
        r = frac(r)
        return Window(tuple([-r] * n), tuple([r] * n), margin)

    @property
    def n(self) -> int:
        return len(self.lows)

    def contains(self, w: Weight, interior: bool = False) -> bool:
        m = self.margin if interior else 0
        return all(
            lo + m <= wi <= hi - m
            for wi, lo, hi in zip(w, self.lows, self.highs)
        )

    def coset_values(self, i: int, base: Fraction) -> Iterator[Fraction]:
        """Values of base + Z inside the i-th interval, increasing."""
        v = _ceil_to_coset(self.lows[i], base)
        while v <= self.highs[i]:
            yield v
            v += 1

    def coset_points(self, base: Weight) -> Iterator[Weight]:
        """All points of base + Z^n inside the window, lex order."""
        axes = [list(self.coset_values(i, base[i])) for i in range(self.n)]
        for coords in itertools.product(*axes):
            yield Weight(coords)
