"""Explicit gl(n) weight modules.

Finite-dimensional constructions (exterior powers, symmetric powers,
characters, duals, tensor products) carry a literal basis; infinite
weight modules enter exclusively as eigenspace restrictions of Weyl-algebra
modules, where E_ij acts as x_i d_j on labels.  Every module exposes the
same small interface: weights, E_ij action on a label, label enumeration,
and a shadow when one is defined.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import List, Optional, Tuple

from .dmod import DModule, FactorKind
from .errors import (
    DimensionError,
    EmptyModuleError,
    UnsupportedCaseError,
    ValidationError,
)
from .lattice import (
    Mode,
    Shadow,
    SupportSet,
    Weight,
    Window,
    all_finite_shadow,
    frac,
    negate_shadow,
)

ActionTerms = List[Tuple[object, Fraction]]


class GlModule:
    """Common interface; concrete constructions subclass this."""

    n: int
    finite_dim: bool

    def labels(self) -> list:
        raise UnsupportedCaseError("module has no finite label list")

    def dim(self) -> int:
        return len(self.labels())

    def weight(self, label) -> Weight:
        raise NotImplementedError

    def act(self, i: int, j: int, label) -> ActionTerms:
        """E_ij applied to a basis label, as (label, coeff) terms."""
        raise NotImplementedError

    def labels_of_weight(self, mu: Weight) -> list:
        return [l for l in self.labels() if self.weight(l) == mu]

    def labels_in_window(self, window: Window) -> list:
        return [l for l in self.labels() if window.contains(self.weight(l))]

    def support(self) -> SupportSet:
        return SupportSet.points([self.weight(l) for l in self.labels()])

    def shadow(self) -> Optional[Shadow]:
        return all_finite_shadow(self.n) if self.finite_dim else None

    def weight_multiset(self) -> list:
        return sorted(self.weight(l).coords for l in self.labels())

    def act_vector(self, i: int, j: int, vec: dict) -> dict:
        out: dict = {}
        for label, c in vec.items():
            for lab2, c2 in self.act(i, j, label):
                acc = out.get(lab2, Fraction(0)) + c * c2
                if acc:
                    out[lab2] = acc
                else:
                    out.pop(lab2, None)
        return out


class WedgeModule(GlModule):
    """k-th exterior power of the natural module; labels are strictly
    increasing index tuples."""

    def __init__(self, n: int, k: int):
        if not 0 <= k <= n:
            raise ValidationError("exterior power index out of range")
        self.n = n
        self.k = k
        self.finite_dim = True

    def labels(self) -> list:
        out = []

        def rec(start, chosen):
            if len(chosen) == self.k:
                out.append(tuple(chosen))
                return
            for i in range(start, self.n):
                rec(i + 1, chosen + [i])

        rec(0, [])
        return out

    def weight(self, label) -> Weight:
        return Weight([1 if i in label else 0 for i in range(self.n)])

    def act(self, i, j, label) -> ActionTerms:
        if i == j:
            return [(label, Fraction(1))] if i in label else []
        if j not in label or i in label:
            return []
        pos = label.index(j)
        rest = label[:pos] + label[pos + 1:]
        # sign from moving e_i into sorted position
        ins = sum(1 for t in rest if t < i)
        sign = Fraction(-1) ** ((pos - ins) % 2)
        new = tuple(sorted(rest + (i,)))
        return [(new, sign)]

    def __repr__(self):
        return f"wedge({self.n},{self.k})"


class SymModule(GlModule):
    """k-th symmetric power; labels are exponent vectors, E_ij acts as the
    polarization operator e_i d/de_j."""

    def __init__(self, n: int, k: int):
        if k < 0:
            raise ValidationError("symmetric power index must be >= 0")
        self.n = n
        self.k = k
        self.finite_dim = True

    def labels(self) -> list:
        out = []

        def rec(i, left, cur):
            if i == self.n - 1:
                out.append(tuple(cur + [left]))
                return
            for c in range(left, -1, -1):
                rec(i + 1, left - c, cur + [c])

        rec(0, self.k, [])
        return out

    def weight(self, label) -> Weight:
        return Weight(label)

    def act(self, i, j, label) -> ActionTerms:
        if label[j] == 0:
            return []
        if i == j:
            return [(label, Fraction(label[i]))]
        new = list(label)
        coeff = Fraction(new[j])
        new[j] -= 1
        new[i] += 1
        return [(tuple(new), coeff)]

    def __repr__(self):
        return f"sym({self.n},{self.k})"


class CharModule(GlModule):
    """One-dimensional module of a fixed weight.

    Off-diagonal generators act by zero, which is a genuine gl-module only
    when the weight is constant across each gl block it is used with; for
    abelian blocks any weight vector is fine.
    """

    def __init__(self, coords):
        self.c = Weight(coords)
        self.n = len(self.c)
        self.finite_dim = True

    def labels(self) -> list:
        return [()]

    def weight(self, label) -> Weight:
        return self.c

    def act(self, i, j, label) -> ActionTerms:
        if i == j and self.c[i]:
            return [((), self.c[i])]
        return []

    def __repr__(self):
        return "char(" + ",".join(str(v) for v in self.c) + ")"


class DualModule(GlModule):
    """Restricted dual: dual basis labels, weights negated, action the
    negative transpose."""

    def __init__(self, base: GlModule):
        self.base = base
        self.n = base.n
        self.finite_dim = base.finite_dim

    def labels(self) -> list:
        return self.base.labels()

    def weight(self, label) -> Weight:
        return -self.base.weight(label)

    def act(self, i, j, label) -> ActionTerms:
        # entries of E_ij on the dual basis come from scanning the weight
        # space that E_ij maps onto this label in the base module
        target = self.base.weight(label) - _gl_root_weight(self.n, i, j)
        out = []
        for src in self.base.labels_of_weight(target):
            for lab, c in self.base.act(i, j, src):
                if lab == label:
                    out.append((src, -c))
        return out

    def labels_of_weight(self, mu: Weight) -> list:
        return self.base.labels_of_weight(-mu)

    def labels_in_window(self, window: Window) -> list:
        flipped = Window(
            tuple(-h for h in window.highs),
            tuple(-l for l in window.lows),
            window.margin,
        )
        return self.base.labels_in_window(flipped)

    def support(self) -> SupportSet:
        return self.base.support().negate()

    def shadow(self) -> Optional[Shadow]:
        s = self.base.shadow()
        return negate_shadow(s) if s is not None else None

    def __repr__(self):
        return f"dual({self.base!r})"


class TensorGlModule(GlModule):
    """Tensor product with the Leibniz action; labels are pairs."""

    def __init__(self, left: GlModule, right: GlModule):
        if left.n != right.n:
            raise DimensionError("tensor factors over different gl(n)")
        self.left = left
        self.right = right
        self.n = left.n
        self.finite_dim = left.finite_dim and right.finite_dim

    def labels(self) -> list:
        return [
            (a, b) for a in self.left.labels() for b in self.right.labels()
        ]

    def weight(self, label) -> Weight:
        a, b = label
        return self.left.weight(a) + self.right.weight(b)

    def act(self, i, j, label) -> ActionTerms:
        a, b = label
        out = [((la, b), c) for la, c in self.left.act(i, j, a)]
        out += [((a, lb), c) for lb, c in self.right.act(i, j, b)]
        return out

    def labels_of_weight(self, mu: Weight) -> list:
        if self.left.finite_dim:
            out = []
            for a in self.left.labels():
                rest = mu - self.left.weight(a)
                out.extend((a, b) for b in self.right.labels_of_weight(rest))
            return out
        if self.right.finite_dim:
            out = []
            for b in self.right.labels():
                rest = mu - self.right.weight(b)
                out.extend((a, b) for a in self.left.labels_of_weight(rest))
            return out
        raise UnsupportedCaseError(
            "weight slices of a doubly infinite tensor product"
        )

    def labels_in_window(self, window: Window) -> list:
        if self.finite_dim:
            return super().labels_in_window(window)
        if self.left.finite_dim:
            out = []
            for a in self.left.labels():
                w = self.left.weight(a)
                shifted = Window(
                    tuple(l - wi for l, wi in zip(window.lows, w)),
                    tuple(h - wi for h, wi in zip(window.highs, w)),
                    window.margin,
                )
                out.extend((a, b) for b in self.right.labels_in_window(shifted))
            return out
        raise UnsupportedCaseError("window slices need one finite factor")

    def support(self) -> SupportSet:
        return self.left.support() + self.right.support()

    def shadow(self) -> Optional[Shadow]:
        if self.finite_dim:
            return all_finite_shadow(self.n)
        for one, other in ((self.left, self.right), (self.right, self.left)):
            if one.finite_dim and one.dim() == 1:
                return other.shadow()
        return None

    def __repr__(self):
        return f"{self.left!r}#{self.right!r}"


class RestrictionModule(GlModule):
    """gl(n)-module on a total-degree eigenspace of a Weyl-algebra module,
    with E_ij acting as x_i d_j."""

    def __init__(self, parent: DModule, kappa):
        self.parent = parent
        self.kappa = frac(kappa)
        self.n = parent.n
        base_total = sum(parent.base_weight().coords, Fraction(0))
        if (self.kappa - base_total).denominator != 1:
            raise EmptyModuleError(
                f"eigenvalue {self.kappa} misses the weight coset"
            )
        lo, hi = _total_weight_range(parent)
        if (lo is not None and self.kappa < lo) or (
                hi is not None and self.kappa > hi):
            raise EmptyModuleError(f"eigenvalue {self.kappa} out of range")
        self.finite_dim = all(
            f.kind is FactorKind.POLY for f in parent.factors
        ) or all(f.kind is FactorKind.FPOLY for f in parent.factors)

    def labels(self) -> list:
        if not self.finite_dim:
            raise UnsupportedCaseError("infinite restriction module")
        # bounded slice: enumerate the simplex of labels directly
        if self.parent.factors[0].kind is FactorKind.POLY:
            total = int(self.kappa)
            return [
                lab for lab in _compositions_tuple(total, self.n)
            ]
        total = int(-self.kappa) - self.n
        return [lab for lab in _compositions_tuple(total, self.n)]

    def weight(self, label) -> Weight:
        return self.parent.weight(label)

    def act(self, i, j, label) -> ActionTerms:
        a = tuple(1 if t == i else 0 for t in range(self.n))
        b = tuple(1 if t == j else 0 for t in range(self.n))
        hit = self.parent.apply_monomial(a, b, label, Fraction(1))
        return [hit] if hit is not None else []

    def labels_of_weight(self, mu: Weight) -> list:
        if sum(mu.coords, Fraction(0)) != self.kappa:
            return []
        lab = self.parent.label_of_weight(mu)
        return [lab] if lab is not None else []

    def labels_in_window(self, window: Window) -> list:
        return [
            lab
            for lab in self.parent.labels_in_window(window)
            if sum(self.parent.weight(lab).coords, Fraction(0)) == self.kappa
        ]

    def support(self) -> SupportSet:
        if self.finite_dim:
            return super().support()
        raise UnsupportedCaseError(
            "restriction support is not a finite cone union; "
            "use membership tests"
        )

    def contains_weight(self, mu: Weight) -> bool:
        return bool(self.labels_of_weight(mu))

    def shadow(self) -> Optional[Shadow]:
        return self.parent.shadow()

    def __repr__(self):
        return f"resD({self.parent!r};{self.kappa})"


def _gl_root_weight(n: int, i: int, j: int) -> Weight:
    return Weight(
        [(1 if t == i else 0) - (1 if t == j else 0) for t in range(n)]
    )


def _total_weight_range(p: DModule):
    lo = Fraction(0)
    hi = Fraction(0)
    lo_inf = hi_inf = False
    for f in p.factors:
        if f.kind is FactorKind.POLY:
            hi_inf = True
        elif f.kind is FactorKind.FPOLY:
            lo_inf = True
            hi += Fraction(-1)
        else:
            lo_inf = hi_inf = True
    return (None if lo_inf else lo), (None if hi_inf else hi)


def _compositions_tuple(total: int, n: int):
    if total < 0:
        return []
    if n == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions_tuple(total - first, n - 1):
            out.append((first,) + rest)
    return out


# -- constructors with the operation-level names ------------------------------


def wedge(n: int, k: int) -> WedgeModule:
    return WedgeModule(n, k)


def sym(n: int, k: int) -> SymModule:
    return SymModule(n, k)


def character(coords) -> CharModule:
    return CharModule(coords)


def dual_gl(v: GlModule) -> GlModule:
    return DualModule(v)


def tensor_gl(v: GlModule, w: GlModule) -> GlModule:
    return TensorGlModule(v, w)


def restrict_kappa(p: DModule, kappa) -> RestrictionModule:
    return RestrictionModule(p, kappa)


def gl_weight_mult(v: GlModule, mu: Weight, window: Window) -> int:
    return len(v.labels_of_weight(mu))


def as_fundamental(v: GlModule) -> Optional[int]:
    """The k with V isomorphic to the k-th exterior power, else None.

    Decided on weight multisets, which separate the simple constructors in
    this package.
    """
    if not v.finite_dim:
        return None
    d = v.dim()
    n = v.n
    for k in range(n + 1):
        if d == math.comb(n, k):
            if v.weight_multiset() == WedgeModule(n, k).weight_multiset():
                return k
    return None
