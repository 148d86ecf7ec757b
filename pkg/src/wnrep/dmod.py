"""Simple weight modules of the Weyl algebra.

A module is an ordered tensor product of one-variable factors: the
polynomial module O, its Fourier twist OF, and the twisted Laurent module
x^lam C[x, 1/x] for nonintegral lam.  Basis labels are integer offset
vectors; every action is computed exactly on labels.

Integral-lam Laurent factors can be represented (they arise as
localizations) but are flagged non-simple and rejected by the shadow and
classification operations.  A Laurent factor additionally records on which
side (x or d) the vanishing coefficient sits, which distinguishes the two
non-isomorphic integral localizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import DimensionError, ValidationError
from .lattice import (
    Mode,
    Shadow,
    SupportSet,
    Weight,
    Window,
    frac,
    shadow_from_isets,
)
from .weyl import WeylElement, sigma_f

Label = Tuple[int, ...]
DVector = Dict[Label, Fraction]


class FactorKind(Enum):
    POLY = "O"
    FPOLY = "OF"
    LAURENT = "XL"


@dataclass(frozen=True)
class DFactor:
    """One-variable factor of a weight module of the Weyl algebra.

    For LAURENT, ``dual`` marks the variant whose vanishing coefficient sits
    on x rather than d; the two variants are isomorphic (and normalized to
    dual=False) whenever lam is not an integer.
    """

    kind: FactorKind
    lam: Optional[Fraction] = None
    dual: bool = False

    def __post_init__(self):
        if self.kind is FactorKind.LAURENT:
            if self.lam is None:
                raise ValidationError("Laurent factor needs a parameter")
            object.__setattr__(self, "lam", frac(self.lam))
            if self.lam.denominator != 1 and self.dual:
                object.__setattr__(self, "dual", False)
        else:
            if self.lam is not None:
                raise ValidationError("only Laurent factors take a parameter")
            if self.dual:
                raise ValidationError("dual flag applies to Laurent factors")

    @property
    def non_simple(self) -> bool:
        return self.kind is FactorKind.LAURENT and self.lam.denominator == 1

    @property
    def base_weight(self) -> Fraction:
        if self.kind is FactorKind.POLY:
            return Fraction(0)
        if self.kind is FactorKind.FPOLY:
            return Fraction(-1)
        return self.lam

    def weight(self, k: int) -> Fraction:
        if self.kind is FactorKind.POLY:
            return Fraction(k)
        if self.kind is FactorKind.FPOLY:
            return Fraction(-k - 1)
        return self.lam + k

    def label_of_weight(self, w: Fraction) -> Optional[int]:
        if self.kind is FactorKind.POLY:
            if w.denominator == 1 and w >= 0:
                return int(w)
            return None
        if self.kind is FactorKind.FPOLY:
            if w.denominator == 1 and w <= -1:
                return int(-w - 1)
            return None
        d = w - self.lam
        if d.denominator == 1:
            return int(d)
        return None

    def valid(self, k: int) -> bool:
        if self.kind is FactorKind.LAURENT:
            return True
        return k >= 0

    def act_x(self, k: int) -> Optional[Tuple[int, Fraction]]:
        """Image label and coefficient of x on e(k); None for the zero
        vector."""
        if self.kind is FactorKind.POLY:
            return k + 1, Fraction(1)
        if self.kind is FactorKind.FPOLY:
            if k == 0:
                return None
            return k - 1, Fraction(-k)
        if self.dual:
            c = self.lam + k + 1
            if c == 0:
                return None
            return k + 1, c
        return k + 1, Fraction(1)

    def act_d(self, k: int) -> Optional[Tuple[int, Fraction]]:
        if self.kind is FactorKind.POLY:
            if k == 0:
                return None
            return k - 1, Fraction(k)
        if self.kind is FactorKind.FPOLY:
            return k + 1, Fraction(1)
        if self.dual:
            return k - 1, Fraction(1)
        c = self.lam + k
        if c == 0:
            return None
        return k - 1, c

    def fourier(self) -> "DFactor":
        if self.kind is FactorKind.POLY:
            return DFactor(FactorKind.FPOLY)
        if self.kind is FactorKind.FPOLY:
            return DFactor(FactorKind.POLY)
        return DFactor(FactorKind.LAURENT, -self.lam - 1, not self.dual)

    def mode(self) -> Mode:
        return {
            FactorKind.POLY: Mode.NONNEG,
            FactorKind.FPOLY: Mode.NONPOS,
            FactorKind.LAURENT: Mode.FULL,
        }[self.kind]

    def __repr__(self) -> str:
        if self.kind is FactorKind.LAURENT:
            tag = "XLd" if self.dual else "XL"
            return f"{tag}({self.lam})"
        return self.kind.value


def poly() -> DFactor:
    return DFactor(FactorKind.POLY)


def fpoly() -> DFactor:
    return DFactor(FactorKind.FPOLY)


def laurent(lam, dual: bool = False) -> DFactor:
    return DFactor(FactorKind.LAURENT, frac(lam), dual)


class DModule:
    """Tensor product of one-variable factors with exact basis-level
    actions."""

    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[DFactor]):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValidationError("need at least one factor")

    @property
    def n(self) -> int:
        return len(self.factors)

    # index sets: where d_i (resp. x_i) acts locally nilpotently
    @property
    def iplus(self) -> tuple:
        return tuple(
            i for i, f in enumerate(self.factors) if f.kind is FactorKind.POLY
        )

    @property
    def iminus(self) -> tuple:
        return tuple(
            i for i, f in enumerate(self.factors) if f.kind is FactorKind.FPOLY
        )

    @property
    def izero(self) -> tuple:
        return tuple(
            i for i, f in enumerate(self.factors)
            if f.kind is FactorKind.LAURENT
        )

    @property
    def all_simple(self) -> bool:
        return not any(f.non_simple for f in self.factors)

    def is_polynomial_module(self) -> bool:
        return all(f.kind is FactorKind.POLY for f in self.factors)

    def base_weight(self) -> Weight:
        return Weight(f.base_weight for f in self.factors)

    def weight(self, label: Label) -> Weight:
        return Weight(f.weight(k) for f, k in zip(self.factors, label))

    def label_of_weight(self, w: Weight) -> Optional[Label]:
        if len(w) != self.n:
            raise DimensionError("weight arity mismatch")
        out = []
        for f, wi in zip(self.factors, w):
            k = f.label_of_weight(wi)
            if k is None:
                return None
            out.append(k)
        return tuple(out)

    def support(self) -> SupportSet:
        return SupportSet.single(
            self.base_weight(), tuple(f.mode() for f in self.factors)
        )

    def labels_in_window(self, window: Window) -> List[Label]:
        if window.n != self.n:
            raise DimensionError("window arity mismatch")
        axes = []
        for i, f in enumerate(self.factors):
            vals = [
                f.label_of_weight(w)
                for w in window.coset_values(i, f.base_weight)
            ]
            axes.append([k for k in vals if k is not None])
        return [labels for labels in product(*axes)]

    # -- actions -----------------------------------------------------------

    def apply_monomial(self, a: tuple, b: tuple, label: Label,
                       coeff: Fraction) -> Optional[Tuple[Label, Fraction]]:
        """Apply x^a d^b to the basis vector e(label); d's act first."""
        out = list(label)
        c = coeff
        for i, f in enumerate(self.factors):
            for _ in range(b[i]):
                hit = f.act_d(out[i])
                if hit is None:
                    return None
                out[i], step = hit
                c *= step
            for _ in range(a[i]):
                hit = f.act_x(out[i])
                if hit is None:
                    return None
                out[i], step = hit
                c *= step
        return tuple(out), c

    def apply_weyl(self, u: WeylElement, v: DVector) -> DVector:
        if u.n != self.n:
            raise DimensionError("operator arity mismatch")
        out: DVector = {}
        for (a, b), cu in u.terms.items():
            for label, cv in v.items():
                hit = self.apply_monomial(a, b, label, cu * cv)
                if hit is None:
                    continue
                lab, c = hit
                acc = out.get(lab, Fraction(0)) + c
                if acc:
                    out[lab] = acc
                else:
                    out.pop(lab, None)
        return out

    # -- derived structure ---------------------------------------------------

    def fourier(self) -> "DModule":
        """Descriptor of the module twisted by the Fourier automorphism."""
        return DModule(f.fourier() for f in self.factors)

    def shadow(self) -> Shadow:
        if not self.all_simple:
            raise ValidationError("shadow requires all factors simple")
        return shadow_from_isets(self.n, self.iplus, self.izero, self.iminus)

    def sum_partials_saturates(self) -> bool:
        """Whether the images of all d_i together span the whole module.

        Closed form: some factor must admit a surjective d, i.e. be POLY or
        LAURENT.
        """
        if not self.all_simple:
            raise ValidationError("saturation test requires simple factors")
        return bool(self.iplus) or bool(self.izero)

    def __eq__(self, other) -> bool:
        return isinstance(other, DModule) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self) -> str:
        return "*".join(repr(f) for f in self.factors)


class TwistedDModule:
    """Fourier-twisted view of a module on its original label set.

    The action of u is the action of sigma_F(u) on the underlying module;
    weights transform as w -> -w - 1 coordinate-wise.  This is the basis in
    which the duality pairing is diagonal.
    """

    __slots__ = ("base",)

    def __init__(self, base: DModule):
        self.base = base

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def all_simple(self) -> bool:
        return self.base.all_simple

    def descriptor(self) -> DModule:
        return self.base.fourier()

    def weight(self, label: Label) -> Weight:
        return Weight(-w - 1 for w in self.base.weight(label))

    def label_of_weight(self, w: Weight) -> Optional[Label]:
        return self.base.label_of_weight(Weight(-wi - 1 for wi in w))

    def support(self) -> SupportSet:
        shift = Weight([-1] * self.n)
        return self.base.support().negate().shift(shift)

    def labels_in_window(self, window: Window) -> List[Label]:
        flipped = Window(
            tuple(-h - 1 for h in window.highs),
            tuple(-l - 1 for l in window.lows),
            window.margin,
        )
        return self.base.labels_in_window(flipped)

    def apply_weyl(self, u: WeylElement, v: DVector) -> DVector:
        return self.base.apply_weyl(sigma_f(u), v)

    def __repr__(self) -> str:
        return f"F[{self.base!r}]"


# -- DVector helpers ---------------------------------------------------------


def dvec(items) -> DVector:
    out: DVector = {}
    for label, c in dict(items).items():
        c = frac(c)
        if c:
            out[tuple(label)] = c
    return out


def dvec_add(a: DVector, b: DVector) -> DVector:
    out = dict(a)
    for k, c in b.items():
        acc = out.get(k, Fraction(0)) + c
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def dvec_scale(a: DVector, c) -> DVector:
    c = frac(c)
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def dvec_sub(a: DVector, b: DVector) -> DVector:
    return dvec_add(a, dvec_scale(b, -1))


def dvec_max_abs(a: DVector) -> Fraction:
    return max((abs(c) for c in a.values()), default=Fraction(0))


# -- spec-level operation names ----------------------------------------------


def dmod_weight(p: DModule, label: Label) -> Weight:
    for f, k in zip(p.factors, label):
        if not f.valid(k):
            raise ValidationError(f"label {label} out of range")
    return p.weight(label)


def dmod_support(p: DModule) -> SupportSet:
    return p.support()


def act_weyl(p: DModule, u: WeylElement, v: DVector) -> DVector:
    return p.apply_weyl(u, v)


def fourier(p: DModule) -> DModule:
    return p.fourier()


def dmod_shadow(p: DModule) -> Shadow:
    return p.shadow()


def sum_partials_saturates(p: DModule) -> bool:
    return p.sum_partials_saturates()
