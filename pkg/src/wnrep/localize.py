"""Ore localization and twisted localization at coordinate elements.

Localization at x_i or d_i turns the i-th factor into a Laurent factor on
which the chosen element acts invertibly; the twist by a rational exponent
c conjugates by the generalized-binomial series

    phi_c(u) = sum_i  binom(c, i) ad(a)^i(u) a^(-i),

which terminates because ad(x_i) and ad(d_i) are locally nilpotent.  The
element a^c m of the twisted module transforms by phi_(-c), which shifts the
i-th weight by +c for a = x_i and by -c for a = d_i (the latter pinned by
compatibility with the Fourier transform).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .dmod import DFactor, DModule, DVector, FactorKind, laurent
from .errors import UnsupportedCaseError, ValidationError
from .lattice import Window, frac
from .linalg import vec_add, vec_max_abs, vec_scale, vec_sub
from .weyl import WeylElement, ad

MAX_SERIES_ORDER = 64


def binom_frac(c: Fraction, i: int) -> Fraction:
    out = Fraction(1)
    for t in range(i):
        out *= c - t
    return out / math.factorial(i)


@dataclass(frozen=True)
class TwistData:
    """The element x_i or d_i together with the twist exponent."""

    index: int
    elem: str  # "x" or "d"
    exponent: Fraction

    def __post_init__(self):
        if self.elem not in ("x", "d"):
            raise ValidationError("twist element must be 'x' or 'd'")
        object.__setattr__(self, "exponent", frac(self.exponent))

    def weyl(self, n: int) -> WeylElement:
        if self.elem == "x":
            return WeylElement.x(self.index, n)
        return WeylElement.d(self.index, n)


class LocalizedElement:
    """Finite sum of terms u * a^(-k) living in the localized algebra."""

    def __init__(self, n: int, index: int, elem: str,
                 terms: List[Tuple[WeylElement, int]]):
        self.n = n
        self.index = index
        self.elem = elem
        self.terms = [(u, k) for u, k in terms if not u.is_zero()]

    def __repr__(self):
        a = f"{self.elem}{self.index}"
        bits = [
            f"({u!r})*{a}^-{k}" if k else f"({u!r})" for u, k in self.terms
        ]
        return " + ".join(bits) or "0"


def phi_series(u: WeylElement, index: int, elem: str, c: Fraction,
               max_order: int = MAX_SERIES_ORDER) -> LocalizedElement:
    """The series sum_i binom(c,i) ad(a)^i(u) a^(-i), exactly."""
    n = u.n
    a = TwistData(index, elem, 0).weyl(n)
    terms = []
    cur = u
    i = 0
    while not cur.is_zero():
        if i > max_order:
            raise UnsupportedCaseError("twist series did not terminate")
        coeff = binom_frac(c, i)
        if coeff:
            terms.append((cur.scale(coeff), i))
        cur = ad(a, cur)
        i += 1
    return LocalizedElement(n, index, elem, terms)


def phi_x(u: WeylElement, t: TwistData,
          max_order: int = MAX_SERIES_ORDER) -> LocalizedElement:
    return phi_series(u, t.index, t.elem, t.exponent, max_order)


# -- localization of modules ---------------------------------------------------


def _localized_factor(f: DFactor, elem: str) -> DFactor:
    """The i-th factor after inverting x or d, before any twist."""
    if elem == "x":
        if f.kind is FactorKind.POLY:
            return laurent(0)
        if f.kind is FactorKind.LAURENT and not (f.dual and f.non_simple):
            return f
        raise ValidationError("x acts locally nilpotently; not Ore-injective")
    if f.kind is FactorKind.FPOLY:
        return laurent(-1, dual=True)
    if f.kind is FactorKind.LAURENT:
        if f.non_simple and not f.dual:
            raise ValidationError(
                "d acts with a kernel; not Ore-injective"
            )
        return f
    raise ValidationError("d acts locally nilpotently; not Ore-injective")


def localize(p: DModule, index: int, elem: str = "x") -> DModule:
    """Plain Ore localization at x_index or d_index."""
    factors = list(p.factors)
    factors[index] = _localized_factor(factors[index], elem)
    return DModule(factors)


def twisted_localize(p: DModule, index: int, c, elem: str = "x") -> DModule:
    """Twisted localization: localize at the element, then twist by a^c.

    The i-th factor becomes Laurent with parameter shifted by +c (for x)
    or -c (for d); an integral parameter marks a non-simple output and the
    variant records on which side the kernel sits.
    """
    c = frac(c)
    loc = localize(p, index, elem)
    f = loc.factors[index]
    if elem == "x":
        lam = f.lam + c
        dual = f.dual
    else:
        lam = f.lam - c
        dual = True
    if lam.denominator != 1:
        dual = False
    factors = list(loc.factors)
    factors[index] = DFactor(FactorKind.LAURENT, lam, dual)
    return DModule(factors)


def localize_gamma(p: DModule, entries) -> DModule:
    """Sequential twisted localization along pairwise distinct coordinates.

    entries: iterable of (index, elem, exponent).
    """
    seen = set()
    out = p
    for index, elem, c in entries:
        if index in seen:
            raise ValidationError("repeated coordinate in localization set")
        seen.add(index)
        out = twisted_localize(out, index, c, elem)
    return out


# -- action-level checks ---------------------------------------------------------


def _inv_a_once(f: DFactor, elem: str, k: int) -> Tuple[int, Fraction]:
    """Label and coefficient of a^(-1) on e(k) in a localized factor."""
    if elem == "x":
        if f.dual:
            c = f.lam + k
            if c == 0:
                raise ValidationError("x is not invertible on this factor")
            return k - 1, 1 / c
        return k - 1, Fraction(1)
    if f.dual:
        return k + 1, Fraction(1)
    c = f.lam + k + 1
    if c == 0:
        raise ValidationError("d is not invertible on this factor")
    return k + 1, 1 / c


def apply_inv_a(loc: DModule, index: int, elem: str, power: int,
                vec: DVector) -> DVector:
    """Apply a^(-power) on the localized module."""
    f = loc.factors[index]
    if f.kind is not FactorKind.LAURENT:
        raise ValidationError("factor is not localized")
    out: DVector = {}
    for label, c in vec.items():
        k = label[index]
        for _ in range(power):
            k, step = _inv_a_once(f, elem, k)
            c = c * step
        lab = label[:index] + (k,) + label[index + 1:]
        acc = out.get(lab, Fraction(0)) + c
        if acc:
            out[lab] = acc
    return out


def apply_localized(loc: DModule, index: int, elem: str,
                    le: LocalizedElement, vec: DVector) -> DVector:
    out: DVector = {}
    for u, k in le.terms:
        part = apply_inv_a(loc, index, elem, k, vec) if k else vec
        out = vec_add(out, loc.apply_weyl(u, part))
    return out


def _twist_identification(loc: DModule, tw: DModule, index: int, elem: str,
                          c: Fraction):
    """Per-label scalars psi(k) identifying the symbols a^c e(k) with the
    canonical basis of the descriptor produced by twisted_localize.

    a commutes with a^c, so the natural action of a on the symbols carries
    the coefficients of the localized module; psi is pinned (psi(0) = 1) by
    intertwining that action with the descriptor's own a-action.
    """
    lf = loc.factors[index]
    of = tw.factors[index]

    def natural_coeff(k: int) -> Fraction:
        hit = lf.act_x(k) if elem == "x" else lf.act_d(k)
        if hit is None:
            raise ValidationError("localizing element lost injectivity")
        return hit[1]

    def descr_coeff(k: int) -> Fraction:
        hit = of.act_x(k) if elem == "x" else of.act_d(k)
        if hit is None:
            raise ValidationError(
                "descriptor kernel misaligned with the twisted action"
            )
        return hit[1]

    # a maps label k to k + step; intertwining forces
    #   psi(k + step) = psi(k) * descr_coeff(k) / natural_coeff(k)
    step = 1 if elem == "x" else -1
    cache: Dict[int, Fraction] = {0: Fraction(1)}

    def psi(k: int) -> Fraction:
        if k not in cache:
            hi = max(cache)
            while hi < k:
                src = hi if step == 1 else hi + 1
                ratio = (descr_coeff(src) / natural_coeff(src)) ** step
                cache[hi + 1] = cache[hi] * ratio
                hi += 1
            lo = min(cache)
            while lo > k:
                src = lo - 1 if step == 1 else lo
                ratio = (descr_coeff(src) / natural_coeff(src)) ** step
                cache[lo - 1] = cache[lo] / ratio
                lo -= 1
        return cache[k]

    return psi


def twist_action_check(p: DModule, t: TwistData, u: WeylElement,
                       samples: int, window: Window, rng) -> Fraction:
    """Residual of the defining identity of the twisted action.

    For sample basis vectors m of the localized module, compares the action
    of u on a^c m inside the descriptor produced by twisted_localize with
    a^c applied to phi_(-c)(u) m, through the canonical identification of
    bases.  Must be exactly 0.
    """
    index, elem, c = t.index, t.elem, t.exponent
    loc = localize(p, index, elem)
    tw = twisted_localize(p, index, c, elem)
    psi = _twist_identification(loc, tw, index, elem, c)

    def to_twisted(vec: DVector) -> DVector:
        return {lab: cv * psi(lab[index]) for lab, cv in vec.items()}

    labels = loc.labels_in_window(window)
    if not labels:
        raise ValidationError("window contains no basis vectors")
    worst = Fraction(0)
    series = phi_series(u, index, elem, -c)
    for _ in range(samples):
        m = labels[rng.randrange(len(labels))]
        mv: DVector = {m: Fraction(1)}
        rhs = to_twisted(apply_localized(loc, index, elem, series, mv))
        lhs = tw.apply_weyl(u, to_twisted(mv))
        worst = max(worst, vec_max_abs(vec_sub(lhs, rhs)))
    return worst


def integer_conjugation_residual(p: DModule, t: TwistData, u: WeylElement,
                                 samples: int, window: Window,
                                 rng) -> Fraction:
    """For integer exponents the twist series must equal direct conjugation
    a^c u a^(-c) on the localized module."""
    c = t.exponent
    if c.denominator != 1:
        raise ValidationError("conjugation check needs an integer exponent")
    index, elem = t.index, t.elem
    loc = localize(p, index, elem)
    a = t.weyl(p.n)
    m = int(c)
    labels = loc.labels_in_window(window)
    if not labels:
        raise ValidationError("window contains no basis vectors")
    series = phi_series(u, index, elem, c)
    worst = Fraction(0)
    for _ in range(samples):
        lab = labels[rng.randrange(len(labels))]
        mv: DVector = {lab: Fraction(1)}
        via_series = apply_localized(loc, index, elem, series, mv)
        if m >= 0:
            inner = apply_inv_a(loc, index, elem, m, mv)
            conj = loc.apply_weyl(u, inner)
            for _ in range(m):
                conj = loc.apply_weyl(a, conj)
        else:
            inner = dict(mv)
            for _ in range(-m):
                inner = loc.apply_weyl(a, inner)
            conj = apply_inv_a(loc, index, elem, -m, loc.apply_weyl(u, inner))
        worst = max(worst, vec_max_abs(vec_sub(via_series, conj)))
    return worst
