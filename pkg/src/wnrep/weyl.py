"""Normal-ordered elements of the algebra of polynomial differential
operators.

An element is a rational combination of monomials x^a d^b with all x's to
the left; multiplication rewrites d x = x d + 1 exactly.  Vector fields are
the elements whose every monomial carries exactly one d.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterator, Tuple

from .errors import DimensionError, ValidationError
from .lattice import Weight, WnRoot, frac

Monomial = Tuple[tuple, tuple]


def _falling(p: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= p - t
    return out


class WeylElement:
    """Finite rational combination of normal-ordered monomials x^a d^b."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Monomial, Fraction] | None = None):
        self.n = n
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for (a, b), c in terms.items():
                if len(a) != n or len(b) != n:
                    raise DimensionError("monomial arity mismatch")
                c = frac(c)
                if c:
                    self.terms[(tuple(a), tuple(b))] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "WeylElement":
        return WeylElement(n)

    @staticmethod
    def one(n: int) -> "WeylElement":
        z = (0,) * n
        return WeylElement(n, {(z, z): Fraction(1)})

    @staticmethod
    def x(i: int, n: int) -> "WeylElement":
        a = tuple(1 if k == i else 0 for k in range(n))
        return WeylElement(n, {(a, (0,) * n): Fraction(1)})

    @staticmethod
    def d(i: int, n: int) -> "WeylElement":
        b = tuple(1 if k == i else 0 for k in range(n))
        return WeylElement(n, {((0,) * n, b): Fraction(1)})

    @staticmethod
    def monomial(a: tuple, b: tuple, coeff=1) -> "WeylElement":
        return WeylElement(len(a), {(tuple(a), tuple(b)): frac(coeff)})

    @staticmethod
    def from_root(r: WnRoot) -> "WeylElement":
        b = tuple(1 if k == r.j else 0 for k in range(r.n))
        return WeylElement(r.n, {(tuple(r.alpha), b): Fraction(1)})

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "WeylElement") -> "WeylElement":
        if self.n != other.n:
            raise DimensionError("mixing operator algebras")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return WeylElement(self.n, terms)

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + (-other)

    def __neg__(self) -> "WeylElement":
        return WeylElement(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "WeylElement":
        c = frac(c)
        return WeylElement(self.n, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if self.n != other.n:
            raise DimensionError("mixing operator algebras")
        terms: Dict[Monomial, Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                for (a, b), c in _mul_monomials(a1, b1, a2, b2):
                    m = (a, b)
                    terms[m] = terms.get(m, Fraction(0)) + c1 * c2 * c
        return WeylElement(self.n, terms)

    def bracket(self, other: "WeylElement") -> "WeylElement":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeylElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- structure queries -------------------------------------------------

    def is_vector_field(self) -> bool:
        return all(sum(b) == 1 for _, b in self.terms)

    def vector_field_terms(self) -> Iterator[tuple]:
        """Yield (alpha, j, coeff) for an element with exactly one d per
        monomial."""
        for (a, b), c in sorted(self.terms.items()):
            if sum(b) != 1:
                raise ValidationError("element is not a vector field")
            yield a, b.index(1), c

    def weight(self) -> Weight | None:
        """Common weight a - b of all monomials, or None if mixed."""
        ws = {
            tuple(ai - bi for ai, bi in zip(a, b)) for (a, b) in self.terms
        }
        if len(ws) != 1:
            return None
        return Weight(ws.pop())

    def max_degree(self) -> int:
        """Largest |a| + |b| over the monomials (0 for the zero element)."""
        return max((sum(a) + sum(b) for a, b in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            xs = "".join(f"x{i}^{e}" for i, e in enumerate(a) if e)
            ds = "".join(f"d{i}^{e}" for i, e in enumerate(b) if e)
            bits.append(f"{c}*{xs or ''}{ds or '1' if not xs else ds}")
        return " + ".join(bits)


def _mul_monomials(a1, b1, a2, b2):
    """Normal-order the product (x^a1 d^b1)(x^a2 d^b2).

    Per coordinate, d^m x^p = sum_k C(m,k) p!/(p-k)! x^(p-k) d^(m-k).
    """
    n = len(a1)
    out = [((), (), Fraction(1))]
    for i in range(n):
        m, p = b1[i], a2[i]
        layer = []
        for k in range(0, min(m, p) + 1):
            coeff = Fraction(math.comb(m, k) * _falling(p, k))
            layer.append((a1[i] + p - k, m - k + b2[i], coeff))
        out = [
            (a + (ai,), b + (bi,), c * ci)
            for a, b, c in out
            for ai, bi, ci in layer
        ]
    return [((a, b), c) for a, b, c in out]


def ad(a: WeylElement, u: WeylElement) -> WeylElement:
    return a * u - u * a


def sigma_f(u: WeylElement) -> WeylElement:
    """The Fourier automorphism x -> d, d -> -x, extended to normal-ordered
    elements (the image is re-normal-ordered exactly)."""
    zero = (0,) * u.n
    out = WeylElement.zero(u.n)
    for (a, b), c in u.terms.items():
        # x^a d^b maps to d^a (-x)^b, which needs reordering
        img = WeylElement.monomial(zero, a, c * Fraction(-1) ** sum(b)) * (
            WeylElement.monomial(b, zero, 1)
        )
        out = out + img
    return out


def sign_auto(u: WeylElement) -> WeylElement:
    """The automorphism x -> -x, d -> -d (the square of the Fourier
    transform)."""
    return WeylElement(
        u.n,
        {
            (a, b): c * Fraction(-1) ** (sum(a) + sum(b))
            for (a, b), c in u.terms.items()
        },
    )


def vf_apply_monomial(x_field: WeylElement, beta: tuple):
    """Apply a vector field to the polynomial monomial x^beta.

    Returns a list of (gamma, coeff) for the resulting polynomial.
    """
    out = {}
    for alpha, j, c in x_field.vector_field_terms():
        if beta[j] == 0:
            continue
        gamma = tuple(
            beta[k] + alpha[k] - (1 if k == j else 0) for k in range(len(beta))
        )
        out[gamma] = out.get(gamma, Fraction(0)) + c * beta[j]
    return [(g, c) for g, c in sorted(out.items()) if c]
