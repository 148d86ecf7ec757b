"""Restricted duality for weight modules and tensor modules.

The dual of a Weyl-algebra weight module is realized on the Fourier-twisted
basis tensored with the top exterior power; the pairing is diagonal,
< e(mu), f(nu) > = phi(mu) delta(mu, nu), with phi determined up to scale by
a first-order recurrence.  Duals of tensor modules multiply this pairing by
the evaluation pairing of V against its dual.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional

from .dmod import DModule, DVector, FactorKind, TwistedDModule
from .errors import UnsupportedCaseError, ValidationError
from .glmod import WedgeModule, dual_gl, tensor_gl
from .lattice import Weight, Window
from .linalg import vec_max_abs
from .tensormod import TensorModule, TVector, act_wn
from .weyl import WeylElement


class PairingTable:
    """Memoized weights phi(mu) of the diagonal duality pairing.

    phi(0) = 1, and phi grows by (mu_i + 1) along the i-th direction, with
    an extra sign on factors where x acts locally nilpotently; mu_i is the
    absolute index (the Laurent parameter included).
    """

    def __init__(self, p: DModule):
        self.p = p
        self._cache: Dict[tuple, Fraction] = {(0,) * p.n: Fraction(1)}

    def _step(self, i: int, k: int) -> Fraction:
        """phi(.. k+1 ..) / phi(.. k ..) on coordinate i at offset k."""
        f = self.p.factors[i]
        if f.kind is FactorKind.LAURENT:
            ratio = f.lam + k + 1
        elif f.kind is FactorKind.POLY:
            ratio = Fraction(k + 1)
        else:
            ratio = Fraction(-(k + 1))
        if ratio == 0:
            raise ValidationError("pairing degenerates on non-simple factor")
        return ratio

    def phi(self, label: tuple) -> Fraction:
        if label in self._cache:
            return self._cache[label]
        out = Fraction(1)
        for i, k in enumerate(label):
            t = 0
            while t < k:
                out *= self._step(i, t)
                t += 1
            while t > k:
                t -= 1
                out /= self._step(i, t)
        self._cache[label] = out
        return out


def pair(p: DModule, u: DVector, w: DVector,
         table: Optional[PairingTable] = None) -> Fraction:
    """Diagonal pairing of a vector of P against a vector of the twisted
    dual written on the same label set."""
    table = table or PairingTable(p)
    out = Fraction(0)
    for lab, c in u.items():
        cw = w.get(lab)
        if cw:
            out += c * cw * table.phi(lab)
    return out


def dual_carrier(p: DModule) -> TensorModule:
    """The module carrying the dual: twisted basis tensored with the top
    exterior power."""
    return TensorModule(TwistedDModule(p), WedgeModule(p.n, p.n))


def invariance_residual(p: DModule, x, samples: int, window: Window,
                        rng) -> Fraction:
    """max |<X u, w> + <u, X w>| over random window vectors; the pairing is
    invariant, so this must be exactly 0."""
    n = p.n
    carrier = dual_carrier(p)
    omega = tuple(range(n))
    table = PairingTable(p)
    plabels = p.labels_in_window(window)
    if not plabels:
        raise ValidationError("window contains no basis vectors")
    worst = Fraction(0)
    for _ in range(samples):
        u: DVector = {plabels[rng.randrange(len(plabels))]: Fraction(1)}
        w: DVector = {plabels[rng.randrange(len(plabels))]: Fraction(1)}
        xu = p.apply_weyl(_as_element(x, n), u)
        tw: TVector = {(lab, omega): c for lab, c in w.items()}
        xw_t = act_wn(carrier, x, tw)
        xw: DVector = {}
        for (lab, vl), c in xw_t.items():
            xw[lab] = xw.get(lab, Fraction(0)) + c
        total = pair(p, xu, w, table) + pair(p, u, xw, table)
        worst = max(worst, abs(total))
    return worst


def _as_element(x, n: int) -> WeylElement:
    if isinstance(x, WeylElement):
        return x
    return WeylElement.from_root(x)


def dual_tensor(t: TensorModule) -> TensorModule:
    """The restricted dual of a tensor module with finite-dimensional V:
    twist the Weyl-algebra side, dualize V, and absorb the top exterior
    power."""
    if not t.v.finite_dim:
        raise UnsupportedCaseError("duals need finite-dimensional V")
    if isinstance(t.p, TwistedDModule):
        p_new = t.p.base
    else:
        p_new = TwistedDModule(t.p)
    return TensorModule(p_new, tensor_gl(dual_gl(t.v), WedgeModule(t.n, t.n)))


def pairing_tensor(t: TensorModule, fv: TVector, gw: TVector,
                   table: Optional[PairingTable] = None) -> Fraction:
    """Product pairing of a vector of T(P, V) against a vector of its dual;
    V-labels pair by the dual-basis evaluation."""
    p = t.p if isinstance(t.p, DModule) else t.p.base
    table = table or PairingTable(p)
    out = Fraction(0)
    for (pl, vl), c in fv.items():
        for (pl2, (vl2, _omega)), c2 in gw.items():
            if pl == pl2 and vl == vl2:
                out += c * c2 * table.phi(pl)
    return out


def tensor_invariance_residual(t: TensorModule, x, samples: int,
                               window: Window, rng) -> Fraction:
    """Invariance of the tensor pairing under a vector field; must be 0."""
    dual = dual_tensor(t)
    p = t.p if isinstance(t.p, DModule) else t.p.base
    table = PairingTable(p)
    labels = t.labels_in_window(window)
    flipped = Window(
        tuple(-h for h in window.highs), tuple(-l for l in window.lows),
        window.margin,
    )
    dlabels = dual.labels_in_window(flipped)
    if not labels or not dlabels:
        raise ValidationError("window contains no basis vectors")
    worst = Fraction(0)
    for _ in range(samples):
        u: TVector = {labels[rng.randrange(len(labels))]: Fraction(1)}
        w: TVector = {dlabels[rng.randrange(len(dlabels))]: Fraction(1)}
        total = pairing_tensor(t, act_wn(t, x, u), w, table) + \
            pairing_tensor(t, u, act_wn(dual, x, w), table)
        worst = max(worst, abs(total))
    return worst
