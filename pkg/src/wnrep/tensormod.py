"""Tensor modules over the Lie algebra of polynomial vector fields.

A tensor module couples a Weyl-algebra weight module P with a gl(n) weight
module V on the vector space spanned by pairs (P-label, V-label).  The
vector field x^a d_j acts by

    x^a d_j (f (x) v) = (x^a d_j f) (x) v + sum_i  d_i(x^a) f (x) E_ij v

and the polynomial algebra acts on the P side alone.  On top of the action
this module provides supports and window multiplicities, the generalized
de Rham differential, an exact window closure heuristic for submodule
evidence, and the case classification of simple submodules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .dmod import DModule, TwistedDModule
from .errors import DimensionError, UnsupportedCaseError, ValidationError
from .glmod import (
    CharModule,
    DualModule,
    GlModule,
    RestrictionModule,
    TensorGlModule,
    WedgeModule,
    as_fundamental,
)
from .lattice import (
    Mode,
    ShiftedCone,
    SupportSet,
    Weight,
    Window,
    WnRoot,
    finmult_criterion,
    wn_roots_up_to,
)
from .linalg import RowSpan, SparseMatrix, vec_add, vec_max_abs, vec_scale
from .weyl import WeylElement

TLabel = Tuple[tuple, object]
TVector = Dict[TLabel, Fraction]


@dataclass(frozen=True)
class TensorModule:
    """The pair (P, V) with the vector-field and polynomial actions."""

    p: object  # DModule or TwistedDModule
    v: GlModule

    def __post_init__(self):
        if self.p.n != self.v.n:
            raise DimensionError("factors over different ambient dimensions")

    @property
    def n(self) -> int:
        return self.p.n

    def weight(self, label: TLabel) -> Weight:
        pl, vl = label
        return self.p.weight(pl) + self.v.weight(vl)

    def labels_of_weight(self, mu: Weight,
                         p_window: Optional[Window] = None) -> List[TLabel]:
        """Basis pairs of total weight mu; when V is infinite the P side
        must be confined to a window."""
        out = []
        if self.v.finite_dim:
            for vl in self.v.labels():
                wp = mu - self.v.weight(vl)
                if p_window is not None and not p_window.contains(wp):
                    continue
                pl = self.p.label_of_weight(wp)
                if pl is not None:
                    out.append((pl, vl))
            return sorted(out)
        if p_window is None:
            raise UnsupportedCaseError(
                "infinite V needs a window on the P side"
            )
        for pl in self.p.labels_in_window(p_window):
            rest = mu - self.p.weight(pl)
            for vl in self.v.labels_of_weight(rest):
                out.append((pl, vl))
        return sorted(out)

    def labels_in_window(self, window: Window) -> List[TLabel]:
        """Basis pairs whose total weight lies in the window."""
        out = []
        if self.v.finite_dim:
            for vl in self.v.labels():
                w = self.v.weight(vl)
                shifted = Window(
                    tuple(l - wi for l, wi in zip(window.lows, w)),
                    tuple(h - wi for h, wi in zip(window.highs, w)),
                    window.margin,
                )
                for pl in self.p.labels_in_window(shifted):
                    out.append((pl, vl))
            return sorted(out)
        for pl in self.p.labels_in_window(window):
            w = self.p.weight(pl)
            shifted = Window(
                tuple(l - wi for l, wi in zip(window.lows, w)),
                tuple(h - wi for h, wi in zip(window.highs, w)),
                window.margin,
            )
            for vl in self.v.labels_in_window(shifted):
                if window.contains(self.weight((pl, vl))):
                    out.append((pl, vl))
        return sorted(out)

    def __repr__(self):
        return f"T({self.p!r}, {self.v!r})"


# -- actions ------------------------------------------------------------------


def act_wn(t: TensorModule, r, tv: TVector) -> TVector:
    """Action of a vector field (a root vector or a general first-order
    operator) on a tensor-module vector."""
    if isinstance(r, WnRoot):
        fields = [(r.alpha, r.j, Fraction(1))]
    elif isinstance(r, WeylElement):
        fields = list(r.vector_field_terms())
    else:
        raise ValidationError("expected a root vector or vector field")
    n = t.n
    out: TVector = {}

    def accum(label, c):
        acc = out.get(label, Fraction(0)) + c
        if acc:
            out[label] = acc
        else:
            out.pop(label, None)

    for alpha, j, cf in fields:
        b = tuple(1 if k == j else 0 for k in range(n))
        for (pl, vl), cv in tv.items():
            hit = t.p.apply_weyl(
                WeylElement.monomial(alpha, b, 1), {pl: Fraction(1)}
            )
            for pl2, c2 in hit.items():
                accum((pl2, vl), cf * cv * c2)
            for i in range(n):
                if alpha[i] == 0:
                    continue
                da = tuple(
                    a - (1 if k == i else 0) for k, a in enumerate(alpha)
                )
                hit2 = t.p.apply_weyl(
                    WeylElement.monomial(da, (0,) * n, alpha[i]),
                    {pl: Fraction(1)},
                )
                for vl2, cvv in t.v.act(i, j, vl):
                    for pl2, c2 in hit2.items():
                        accum((pl2, vl2), cf * cv * c2 * cvv)
    return out


def act_on(t: TensorModule, alpha: tuple, tv: TVector) -> TVector:
    """Multiplication by the monomial x^alpha (acts on the P side only)."""
    n = t.n
    out: TVector = {}
    for (pl, vl), cv in tv.items():
        hit = t.p.apply_weyl(
            WeylElement.monomial(alpha, (0,) * n, 1), {pl: Fraction(1)}
        )
        for pl2, c2 in hit.items():
            acc = out.get((pl2, vl), Fraction(0)) + cv * c2
            if acc:
                out[(pl2, vl)] = acc
            else:
                out.pop((pl2, vl), None)
    return out


# -- support and multiplicity --------------------------------------------------


def _slice_data(v: GlModule):
    """Extract (shift, parent cone, kappa) when V is an eigenspace
    restriction, possibly twisted by one-dimensional factors or dualized."""
    if isinstance(v, RestrictionModule):
        cone = v.parent.support().cones[0]
        return Weight.zero(v.n), cone, v.kappa
    if isinstance(v, DualModule):
        inner = _slice_data(v.base)
        if inner is None:
            return None
        shift, cone, kappa = inner
        return -shift, cone.negate(), -kappa
    if isinstance(v, TensorGlModule):
        for one, other in ((v.left, v.right), (v.right, v.left)):
            if one.finite_dim and one.dim() == 1:
                inner = _slice_data(other)
                if inner is None:
                    return None
                shift, cone, kappa = inner
                return shift + one.weight(one.labels()[0]), cone, kappa
    return None


_NEG_INF = object()
_POS_INF = object()


def _le(a, b) -> bool:
    if a is _NEG_INF or b is _POS_INF:
        return True
    if a is _POS_INF or b is _NEG_INF:
        return False
    return a <= b


def _coord_bounds(mode: Mode, base: Fraction):
    if mode is Mode.POINT:
        return base, base
    if mode is Mode.NONNEG:
        return base, _POS_INF
    if mode is Mode.NONPOS:
        return _NEG_INF, base
    return _NEG_INF, _POS_INF


def _slice_minkowski(cone_p: ShiftedCone, cone_v: ShiftedCone,
                     kappa: Fraction) -> SupportSet:
    """Exact Minkowski sum of a cone with the total-weight-kappa slice of
    another cone.  Raises when the result is a staircase that the cone-union
    class cannot express."""
    n = cone_p.n
    mins = [_coord_bounds(m, b)[0]
            for m, b in zip(cone_v.modes, cone_v.base)]
    maxs = [_coord_bounds(m, b)[1]
            for m, b in zip(cone_v.modes, cone_v.base)]
    total_base = sum(cone_v.base.coords, Fraction(0))
    if (kappa - total_base).denominator != 1:
        return SupportSet(n, [])
    lo = _NEG_INF if any(m is _NEG_INF for m in mins) else sum(
        m for m in mins)
    hi = _POS_INF if any(m is _POS_INF for m in maxs) else sum(
        m for m in maxs)
    if not (_le(lo, kappa) and _le(kappa, hi)):
        return SupportSet(n, [])

    finite_up = all(m in (Mode.POINT, Mode.NONNEG) for m in cone_v.modes)
    finite_dn = all(m in (Mode.POINT, Mode.NONPOS) for m in cone_v.modes)
    if finite_up or finite_dn:
        points = _enumerate_slice(cone_v, kappa)
        return SupportSet(n, [cone_p.shift(w) for w in points])

    up_ok = any(
        mv in (Mode.NONNEG, Mode.FULL) and mp in (Mode.NONPOS, Mode.FULL)
        for mv, mp in zip(cone_v.modes, cone_p.modes)
    )
    dn_ok = any(
        mv in (Mode.NONPOS, Mode.FULL) and mp in (Mode.NONNEG, Mode.FULL)
        for mv, mp in zip(cone_v.modes, cone_p.modes)
    )
    if not (up_ok and dn_ok):
        if n == 2:
            return _slice_sum_dim2(cone_p, cone_v, kappa)
        raise UnsupportedCaseError(
            "support sum is a staircase outside the cone-union class"
        )

    modes, base = [], []
    for i in range(n):
        others_min = _NEG_INF if any(
            mins[j] is _NEG_INF for j in range(n) if j != i
        ) else sum(mins[j] for j in range(n) if j != i)
        others_max = _POS_INF if any(
            maxs[j] is _POS_INF for j in range(n) if j != i
        ) else sum(maxs[j] for j in range(n) if j != i)
        smin = mins[i]
        if others_max is not _POS_INF:
            forced = kappa - others_max
            smin = forced if smin is _NEG_INF or _le(smin, forced) else smin
        smax = maxs[i]
        if others_min is not _NEG_INF:
            forced = kappa - others_min
            smax = forced if smax is _POS_INF or _le(forced, smax) else smax
        mp = cone_p.modes[i]
        bp = cone_p.base[i]
        if mp is Mode.FULL:
            modes.append(Mode.FULL)
            base.append(bp + cone_v.base[i])
        elif mp is Mode.NONNEG:
            if smin is _NEG_INF:
                modes.append(Mode.FULL)
                base.append(bp + cone_v.base[i])
            else:
                modes.append(Mode.NONNEG)
                base.append(bp + smin)
        elif mp is Mode.NONPOS:
            if smax is _POS_INF:
                modes.append(Mode.FULL)
                base.append(bp + cone_v.base[i])
            else:
                modes.append(Mode.NONPOS)
                base.append(bp + smax)
        else:
            raise UnsupportedCaseError(
                "point coordinate against a sliced interval"
            )
    return SupportSet.single(Weight(base), tuple(modes))


def _sum_bounds(vals):
    if any(v is _NEG_INF for v in vals):
        return _NEG_INF
    if any(v is _POS_INF for v in vals):
        return _POS_INF
    return sum(vals, Fraction(0))


def _enumerate_slice(cone: ShiftedCone, kappa: Fraction) -> List[Weight]:
    """All points of the cone with coordinate sum kappa (finite by the
    caller's case analysis)."""
    out: List[Weight] = []
    lows = [_coord_bounds(m, b)[0] for m, b in zip(cone.modes, cone.base)]
    highs = [_coord_bounds(m, b)[1] for m, b in zip(cone.modes, cone.base)]

    def rec(i: int, left: Fraction, coords: list):
        if i == cone.n:
            if left == 0:
                out.append(Weight(coords))
            return
        rest_lo = _sum_bounds(lows[i + 1:])
        rest_hi = _sum_bounds(highs[i + 1:])
        lo_i = lows[i]
        if rest_hi is not _POS_INF:
            cand = left - rest_hi
            lo_i = cand if lo_i is _NEG_INF or _le(lo_i, cand) else lo_i
        hi_i = highs[i]
        if rest_lo is not _NEG_INF:
            cand = left - rest_lo
            hi_i = cand if hi_i is _POS_INF or _le(cand, hi_i) else hi_i
        if lo_i is _NEG_INF or hi_i is _POS_INF:
            raise UnsupportedCaseError("slice is not finite")
        val = lo_i
        while val <= hi_i:
            rec(i + 1, left - val, coords + [val])
            val += 1

    rec(0, kappa, [])
    return out


def _ray_translate_union(cone_p: ShiftedCone, v0: Weight,
                         d: tuple) -> SupportSet:
    """Union of cone_p + v0 + t*d over t >= 0, when it is again a cone.

    Nesting (d in the recession cone) collapses to t = 0; when every
    per-coordinate family grows monotonically the union is the product of
    the coordinate limits.  Anything else is a staircase.
    """
    n = cone_p.n
    rec_ok = all(
        (m is Mode.FULL)
        or (m is Mode.NONNEG and di >= 0)
        or (m is Mode.NONPOS and di <= 0)
        or (m is Mode.POINT and di == 0)
        for m, di in zip(cone_p.modes, d)
    )
    if rec_ok:
        return SupportSet(n, [cone_p.shift(v0)])
    grow_ok = all(
        (m is Mode.FULL)
        or (m is Mode.NONNEG and di <= 0)
        or (m is Mode.NONPOS and di >= 0)
        or (m is Mode.POINT and di == 0)
        for m, di in zip(cone_p.modes, d)
    )
    if grow_ok:
        modes = []
        for m, di in zip(cone_p.modes, d):
            if di != 0 and m in (Mode.NONNEG, Mode.NONPOS):
                modes.append(Mode.FULL)
            else:
                modes.append(m)
        return SupportSet.single(cone_p.base + v0, tuple(modes))
    raise UnsupportedCaseError(
        "support sum is a staircase outside the cone-union class"
    )


def _slice_sum_dim2(cone_p: ShiftedCone, cone_v: ShiftedCone,
                    kappa: Fraction) -> SupportSet:
    """Two-coordinate fallback: an infinite slice is a ray or a line in the
    direction (1, -1); handle the translate union exactly."""
    up = [m in (Mode.NONNEG, Mode.FULL) for m in cone_v.modes]
    dn = [m in (Mode.NONPOS, Mode.FULL) for m in cone_v.modes]
    mins = [_coord_bounds(m, b)[0] for m, b in zip(cone_v.modes, cone_v.base)]
    maxs = [_coord_bounds(m, b)[1] for m, b in zip(cone_v.modes, cone_v.base)]
    moves = []
    if up[0] and dn[1]:
        moves.append((1, -1))
    if up[1] and dn[0]:
        moves.append((-1, 1))
    if not moves:
        raise UnsupportedCaseError("infinite slice without moves")
    if len(moves) == 2:
        # both coordinates fully free: a line; anchor anywhere on it
        v0 = Weight([cone_v.base[0], kappa - cone_v.base[0]])
        out = _ray_translate_union(cone_p, v0, (1, -1))
        return out.union(_ray_translate_union(cone_p, v0, (-1, 1)))
    d = moves[0]
    i = 0 if d[0] > 0 else 1  # coordinate increasing along the ray
    j = 1 - i
    lo_i = mins[i]
    if maxs[j] is not _POS_INF:
        cand = kappa - maxs[j]
        lo_i = cand if lo_i is _NEG_INF or _le(lo_i, cand) else lo_i
    if lo_i is _NEG_INF:
        raise UnsupportedCaseError("slice ray has no extreme point")
    v0_coords = [Fraction(0), Fraction(0)]
    v0_coords[i] = lo_i
    v0_coords[j] = kappa - lo_i
    return _ray_translate_union(cone_p, Weight(v0_coords), d)


def tmod_support(t: TensorModule) -> SupportSet:
    """Exact support: Minkowski sum of the factor supports."""
    if t.v.finite_dim:
        return t.p.support() + t.v.support()
    data = _slice_data(t.v)
    if data is None:
        raise UnsupportedCaseError(
            "support needs V finite-dimensional or an eigenspace restriction"
        )
    shift, cone_v, kappa = data
    out = SupportSet(t.n, [])
    for cone_p in t.p.support().cones:
        out = out.union(
            _slice_minkowski(cone_p, cone_v, kappa).shift(shift)
        )
    return out


def tmod_mult(t: TensorModule, mu: Weight, window: Window) -> int:
    """Number of basis pairs of total weight mu whose P-component weight
    lies inside the window."""
    count = 0
    if t.v.finite_dim:
        for vl in t.v.labels():
            wp = mu - t.v.weight(vl)
            if window.contains(wp) and t.p.label_of_weight(wp) is not None:
                count += 1
        return count
    for pl in t.p.labels_in_window(window):
        rest = mu - t.p.weight(pl)
        count += len(t.v.labels_of_weight(rest))
    return count


# -- de Rham differential ------------------------------------------------------


def wedge_degree(t: TensorModule) -> int:
    if not isinstance(t.v, WedgeModule):
        raise ValidationError("module is not built on an exterior power")
    return t.v.k


def derham_target(t: TensorModule) -> TensorModule:
    k = wedge_degree(t)
    if k >= t.n:
        raise ValidationError("differential out of the top exterior power")
    return TensorModule(t.p, WedgeModule(t.n, k + 1))


def derham_d(t: TensorModule, tv: TVector) -> TVector:
    """d(f (x) v) = sum_i (d_i f) (x) (e_i wedge v); lands one exterior
    degree up."""
    k = wedge_degree(t)
    if k >= t.n:
        raise ValidationError("differential out of the top exterior power")
    n = t.n
    out: TVector = {}
    for (pl, vl), c in tv.items():
        for i in range(n):
            if i in vl:
                continue
            b = tuple(1 if s == i else 0 for s in range(n))
            hit = t.p.apply_weyl(
                WeylElement.monomial((0,) * n, b, 1), {pl: Fraction(1)}
            )
            if not hit:
                continue
            ins = sum(1 for s in vl if s < i)
            sign = Fraction(-1) ** ins
            new_vl = tuple(sorted(vl + (i,)))
            for pl2, c2 in hit.items():
                key = (pl2, new_vl)
                acc = out.get(key, Fraction(0)) + c * c2 * sign
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
    return out


def derham_complex_residual(p, window: Window, samples: int,
                            rng) -> Fraction:
    """Max coefficient of d(d(v)) over random window vectors and all
    composable exterior degrees; exactness demands 0."""
    n = p.n
    worst = Fraction(0)
    for k in range(0, max(n - 1, 0)):
        t0 = TensorModule(p, WedgeModule(n, k))
        t1 = derham_target(t0)
        labels = t0.labels_in_window(window)
        if not labels:
            continue
        for _ in range(samples):
            tv = random_tvector(labels, rng)
            dd = derham_d(t1, derham_d(t0, tv))
            worst = max(worst, vec_max_abs(dd))
    return worst


def random_tvector(labels: List[TLabel], rng, max_terms: int = 3,
                   bound: int = 4) -> TVector:
    out: TVector = {}
    for _ in range(min(max_terms, len(labels))):
        lab = labels[rng.randrange(len(labels))]
        c = 0
        while c == 0:
            c = rng.randint(-bound, bound)
        acc = out.get(lab, Fraction(0)) + c
        if acc:
            out[lab] = acc
        else:
            out.pop(lab, None)
    return out


# -- window closure heuristic --------------------------------------------------


def weight_components(t: TensorModule, tv: TVector) -> Dict[Weight, TVector]:
    comps: Dict[Weight, TVector] = {}
    for lab, c in tv.items():
        comps.setdefault(t.weight(lab), {})[lab] = c
    return comps


def submodule_closure(t: TensorModule, seed: TVector, window: Window,
                      gen_degree: int = 2) -> Dict[Weight, int]:
    """Dimensions, per interior weight, of the span generated from the seed
    by vector fields of monomial degree <= gen_degree, never leaving the
    window.

    Vectors are kept weight-homogeneous and exact, and images falling
    outside the window are dropped whole, so every reported vector lies in
    the true submodule: the counts are sound lower bounds that stabilize at
    the window-reachable multiplicity.
    """
    if not seed:
        raise ValidationError("closure needs a nonzero seed")
    for lab in seed:
        if not window.contains(t.weight(lab), interior=True):
            raise ValidationError("seed must sit inside the interior window")
    gens = [
        r for r in wn_roots_up_to(t.n, gen_degree - 1)
    ]
    spans: Dict[Weight, RowSpan] = {}
    queue: List[Tuple[Weight, TVector]] = []

    def insert(w: Weight, vec: TVector):
        span = spans.setdefault(w, RowSpan())
        before = span.dim
        red = span.reduce(vec)
        if red and span.insert(vec) and span.dim > before:
            queue.append((w, red))

    for w, comp in sorted(weight_components(t, seed).items()):
        insert(w, comp)
    while queue:
        w, vec = queue.pop(0)
        for r in gens:
            w2 = w + r.weight()
            if not window.contains(w2):
                continue
            img = act_wn(t, r, vec)
            if img:
                insert(w2, img)
    return {
        w: spans[w].dim
        for w in sorted(spans)
        if window.contains(w, interior=True)
    }


# -- classification -------------------------------------------------------------


TENSOR_SIMPLE = "TENSOR_SIMPLE"
DERHAM_IMAGE = "DERHAM_IMAGE"
TRIVIAL_SUB = "TRIVIAL_SUB"
NOT_FINITE_MULT = "NOT_FINITE_MULT"


def classify_case(t: TensorModule) -> Tuple[str, List[str]]:
    """Case classification of the unique simple submodule.

    Returns the case tag and explanatory notes.  Requires P with simple
    factors and V one of the simple constructors.
    """
    notes: List[str] = []
    p = t.p if isinstance(t.p, DModule) else t.p.descriptor()
    shadow_v = t.v.shadow()
    if shadow_v is None:
        raise UnsupportedCaseError("V has no shadow; cannot classify")
    if not finmult_criterion(p.shadow(), shadow_v):
        return NOT_FINITE_MULT, notes
    k = as_fundamental(t.v)
    if k is None:
        return TENSOR_SIMPLE, notes
    notes.append(f"V is the exterior power of degree {k}")
    if k == 0:
        if p.is_polynomial_module():
            notes.append("constants form the unique simple submodule")
            return TRIVIAL_SUB, notes
        return DERHAM_IMAGE, notes
    if k < t.n:
        return DERHAM_IMAGE, notes
    saturates = p.sum_partials_saturates()
    if saturates:
        notes.append(
            "partials saturate P, so the top differential is onto and the "
            "module is simple"
        )
        if p.is_polynomial_module():
            notes.append(
                "polynomial P at top degree: the differential image equals "
                "the whole module; window closure evidence attached to "
                "reports"
            )
        return TENSOR_SIMPLE, notes
    notes.append(
        "partials do not saturate P; the image of the top differential is "
        "the proper simple submodule"
    )
    return DERHAM_IMAGE, notes


# -- window matrices -------------------------------------------------------------


def window_matrix(t: TensorModule, r, domain: Window,
                  codomain: Window) -> SparseMatrix:
    """Sparse exact matrix of a vector field between window bases."""
    dom = t.labels_in_window(domain)
    cod = t.labels_in_window(codomain)

    def apply(label):
        return act_wn(t, r, {label: Fraction(1)})

    return SparseMatrix.of_operator(apply, dom, cod)
