"""Modules over the Levi algebra of a parabolic: vector fields in the
middle block of coordinates extended by a current algebra k tensored with
polynomials.

The carrier modules couple a tensor module over the middle-block vector
fields with a k-module on the outer coordinates; the defining axioms (the
derivation rule for vector fields and the multiplicativity rule for the
current part) are checked exactly on samples.  The package also materializes
the induced-picture comparison: the parabolic top of a suitably enlarged
tensor module matches the coupled module, support and multiplicities alike,
in the exactly-realizable configurations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .dmod import DModule, fpoly, laurent, poly
from .errors import (
    DimensionError,
    UnsupportedCaseError,
    ValidationError,
)
from .glmod import (
    GlModule,
    WedgeModule,
    as_fundamental,
    character,
    restrict_kappa,
    tensor_gl,
)
from .lattice import (
    Mode,
    ShiftedCone,
    SupportSet,
    Weight,
    Window,
    WnRoot,
    frac,
    wn_roots_up_to,
)
from .linalg import vec_add, vec_max_abs, vec_scale, vec_sub
from .tensormod import TensorModule, act_on, act_wn, tmod_support
from .weyl import WeylElement, vf_apply_monomial


@dataclass(frozen=True)
class LeviAlg:
    """Shape of the Levi algebra: n ambient coordinates, p leading and
    n-p-m trailing coordinates carrying the reductive part k (split into
    gl blocks), m middle coordinates carrying the vector fields."""

    n: int
    p: int
    m: int
    k_blocks: tuple

    def __post_init__(self):
        if self.m < 1 or self.p < 0 or self.p + self.m > self.n:
            raise ValidationError("need 1 <= m and p + m <= n")
        if sum(self.k_blocks) != self.k_size:
            raise ValidationError("k blocks must partition the outer "
                                  "coordinates")

    @property
    def q(self) -> int:
        return self.n - self.p - self.m

    @property
    def k_size(self) -> int:
        return self.p + self.q

    @property
    def k_coords(self) -> tuple:
        return tuple(range(self.p)) + tuple(range(self.p + self.m, self.n))

    @property
    def m_coords(self) -> tuple:
        return tuple(range(self.p, self.p + self.m))

    def block_of(self, local: int) -> int:
        acc = 0
        for bi, size in enumerate(self.k_blocks):
            acc += size
            if local < acc:
                return bi
        raise ValidationError("k index out of range")

    def same_block(self, i: int, j: int) -> bool:
        return self.block_of(i) == self.block_of(j)

    def abelian(self) -> bool:
        return all(b == 1 for b in self.k_blocks)


class FRSModule:
    """Coupled module: a tensor module over the middle-block vector fields
    tensored with a k-module, on basis pairs (r-label, s-label)."""

    def __init__(self, levi: LeviAlg, r: TensorModule, s: GlModule):
        if r.n != levi.m:
            raise DimensionError("tensor factor must live over m variables")
        if s.n != levi.k_size:
            raise DimensionError("k-module over the wrong number of "
                                 "coordinates")
        self.levi = levi
        self.r = r
        self.s = s

    def weight(self, label) -> Weight:
        rl, sl = label
        wr = self.r.weight(rl)
        ws = self.s.weight(sl)
        out = [Fraction(0)] * self.levi.n
        for local, g in enumerate(self.levi.k_coords):
            out[g] = ws[local]
        for local, g in enumerate(self.levi.m_coords):
            out[g] = wr[local]
        return Weight(out)

    def labels_in_window(self, window: Window) -> list:
        if window.n != self.levi.n:
            raise DimensionError("window over the wrong ambient dimension")
        sub_m = Window(
            tuple(window.lows[g] for g in self.levi.m_coords),
            tuple(window.highs[g] for g in self.levi.m_coords),
            window.margin,
        )
        sub_k = Window(
            tuple(window.lows[g] for g in self.levi.k_coords),
            tuple(window.highs[g] for g in self.levi.k_coords),
            window.margin,
        )
        return sorted(
            (rl, sl)
            for rl in self.r.labels_in_window(sub_m)
            for sl in self.s.labels_in_window(sub_k)
        )

    # -- actions ------------------------------------------------------------

    def act_vf(self, x, vec: Dict) -> Dict:
        """A middle-block vector field acts through the tensor factor."""
        out: Dict = {}
        grouped: Dict[object, TVector] = {}
        for (rl, sl), c in vec.items():
            grouped.setdefault(sl, {})[rl] = c
        for sl, rvec in grouped.items():
            img = act_wn(self.r, x, rvec)
            for rl, c in img.items():
                key = (rl, sl)
                acc = out.get(key, Fraction(0)) + c
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return out

    def act_current(self, alpha: tuple, i: int, j: int, vec: Dict) -> Dict:
        """x^alpha tensor E_ij (local k indices) multiplies the tensor
        factor and acts on the k-module."""
        if not self.levi.same_block(i, j):
            raise ValidationError("current generator crosses k blocks")
        out: Dict = {}
        for (rl, sl), c in vec.items():
            img_r = act_on(self.r, alpha, {rl: Fraction(1)})
            for sl2, cs in self.s.act(i, j, sl):
                for rl2, cr in img_r.items():
                    key = (rl2, sl2)
                    acc = out.get(key, Fraction(0)) + c * cs * cr
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
        return out

    def act_poly(self, alpha: tuple, vec: Dict) -> Dict:
        """The polynomial algebra of the middle block multiplies the tensor
        factor."""
        out: Dict = {}
        for (rl, sl), c in vec.items():
            img_r = act_on(self.r, alpha, {rl: Fraction(1)})
            for rl2, cr in img_r.items():
                key = (rl2, sl)
                acc = out.get(key, Fraction(0)) + c * cr
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return out

    def support(self) -> SupportSet:
        """Exact support; the k-module must have an explicit support."""
        cones = []
        for ck in self.s.support().cones:
            for cm in tmod_support(self.r).cones:
                base = [Fraction(0)] * self.levi.n
                modes = [Mode.POINT] * self.levi.n
                for local, g in enumerate(self.levi.k_coords):
                    base[g] = ck.base[local]
                    modes[g] = ck.modes[local]
                for local, g in enumerate(self.levi.m_coords):
                    base[g] = cm.base[local]
                    modes[g] = cm.modes[local]
                cones.append(ShiftedCone(Weight(base), tuple(modes)))
        return SupportSet(self.levi.n, cones)


def act_levi(f: FRSModule, elem, vec: Dict) -> Dict:
    """Dispatch an element of the Levi algebra.

    elem is ("W", vector field over m), ("C", alpha, i, j) for
    x^alpha tensor E_ij, or ("O", alpha) for plain multiplication.
    """
    tag = elem[0]
    if tag == "W":
        return f.act_vf(elem[1], vec)
    if tag == "C":
        return f.act_current(elem[1], elem[2], elem[3], vec)
    if tag == "O":
        return f.act_poly(elem[1], vec)
    raise ValidationError(f"unknown Levi element tag {tag!r}")


def check_g_axioms(f: FRSModule, samples: int, window: Window,
                   rng) -> Fraction:
    """Residuals of the two defining axioms and the semidirect bracket.

    cond1:  X(g v) = g X(v) + X(g) v        (vector fields are derivations)
    cond2:  (h ox Y)(g v) = (hg)(Y v)        (currents are O-linear)
    bracket: [X, g ox Y] = X(g) ox Y
    """
    m = f.levi.m
    labels = f.labels_in_window(window)
    if not labels:
        raise ValidationError("window contains no basis vectors")
    roots = [r for r in wn_roots_up_to(m, 2)]
    monoms = [tuple(mono) for mono in _monomials_up_to(m, 2)]
    k_pairs = [
        (i, j)
        for i in range(f.levi.k_size)
        for j in range(f.levi.k_size)
        if f.levi.same_block(i, j)
    ]
    worst = Fraction(0)
    for _ in range(samples):
        v = {labels[rng.randrange(len(labels))]: Fraction(rng.randint(1, 3))}
        x = roots[rng.randrange(len(roots))]
        g = monoms[rng.randrange(len(monoms))]
        h = monoms[rng.randrange(len(monoms))]
        i, j = k_pairs[rng.randrange(len(k_pairs))]

        gv = f.act_poly(g, v)
        # cond1
        lhs = f.act_vf(x, gv)
        rhs = vec_add(
            f.act_poly(g, f.act_vf(x, v)),
            _apply_poly_image(f, WeylElement.from_root(x), g, v),
        )
        worst = max(worst, vec_max_abs(vec_sub(lhs, rhs)))
        # cond2
        lhs2 = f.act_current(h, i, j, gv)
        hg = tuple(a + b for a, b in zip(h, g))
        rhs2 = f.act_poly(hg, f.act_current((0,) * m, i, j, v))
        worst = max(worst, vec_max_abs(vec_sub(lhs2, rhs2)))
        # semidirect bracket
        cgv = f.act_current(g, i, j, v)
        lhs3 = vec_sub(f.act_vf(x, cgv), f.act_current(g, i, j,
                                                       f.act_vf(x, v)))
        rhs3: Dict = {}
        for gamma, c in vf_apply_monomial(WeylElement.from_root(x), g):
            rhs3 = vec_add(rhs3, vec_scale(f.act_current(gamma, i, j, v), c))
        worst = max(worst, vec_max_abs(vec_sub(lhs3, rhs3)))
    return worst


def _apply_poly_image(f: FRSModule, x_elem: WeylElement, g: tuple,
                      v: Dict) -> Dict:
    out: Dict = {}
    for gamma, c in vf_apply_monomial(x_elem, g):
        out = vec_add(out, vec_scale(f.act_poly(gamma, v), c))
    return out


def _monomials_up_to(n: int, deg: int):
    if n == 0:
        yield ()
        return
    for first in range(deg + 1):
        for rest in _monomials_up_to(n - 1, deg - first):
            yield (first,) + rest


# -- parabolic data and tops -----------------------------------------------------


@dataclass(frozen=True)
class ParabolicData:
    """The defining functional of a parabolic; root spaces split by the
    sign of the pairing against it."""

    gamma: Weight

    def pairing(self, root_weight: Weight) -> Fraction:
        return sum(
            (g * w for g, w in zip(self.gamma, root_weight)), Fraction(0)
        )

    def sign_of(self, r: WnRoot) -> int:
        v = self.pairing(r.weight())
        return (v > 0) - (v < 0)


def standard_gamma(levi: LeviAlg) -> ParabolicData:
    """Strictly decreasing positive values on the leading block, zero on
    the middle, strictly decreasing negative on the trailing block; this
    makes k abelian exactly when all blocks have size one."""
    coords = [Fraction(0)] * levi.n
    for t in range(levi.p):
        coords[t] = Fraction(levi.p - t)
    for t in range(levi.q):
        coords[levi.p + levi.m + t] = Fraction(-(t + 1))
    return ParabolicData(Weight(coords))


def _raise_intervals(cone: ShiftedCone, lam: Weight, minus_at: Optional[int]):
    """Per-coordinate admissible ranges of a root's exponent vector moving
    lam into the cone; None when empty."""
    lows, highs = [], []
    for i, (li, bi, m) in enumerate(zip(lam, cone.base, cone.modes)):
        if i == minus_at:
            target = li - 1
            d = target - bi
            if m is Mode.POINT:
                ok = d == 0
            else:
                ok = d.denominator == 1 and (
                    (m is Mode.NONNEG and d >= 0)
                    or (m is Mode.NONPOS and d <= 0)
                    or m is Mode.FULL
                )
            if not ok:
                return None
            lows.append(Fraction(-1))
            highs.append(Fraction(-1))
            continue
        d = bi - li
        if d.denominator != 1:
            return None
        if m is Mode.POINT:
            if d < 0:
                return None
            lows.append(d)
            highs.append(d)
        elif m is Mode.NONNEG:
            lows.append(max(Fraction(0), d))
            highs.append(None)  # unbounded
        elif m is Mode.NONPOS:
            if d < 0:
                return None
            lows.append(Fraction(0))
            highs.append(d)
        else:
            lows.append(Fraction(0))
            highs.append(None)
    return lows, highs


def raises_into_support(supp: SupportSet, lam: Weight,
                        pd: ParabolicData) -> bool:
    """Whether some root with positive pairing moves lam into the support.

    Exact: for each cone and each choice of the lowered coordinate the
    admissible exponents form a box, and the supremum of the pairing over
    the box decides existence.
    """
    gamma = pd.gamma
    for cone in supp.cones:
        for minus_at in [None] + list(range(len(lam))):
            got = _raise_intervals(cone, lam, minus_at)
            if got is None:
                continue
            lows, highs = got
            sup = Fraction(0)
            unbounded = False
            for gi, lo, hi in zip(gamma, lows, highs):
                if gi > 0:
                    if hi is None:
                        unbounded = True
                        break
                    sup += gi * hi
                elif gi < 0:
                    sup += gi * lo
            if unbounded or sup > 0:
                return True
    return False


def p_top(module_like, supp: SupportSet, pd: ParabolicData,
          window: Window) -> list:
    """Labels in the window whose weight admits no raise staying in the
    support; the per-label decision is exact, not window-limited."""
    out = []
    for lab in module_like.labels_in_window(window):
        w = module_like.weight(lab)
        if not raises_into_support(supp, w, pd):
            out.append(lab)
    return out


def p_top_support(supp: SupportSet, pd: ParabolicData) -> SupportSet:
    """Exact support of the parabolic top for a single-cone support: every
    coordinate with nonzero pairing value flattens to its extreme point,
    provided the cone is bounded in that direction."""
    if len(supp.cones) != 1:
        raise UnsupportedCaseError(
            "top support computed only for single-cone supports"
        )
    cone = supp.cones[0]
    gamma = pd.gamma
    base, modes = list(cone.base.coords), list(cone.modes)
    for i, g in enumerate(gamma):
        if g == 0:
            continue
        m = modes[i]
        if g > 0:
            if m in (Mode.NONNEG, Mode.FULL):
                return SupportSet(supp.n, [])
            modes[i] = Mode.POINT
        else:
            if m in (Mode.NONPOS, Mode.FULL):
                return SupportSet(supp.n, [])
            modes[i] = Mode.POINT
    return SupportSet.single(Weight(base), tuple(modes))


# -- the enlarged tensor module picture -------------------------------------------


def tilde_p(p: DModule, lead: int, n: int) -> DModule:
    """Pad a middle-block module with Fourier-twisted polynomial factors in
    front and plain polynomial factors behind."""
    if lead < 0 or lead + p.n > n:
        raise ValidationError("padding does not fit the ambient dimension")
    factors = [fpoly() for _ in range(lead)]
    factors += list(p.factors)
    factors += [poly() for _ in range(n - lead - p.n)]
    return DModule(factors)


def hat_s_generic(n: int, s_weight: Fraction, v_weight: Fraction) -> GlModule:
    """Simple highest-weight gl(2)-module with highest weight
    (s+1, c), realized as a determinant twist of an eigenspace restriction;
    needs s + 1 - c nonintegral so the module is the full induced one."""
    if n != 2:
        raise UnsupportedCaseError("generic realization implemented for "
                                   "two coordinates")
    s, c = frac(s_weight), frac(v_weight)
    if (s + 1 - c).denominator == 1:
        raise UnsupportedCaseError(
            "non-generic parameters: the induced module is not simple"
        )
    mu = c - s - 2
    kappa = c - s - 3
    base = restrict_kappa(DModule([fpoly(), laurent(mu)]), kappa)
    det_twist = character([s + 2, s + 2])
    return tensor_gl(det_twist, base)


def backtotensor_check(n: int, p: int, m: int, pmod: DModule, v: GlModule,
                       s: GlModule, window: Window) -> dict:
    """Compare the coupled Levi module with the parabolic top of the
    enlarged tensor module: support equality and window multiplicities.

    Supported configurations: abelian k with S a character, and either
    (a) trivial S with V an exterior power (the enlarged module pairs with
    an exterior power), or (b) the generic character case at p = m = 1,
    n = 2 realized through an eigenspace restriction.
    """
    levi = LeviAlg(n, p, m, (1,) * (n - m))
    if pmod.n != m:
        raise DimensionError("middle-block module over the wrong dimension")
    if s.n != levi.k_size or not s.finite_dim or s.dim() != 1:
        raise UnsupportedCaseError("S must be a character of abelian k")
    r = TensorModule(pmod, v)
    frs = FRSModule(levi, r, s)
    pd = standard_gamma(levi)

    s_w = s.weight(s.labels()[0])
    fund = as_fundamental(v)
    if all(c == 0 for c in s_w) and fund is not None:
        hat = WedgeModule(n, p + fund)
    elif p == 1 and m == 1 and levi.q == 0 and v.finite_dim and v.dim() == 1:
        c = v.weight(v.labels()[0])[0]
        hat = hat_s_generic(n, s_w[0], c)
    else:
        raise UnsupportedCaseError(
            "enlarged-module realization unavailable for this configuration"
        )

    tp = tilde_p(pmod, p, n)
    that = TensorModule(tp, hat)
    supp_t = tmod_support(that)
    supp_f = frs.support()
    top = p_top_support(supp_t, pd)

    support_equal = top.equals(supp_f)
    f_inside = supp_f.subset_of(supp_t)

    rows = []
    mult_match = True
    sub_m = Window(
        tuple(window.lows[g] for g in levi.m_coords),
        tuple(window.highs[g] for g in levi.m_coords),
        window.margin,
    )
    seen = set()
    for rl in r.labels_in_window(sub_m):
        wm = r.weight(rl)
        mu_coords = [Fraction(0)] * n
        for local, g in enumerate(levi.k_coords):
            mu_coords[g] = s_w[local]
        for local, g in enumerate(levi.m_coords):
            mu_coords[g] = wm[local]
        mu = Weight(mu_coords)
        if mu in seen:
            continue
        seen.add(mu)
        mult_f = len(r.labels_of_weight(wm, p_window=sub_m)) * 1
        mult_t = len(that.labels_of_weight(mu, p_window=window))
        rows.append((mu, mult_f, mult_t))
        if mult_f != mult_t:
            mult_match = False
    rows.sort(key=lambda row: row[0].coords)

    return {
        "support_equal": support_equal,
        "f_support_inside": f_inside,
        "mult_match": mult_match,
        "rows": rows,
        "top_support": top,
        "f_support": supp_f,
        "t_support": supp_t,
        "hat_module": repr(hat),
        "tilde_p": repr(tp),
        "pass": support_equal and f_inside and mult_match,
    }
