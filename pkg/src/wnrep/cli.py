"""Command-line surface: descriptor-driven checks with machine-readable
reports.

Every command prints one JSON report (or a CSV table with --format csv).
Rationals are serialized as exact "p/q" strings; reports are byte-identical
across runs and across WNREP_THREADS settings.  Exit code 0 means every
verification the command ran passed, 1 means some check failed, 2 means the
inputs were rejected.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .descriptors import (
    build_glmodule,
    parse_dmodule,
    print_dmodule,
    print_glmodule,
)
from .dmod import DModule, TwistedDModule
from .duality import dual_tensor
from .errors import WnrepError
from .glmod import WedgeModule
from .lattice import SupportSet, Weight, Window, frac
from .levi import backtotensor_check
from .localize import (
    TwistData,
    integer_conjugation_residual,
    localize,
    twist_action_check,
    twisted_localize,
)
from .tensormod import (
    TensorModule,
    classify_case,
    derham_complex_residual,
    derham_d,
    random_tvector,
    submodule_closure,
    tmod_mult,
    tmod_support,
)
from .weyl import WeylElement


def thread_count() -> int:
    raw = os.environ.get("WNREP_THREADS", "1")
    try:
        v = int(raw)
    except ValueError:
        return 1
    return max(1, v)


def thread_map(fn, items):
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# -- serialization ----------------------------------------------------------------


def ser(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Weight):
        return [str(c) for c in x.coords]
    if isinstance(x, SupportSet):
        return [
            {
                "base": [str(c) for c in cone.base.coords],
                "modes": [m.value for m in cone.modes],
            }
            for cone in x.cones
        ]
    if isinstance(x, dict):
        return {str(k): ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [ser(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return repr(x)


def emit(report: dict, fmt: str) -> int:
    if fmt == "csv":
        rows = report.get("results", {}).get("rows")
        if rows is not None:
            print("weight,dim" if rows and len(rows[0]) == 2 else
                  ",".join(f"col{i}" for i in range(len(rows[0]) if rows
                                                    else 0)))
            for row in rows:
                print(",".join(
                    " ".join(v) if isinstance(v, list) else str(v)
                    for v in (ser(c) for c in row)
                ))
        else:
            for key, val in report.get("results", {}).items():
                print(f"{key},{json.dumps(ser(val))}")
    else:
        print(json.dumps(ser(report), indent=2))
    if report.get("error"):
        return 2
    return 0 if report.get("pass", True) else 1


def base_report(command: str, args) -> dict:
    inputs = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "format", "command") and v is not None
    }
    return {"command": command, "version": __version__,
            "inputs": ser(inputs), "results": {}, "notes": []}


# -- shared builders ---------------------------------------------------------------


def _tensor_from_args(args) -> TensorModule:
    p = parse_dmodule(args.P)
    v = build_glmodule(args.V, p.n) if args.V else WedgeModule(p.n, 0)
    return TensorModule(p, v)


def _window(args, n: int) -> Window:
    return Window.radius(n, frac(args.window), args.margin)


# -- commands ----------------------------------------------------------------------


def cmd_support(args) -> dict:
    rep = base_report("support", args)
    p = parse_dmodule(args.P)
    if args.V:
        t = TensorModule(p, build_glmodule(args.V, p.n))
        supp = tmod_support(t)
    else:
        supp = p.support()
    rep["results"]["support"] = ser(supp)
    rep["pass"] = True
    return rep


def cmd_mult(args) -> dict:
    rep = base_report("mult", args)
    t = _tensor_from_args(args)
    window = _window(args, t.n)
    # rows cover the interior so that boundary truncation never shows
    inner = Window(
        tuple(l + window.margin for l in window.lows),
        tuple(h - window.margin for h in window.highs),
        0,
    )
    weights = sorted({t.weight(lab) for lab in t.labels_in_window(inner)})
    dims = thread_map(lambda mu: tmod_mult(t, mu, window), weights)
    rep["results"]["rows"] = [
        [ser(mu), d] for mu, d in zip(weights, dims)
    ]
    rep["pass"] = True
    return rep


def cmd_criterion(args) -> dict:
    rep = base_report("criterion", args)
    p = parse_dmodule(args.P)
    v = build_glmodule(args.V, p.n)
    shadow_v = v.shadow()
    if shadow_v is None:
        raise WnrepError("V has no shadow")
    from .lattice import finmult_criterion

    rep["results"]["finite_multiplicities"] = finmult_criterion(
        p.shadow(), shadow_v
    )
    rep["pass"] = True
    return rep


def cmd_derham(args) -> dict:
    rep = base_report("derham", args)
    p = parse_dmodule(args.P)
    window = _window(args, p.n)
    rng = random.Random(args.seed)
    residual = derham_complex_residual(p, window, args.samples, rng)
    rep["results"]["max_residual"] = ser(residual)
    rep["pass"] = residual == 0
    return rep


def cmd_closure(args) -> dict:
    rep = base_report("closure", args)
    t = _tensor_from_args(args)
    window = _window(args, t.n)
    rng = random.Random(args.seed)
    interior = Window(window.lows, window.highs, 0)
    if args.seed_kind == "constant":
        pl = tuple(0 for _ in range(t.n))
        vl = t.v.labels()[0]
        seed = {(pl, vl): Fraction(1)}
    elif args.seed_kind == "derham-image":
        k = t.v.k if isinstance(t.v, WedgeModule) else None
        if not k:
            raise WnrepError("derham-image seeds need V = wedge(k), k >= 1")
        below = TensorModule(t.p, WedgeModule(t.n, k - 1))
        # the differential shifts weights by one step down
        deep = Window(
            tuple(l + window.margin + 1 for l in window.lows),
            tuple(h - window.margin for h in window.highs),
            0,
        )
        labels = below.labels_in_window(deep)
        seed = derham_d(below, random_tvector(labels, rng))
    else:
        inner = Window(
            tuple(l + window.margin for l in window.lows),
            tuple(h - window.margin for h in window.highs),
            0,
        )
        labels = t.labels_in_window(inner)
        seed = random_tvector(labels, rng)
    dims = submodule_closure(t, seed, window, args.gen_degree)
    rep["results"]["rows"] = [[ser(w), d] for w, d in sorted(dims.items())]
    rep["notes"].append(
        "window closure is evidence, not proof: dimensions are exact lower "
        "bounds for the generated submodule inside the window"
    )
    rep["pass"] = True
    return rep


def cmd_localize(args) -> dict:
    rep = base_report("localize", args)
    p = parse_dmodule(args.P)
    idx = args.at - 1
    c = frac(args.exp)
    out = twisted_localize(p, idx, c, args.elem) if c else localize(
        p, idx, args.elem)
    rep["results"]["module"] = print_dmodule(out)
    rep["results"]["support"] = ser(out.support())
    rep["results"]["non_simple"] = not out.all_simple
    rep["pass"] = True
    return rep


def cmd_twist(args) -> dict:
    rep = base_report("twist", args)
    p = parse_dmodule(args.P)
    idx = args.at - 1
    c = frac(args.exp)
    t = TwistData(idx, args.elem, c)
    window = _window(args, p.n)
    rng = random.Random(args.seed)
    gens = [WeylElement.x(i, p.n) for i in range(p.n)]
    gens += [WeylElement.d(i, p.n) for i in range(p.n)]
    residual = Fraction(0)
    for u in gens:
        residual = max(
            residual,
            twist_action_check(p, t, u, args.samples, window, rng),
        )
    rep["results"]["action_residual"] = ser(residual)
    ok = residual == 0
    if c.denominator == 1:
        conj = Fraction(0)
        for u in gens:
            conj = max(
                conj,
                integer_conjugation_residual(p, t, u, args.samples, window,
                                             rng),
            )
        rep["results"]["conjugation_residual"] = ser(conj)
        ok = ok and conj == 0
    rep["results"]["module"] = print_dmodule(
        twisted_localize(p, idx, c, args.elem)
    )
    rep["pass"] = ok
    return rep


def cmd_dualize(args) -> dict:
    rep = base_report("dualize", args)
    t = _tensor_from_args(args)
    window = _window(args, t.n)
    dual = dual_tensor(t)
    rep["results"]["dual_p"] = print_dmodule(
        dual.p.descriptor() if isinstance(dual.p, TwistedDModule)
        else dual.p
    )
    rep["results"]["dual_v"] = print_glmodule(dual.v)
    rows = []
    ok = True
    inner = Window(
        tuple(l + window.margin for l in window.lows),
        tuple(h - window.margin for h in window.highs),
        0,
    )
    weights = sorted({t.weight(lab) for lab in t.labels_in_window(inner)})
    for mu in weights:
        neg = Weight([-c for c in mu.coords])
        flipped = Window(
            tuple(-h for h in window.highs), tuple(-l for l in window.lows),
            window.margin,
        )
        d1 = tmod_mult(t, mu, window)
        d2 = tmod_mult(dual, neg, flipped)
        rows.append([ser(mu), d1, d2])
        ok = ok and d1 == d2
    rep["results"]["rows"] = rows
    rep["pass"] = ok
    return rep


def cmd_classify(args) -> dict:
    rep = base_report("classify", args)
    t = _tensor_from_args(args)
    case, notes = classify_case(t)
    rep["results"]["case"] = case
    rep["notes"].extend(notes)
    rep["pass"] = True
    return rep


def cmd_levi_check(args) -> dict:
    rep = base_report("levi-check", args)
    pmod = parse_dmodule(args.P)
    v = build_glmodule(args.V, args.m)
    s = build_glmodule(args.S, args.n - args.m)
    window = _window(args, args.n)
    out = backtotensor_check(args.n, args.p, args.m, pmod, v, s, window)
    rep["results"]["support_equal"] = out["support_equal"]
    rep["results"]["f_support_inside"] = out["f_support_inside"]
    rep["results"]["mult_match"] = out["mult_match"]
    rep["results"]["hat_module"] = out["hat_module"]
    rep["results"]["tilde_p"] = out["tilde_p"]
    rep["results"]["top_support"] = ser(out["top_support"])
    rep["results"]["rows"] = [
        [ser(mu), mf, mt] for mu, mf, mt in out["rows"]
    ]
    rep["pass"] = out["pass"]
    return rep


# -- argument plumbing ---------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wnrep",
        description="exact checks for weight modules over polynomial "
                    "vector fields",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, window_default="4"):
        sp.add_argument("--window", default=window_default,
                        help="box radius per coordinate")
        sp.add_argument("--margin", type=int, default=1,
                        help="interior margin for reported results")
        sp.add_argument("--samples", type=int, default=50)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("support", help="exact support of P or T(P,V)")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V")
    common(sp)
    sp.set_defaults(func=cmd_support)

    sp = sub.add_parser("mult", help="window multiplicity table of T(P,V)")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V")
    common(sp)
    sp.set_defaults(func=cmd_mult)

    sp = sub.add_parser("criterion",
                        help="finite-multiplicity criterion for T(P,V)")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V", required=True)
    common(sp)
    sp.set_defaults(func=cmd_criterion)

    sp = sub.add_parser("derham", help="exactness residual of d compose d")
    sp.add_argument("--P", required=True)
    common(sp)
    sp.set_defaults(func=cmd_derham)

    sp = sub.add_parser("closure",
                        help="window submodule closure from a seed")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V")
    sp.add_argument("--gen-degree", type=int, default=2, dest="gen_degree")
    sp.add_argument("--seed-kind", choices=("random", "constant",
                                            "derham-image"),
                    default="random", dest="seed_kind")
    common(sp)
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("localize", help="(twisted) localization descriptor")
    sp.add_argument("--P", required=True)
    sp.add_argument("--at", type=int, required=True,
                    help="coordinate, 1-based")
    sp.add_argument("--elem", choices=("x", "d"), default="x")
    sp.add_argument("--exp", default="0", help="twist exponent")
    common(sp)
    sp.set_defaults(func=cmd_localize)

    sp = sub.add_parser("twist", help="verify the twisted-action identity")
    sp.add_argument("--P", required=True)
    sp.add_argument("--at", type=int, required=True)
    sp.add_argument("--elem", choices=("x", "d"), default="x")
    sp.add_argument("--exp", required=True)
    common(sp)
    sp.set_defaults(func=cmd_twist)

    sp = sub.add_parser("dualize",
                        help="dual descriptor and multiplicity comparison")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V")
    common(sp)
    sp.set_defaults(func=cmd_dualize)

    sp = sub.add_parser("classify",
                        help="simple-submodule case classification")
    sp.add_argument("--P", required=True)
    sp.add_argument("--V", required=True)
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("levi-check",
                        help="coupled module vs parabolic top comparison")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--P", required=True)
    sp.add_argument("--V", required=True)
    sp.add_argument("--S", required=True)
    common(sp)
    sp.set_defaults(func=cmd_levi_check)

    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        report = args.func(args)
    except WnrepError as e:
        report = {
            "command": args.command,
            "error": {"code": e.code, "message": str(e)},
        }
    return emit(report, args.format)


if __name__ == "__main__":
    sys.exit(main())
