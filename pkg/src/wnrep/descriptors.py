"""Small descriptor language for module constructions.

Grammar:

    dmodule  := factor ("*" factor)*
    factor   := "O" | "OF" | "XL(" rational ")"
    glmodule := atom ("#" atom)*
    atom     := "wedge(" int ")" | "sym(" int ")"
              | "char(" rational ("," rational)* ")"
              | "dual(" glmodule ")"
              | "resD(" dmodule ";" rational ")"

Exterior and symmetric powers take the ambient dimension from context
(usually the paired Weyl-algebra module); characters and restrictions fix
it themselves.  Parsing and printing round-trip on canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .dmod import DFactor, DModule, FactorKind, fpoly, laurent, poly
from .errors import ParseError, ValidationError
from .glmod import (
    CharModule,
    DualModule,
    GlModule,
    RestrictionModule,
    SymModule,
    TensorGlModule,
    WedgeModule,
    restrict_kappa,
)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += len(ch)

    def try_word(self, word: str) -> bool:
        self.skip_ws()
        if self.text.startswith(word, self.pos):
            self.pos += len(word)
            return True
        return False

    def rational(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
        tok = self.text[start:self.pos]
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed rational {tok!r}", start)

    def integer(self) -> int:
        v = self.rational()
        if v.denominator != 1:
            raise ParseError("expected an integer", self.pos)
        return int(v)

    def done(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError("unexpected trailing input", self.pos)


def parse_dmodule(text: str) -> DModule:
    sc = _Scanner(text)
    mod = _dmodule(sc)
    sc.done()
    return mod


def _dmodule(sc: _Scanner) -> DModule:
    factors = [_factor(sc)]
    while sc.peek() == "*":
        sc.expect("*")
        factors.append(_factor(sc))
    return DModule(factors)


def _factor(sc: _Scanner) -> DFactor:
    start = sc.pos
    if sc.try_word("OF"):
        return fpoly()
    if sc.try_word("O"):
        return poly()
    if sc.try_word("XL"):
        sc.expect("(")
        lam = sc.rational()
        sc.expect(")")
        if lam.denominator == 1:
            raise ParseError("integral twist parameter in XL(...)", start)
        return laurent(lam)
    raise ParseError("unknown factor kind", sc.pos)


# -- gl descriptors ------------------------------------------------------------


class GlAst:
    """Parsed gl-module expression; built into a module once the ambient
    dimension is known."""

    def __init__(self, kind: str, payload):
        self.kind = kind
        self.payload = payload

    def intrinsic_n(self) -> Optional[int]:
        if self.kind == "char":
            return len(self.payload)
        if self.kind == "resD":
            return self.payload[0].n
        if self.kind == "dual":
            return self.payload.intrinsic_n()
        if self.kind == "tensor":
            left, right = self.payload
            ln, rn = left.intrinsic_n(), right.intrinsic_n()
            if ln is not None and rn is not None and ln != rn:
                raise ValidationError("tensor factors fix different "
                                      "ambient dimensions")
            return ln if ln is not None else rn
        return None

    def build(self, n: Optional[int]) -> GlModule:
        own = self.intrinsic_n()
        if own is not None:
            if n is not None and n != own:
                raise ValidationError(
                    f"descriptor fixes dimension {own}, context wants {n}"
                )
            n = own
        if n is None:
            raise ValidationError(
                "ambient dimension undetermined; pair with a Weyl-algebra "
                "module or use char/resD"
            )
        if self.kind == "wedge":
            return WedgeModule(n, self.payload)
        if self.kind == "sym":
            return SymModule(n, self.payload)
        if self.kind == "char":
            return CharModule(self.payload)
        if self.kind == "dual":
            return DualModule(self.payload.build(n))
        if self.kind == "tensor":
            left, right = self.payload
            return TensorGlModule(left.build(n), right.build(n))
        if self.kind == "resD":
            dmod, kappa = self.payload
            return restrict_kappa(dmod, kappa)
        raise ValidationError(f"unknown descriptor node {self.kind!r}")


def parse_glmodule(text: str) -> GlAst:
    sc = _Scanner(text)
    ast = _glmodule(sc)
    sc.done()
    return ast


def build_glmodule(text: str, n: Optional[int] = None) -> GlModule:
    return parse_glmodule(text).build(n)


def _glmodule(sc: _Scanner) -> GlAst:
    node = _gl_atom(sc)
    while sc.peek() == "#":
        sc.expect("#")
        right = _gl_atom(sc)
        node = GlAst("tensor", (node, right))
    return node


def _gl_atom(sc: _Scanner) -> GlAst:
    if sc.try_word("wedge"):
        sc.expect("(")
        k = sc.integer()
        sc.expect(")")
        return GlAst("wedge", k)
    if sc.try_word("sym"):
        sc.expect("(")
        k = sc.integer()
        sc.expect(")")
        return GlAst("sym", k)
    if sc.try_word("char"):
        sc.expect("(")
        coords = [sc.rational()]
        while sc.peek() == ",":
            sc.expect(",")
            coords.append(sc.rational())
        sc.expect(")")
        return GlAst("char", tuple(coords))
    if sc.try_word("dual"):
        sc.expect("(")
        inner = _glmodule(sc)
        sc.expect(")")
        return GlAst("dual", inner)
    if sc.try_word("resD"):
        sc.expect("(")
        dmod = _dmodule(sc)
        sc.expect(";")
        kappa = sc.rational()
        sc.expect(")")
        return GlAst("resD", (dmod, kappa))
    raise ParseError("unknown gl-module constructor", sc.pos)


# -- printing -------------------------------------------------------------------


def print_dmodule(p: DModule) -> str:
    bits = []
    for f in p.factors:
        if f.kind is FactorKind.POLY:
            bits.append("O")
        elif f.kind is FactorKind.FPOLY:
            bits.append("OF")
        else:
            tag = "XLd" if f.dual else "XL"
            bits.append(f"{tag}({f.lam})")
    return "*".join(bits)


def print_glmodule(v: GlModule) -> str:
    if isinstance(v, WedgeModule):
        return f"wedge({v.k})"
    if isinstance(v, SymModule):
        return f"sym({v.k})"
    if isinstance(v, CharModule):
        return "char(" + ",".join(str(c) for c in v.c) + ")"
    if isinstance(v, DualModule):
        return f"dual({print_glmodule(v.base)})"
    if isinstance(v, TensorGlModule):
        return f"{print_glmodule(v.left)}#{print_glmodule(v.right)}"
    if isinstance(v, RestrictionModule):
        return f"resD({print_dmodule(v.parent)};{v.kappa})"
    raise ValidationError("module has no descriptor form")
