"""Sparse exact linear algebra over the rationals.

Vectors are dicts from orderable labels to Fraction; spans keep a reduced
row basis with deterministic pivot choice so every computation is
reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List

Vec = Dict[object, Fraction]


def vec_add(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, c in b.items():
        acc = out.get(k, Fraction(0)) + c
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def vec_scale(a: Vec, c: Fraction) -> Vec:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def vec_sub(a: Vec, b: Vec) -> Vec:
    return vec_add(a, vec_scale(b, Fraction(-1)))


def vec_max_abs(a: Vec) -> Fraction:
    return max((abs(c) for c in a.values()), default=Fraction(0))


class RowSpan:
    """Reduced basis of a rational span, pivoted on the smallest label."""

    def __init__(self):
        self.rows: Dict[object, Vec] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vec) -> Vec:
        v = dict(vec)
        while v:
            pivot = min(v)
            row = self.rows.get(pivot)
            if row is None:
                return v
            v = vec_sub(v, vec_scale(row, v[pivot]))
        return v

    def insert(self, vec: Vec) -> bool:
        """Add a vector; returns True when the dimension grew."""
        v = self.reduce(vec)
        if not v:
            return False
        pivot = min(v)
        v = vec_scale(v, 1 / v[pivot])
        # back-substitute into existing rows to keep the basis reduced
        for p, row in list(self.rows.items()):
            if pivot in row:
                self.rows[p] = vec_sub(row, vec_scale(v, row[pivot]))
        self.rows[pivot] = v
        return True

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)


def span_dim(vectors: Iterable[Vec]) -> int:
    s = RowSpan()
    for v in vectors:
        s.insert(v)
    return s.dim


class SparseMatrix:
    """Sparse matrix with explicit row and column label lists."""

    def __init__(self, row_labels: List, col_labels: List,
                 entries: Dict[tuple, Fraction] | None = None):
        self.row_labels = list(row_labels)
        self.col_labels = list(col_labels)
        self.row_index = {l: i for i, l in enumerate(self.row_labels)}
        self.col_index = {l: i for i, l in enumerate(self.col_labels)}
        self.entries: Dict[tuple, Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                if v:
                    self.entries[(r, c)] = v

    @staticmethod
    def of_operator(apply_fn, domain_labels: List,
                    codomain_labels: List) -> "SparseMatrix":
        """Matrix of label_vec -> apply_fn(label) in the given bases; image
        components outside the codomain list are dropped."""
        m = SparseMatrix(codomain_labels, domain_labels)
        keep = set(codomain_labels)
        for j, lab in enumerate(domain_labels):
            img = apply_fn(lab)
            for out_lab, c in img.items():
                if out_lab in keep and c:
                    m.entries[(m.row_index[out_lab], j)] = c
        return m

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.entries == other.entries
        )

    def max_abs_diff(self, other: "SparseMatrix") -> Fraction:
        keys = set(self.entries) | set(other.entries)
        return max(
            (
                abs(self.entries.get(k, Fraction(0))
                    - other.entries.get(k, Fraction(0)))
                for k in keys
            ),
            default=Fraction(0),
        )

    def rank(self) -> int:
        rows: Dict[int, Vec] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return span_dim(rows[r] for r in sorted(rows))
