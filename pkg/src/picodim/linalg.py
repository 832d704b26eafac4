"""Exact rational linear algebra on sparse rows.

Rows are dicts ``{column: Fraction}`` with zero entries absent.  The helpers
here are deliberately small; they back :class:`picodim.structure.Subspace`
and the exact codimension oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

SparseRow = dict


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def mod_image(x: Fraction, p: int) -> int:
    """Image of ``x`` in Z/p; raises ZeroDivisionError if p divides the denominator."""
    x = Fraction(x)
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"prime {p} divides denominator {x.denominator}")
    return (x.numerator % p) * pow(den, -1, p) % p


def to_sparse(vec: Sequence) -> SparseRow:
    return {i: Fraction(c) for i, c in enumerate(vec) if c}


def to_dense(row: SparseRow, n: int) -> list:
    out = [Fraction(0)] * n
    for i, c in row.items():
        out[i] = c
    return out


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis.

    Each stored row has a pivot (its lowest column index) with coefficient 1
    and every other stored row is zero in that column.
    """

    def __init__(self):
        self.rows: dict[int, SparseRow] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        row = dict(row)
        # pivots of the basis never reappear once eliminated, so one pass suffices
        for col in sorted(c for c in row if c in self.rows):
            coef = row.get(col)
            if not coef:
                continue
            for c, v in self.rows[col].items():
                nv = row.get(c, 0) - coef * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def add(self, row: SparseRow) -> bool:
        """Add ``row`` to the span; returns True if the rank grew."""
        row = self.reduce(row)
        if not row:
            return False
        piv = min(row)
        inv = 1 / row[piv]
        row = {c: v * inv for c, v in row.items()}
        for other in self.rows.values():
            coef = other.get(piv)
            if coef:
                for c, v in row.items():
                    nv = other.get(c, 0) - coef * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        self.rows[piv] = row
        return True

    def contains(self, row: SparseRow) -> bool:
        return not self.reduce(row)

    def sorted_rows(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]


def rref(rows: Iterable[SparseRow]) -> list:
    """Reduced echelon form of the span of ``rows`` (sorted by pivot)."""
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
    return basis.sorted_rows()


def rank(rows: Iterable[SparseRow]) -> int:
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
    return len(basis)


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{x : M x = 0}`` as dense Fraction lists, one per free column."""
    red = rref(to_sparse(r) for r in matrix)
    pivots = [min(r) for r in red]
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for piv, r in zip(pivots, red):
            x[piv] = -r.get(f, Fraction(0))
        out.append(x)
    return out


def solve(matrix: Sequence[Sequence], rhs: Sequence, ncols: int):
    """One solution of ``M x = b`` or None when inconsistent."""
    aug = []
    for r, b in zip(matrix, rhs):
        row = to_sparse(r)
        if b:
            row[ncols] = Fraction(b)
        aug.append(row)
    red = rref(aug)
    x = [Fraction(0)] * ncols
    for r in red:
        piv = min(r)
        if piv == ncols:
            return None
        x[piv] = r.get(ncols, Fraction(0))
    return x
