"""Symbols, path structures and the counting bounds behind the upper bound.

A path structure records which simple component or radical word a monomial
passes through, with repeats of a component merged.  Structures have bounded
length, so they can be listed outright even though paths of length n cannot.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import StructureAlgebra, build_matrix_algebra
from .codim import codimension_modular
from .errors import ContractError


@dataclass(frozen=True, order=True)
class PathSymbol:
    """``kind`` is ``"A"`` for a simple component or ``"w"`` for a radical word."""

    kind: str
    index: int

    def label(self, acal: StructureAlgebra = None) -> str:
        if self.kind == "A":
            return f"A{self.index + 1}"
        if acal is not None:
            return acal.meta.words[self.index].label()
        return f"w{self.index + 1}"


@dataclass(frozen=True)
class PathStructure:
    symbols: tuple
    extended: bool = False  # starts or ends with a radical word

    @property
    def radical_count(self) -> int:
        return sum(1 for x in self.symbols if x.kind == "w")

    @property
    def components(self) -> tuple:
        return tuple(x.index for x in self.symbols if x.kind == "A")

    def satisfies_axioms(self, s: int) -> bool:
        if self.radical_count > s or not self.symbols:
            return False
        for x, y in zip(self.symbols, self.symbols[1:]):
            if x.kind == y.kind:
                return False  # two components merge; two words would be one word
        edge_words = self.symbols[0].kind == "w" or self.symbols[-1].kind == "w"
        return edge_words == self.extended

    def to_dict(self, acal: StructureAlgebra = None) -> dict:
        return {"symbols": [x.label(acal) for x in self.symbols], "extended": self.extended}


def _require_associated(acal: StructureAlgebra):
    if acal.meta is None or not acal.meta.words or not acal.meta.blocks:
        raise ContractError("expected an associated algebra built with its word metadata")


def enumerate_symbols(acal: StructureAlgebra) -> list:
    """Symb: the simple components followed by the radical words."""
    _require_associated(acal)
    comps = [PathSymbol("A", i) for i in range(len(acal.meta.blocks))]
    words = [PathSymbol("w", i) for i in range(len(acal.meta.words))]
    return comps + words


def _word_ends(acal):
    return [(w.units[0][0], w.units[-1][0]) for w in acal.meta.words]


def enumerate_path_structures(acal: StructureAlgebra, max_radical: Optional[int] = None,
                              extended: bool = False) -> list:
    """All path structures with at most ``max_radical`` radical words.

    A word ``u_0 b ... u_k`` sits between the component of ``u_0`` and the
    component of ``u_k``.  With ``extended`` the structures that start or end
    with a word are listed too, marked as such.
    """
    _require_associated(acal)
    s = acal_s(acal) if max_radical is None else max_radical
    if s < 0:
        raise ContractError("max_radical must be nonnegative")
    q = len(acal.meta.blocks)
    ends = _word_ends(acal)
    out = []

    def grow(seq, last_comp, radicals):
        # seq ends in component last_comp
        out.append(PathStructure(tuple(seq)))
        if extended:
            for wi, (a, b) in enumerate(ends):
                if a == last_comp and radicals < s:
                    out.append(PathStructure(tuple(seq) + (PathSymbol("w", wi),), True))
        if radicals == s:
            return
        for wi, (a, b) in enumerate(ends):
            if a != last_comp:
                continue
            seq.append(PathSymbol("w", wi))
            seq.append(PathSymbol("A", b))
            grow(seq, b, radicals + 1)
            seq.pop()
            seq.pop()

    for k in range(q):
        grow([PathSymbol("A", k)], k, 0)
    if extended and s >= 1:
        lead = []
        for st in out:
            if st.symbols[-1].kind != "A" or st.radical_count >= s:
                continue
            first = st.symbols[0].index
            for wi, (a, b) in enumerate(ends):
                if b == first:
                    lead.append(PathStructure((PathSymbol("w", wi),) + st.symbols, True))
                    # lead word plus trailing word
                    if st.radical_count + 2 <= s:
                        last = st.symbols[-1].index
                        for wj, (c, _) in enumerate(ends):
                            if c == last:
                                lead.append(PathStructure(
                                    (PathSymbol("w", wi),) + st.symbols + (PathSymbol("w", wj),), True))
        out += lead
        out += [PathStructure((PathSymbol("w", wi),), True) for wi in range(len(ends))]
    out.sort(key=lambda st: (len(st.symbols), [(x.kind != "A", x.index) for x in st.symbols]))
    return out


def acal_s(acal: StructureAlgebra) -> int:
    """Largest number of radical letters in a word, i.e. ``u``."""
    _require_associated(acal)
    return max(w.length for w in acal.meta.words)


def path_count_bound(symb_count: int, s: int) -> int:
    """``sum_{t=1}^{2s+1} |Symb|^t``."""
    if symb_count < 1 or s < 0:
        raise ContractError("need symb_count >= 1 and s >= 0")
    return sum(symb_count ** t for t in range(1, 2 * s + 2))


def multinomial(n: int, parts: Sequence[int]) -> int:
    if sum(parts) != n or any(p < 0 for p in parts):
        raise ContractError("parts must be nonnegative and sum to n")
    out, left = 1, n
    for p in parts:
        out *= math.comb(left, p)
        left -= p
    return out


def monomial_class_bound(n: int, parts: Sequence[int], s_prime: int) -> int:
    """``n^{s'} * multinomial(n - s'; n_1..n_q)``."""
    if s_prime < 0 or s_prime > n:
        raise ContractError("need 0 <= s' <= n")
    if sum(parts) != n - s_prime:
        raise ContractError(f"parts sum to {sum(parts)}, expected n - s' = {n - s_prime}")
    return n ** s_prime * multinomial(n - s_prime, parts)


def monomial_class_lower(n: int, parts: Sequence[int], s_prime: int) -> int:
    """``s'! * C(n, s') * multinomial(n - s'; ...)``, the count the bound dominates."""
    return math.factorial(s_prime) * math.comb(n, s_prime) * multinomial(n - s_prime, parts)


def _weak_compositions(n: int, q: int):
    if q == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _weak_compositions(n - first, q - 1):
            yield (first,) + rest


class MatrixCodimensions:
    """``c_m(M_d)`` computed on demand and cached; ``c_0`` is taken as 1."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._cache: dict = {}
        self._algebras: dict = {}

    def __call__(self, d: int, m: int) -> int:
        if m == 0 or d == 1:
            return 1
        key = (d, m)
        if key not in self._cache:
            if d not in self._algebras:
                self._algebras[d] = build_matrix_algebra(d)
            self._cache[key] = codimension_modular(self._algebras[d], m, seed=self.seed).c_n
        return self._cache[key]


def _lookup(source, d, m):
    if m == 0:
        return 1
    if callable(source):
        return source(d, m)
    try:
        return source[(d, m)]
    except KeyError:
        raise ContractError(f"no codimension value for M_{d} at degree {m}") from None


def upper_bound_series(acal: StructureAlgebra, n: int, codim_source=None,
                       block_dims: Sequence[int] = None, s: int = None) -> int:
    """``sum_{s'=0}^{s} n^{s'} sum_{n_1+..+n_q = n-s'} multinomial * prod c_{n_i}(M_{d_i})``.

    The constant in front is left out (reported as 1).  ``codim_source`` maps
    ``(d, m)`` to ``c_m(M_d)``, either as a callable or a mapping.
    """
    if n < 0:
        raise ContractError("n must be nonnegative")
    if block_dims is None:
        _require_associated(acal)
        block_dims = [b.size for b in acal.meta.blocks]
    if s is None:
        s = acal_s(acal)
    source = codim_source if codim_source is not None else MatrixCodimensions()
    total = 0
    for sp in range(min(s, n) + 1):
        inner = 0
        for parts in _weak_compositions(n - sp, len(block_dims)):
            term = multinomial(n - sp, parts)
            for d, m in zip(block_dims, parts):
                term *= _lookup(source, d, m)
            inner += term
        total += n ** sp * inner
    return total


def structures_to_json(acal: StructureAlgebra, structures) -> str:
    return json.dumps([st.to_dict(acal) for st in structures], indent=1) + "\n"


def bounds_to_csv(rows) -> str:
    """``rows`` of (n, series, c_n or None, ratio)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "upper_bound_series", "c_n", "normalized"])
    for n, series, c, ratio in rows:
        w.writerow([n, series, "" if c is None else c, f"{ratio:.12g}"])
    return buf.getvalue()
