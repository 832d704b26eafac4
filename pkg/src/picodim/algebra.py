"""Finite-dimensional associative algebras given by structure constants.

An algebra stores, for every ordered pair of basis elements, the expansion of
their product in the basis.  Builders keep a little metadata about how the
basis was made (matrix units of each simple block, which basis elements span
the radical, the words of an associated algebra).  The metadata is used by the
structured witness search and by the path combinatorics; every structural
invariant is still computed from the multiplication table alone.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ContractError
from .linalg import format_scalar, parse_scalar

ONE = Fraction(1)


@dataclass(frozen=True)
class Block:
    """Matrix units ``e_{ab}`` of one simple block, as basis indices."""

    size: int
    units: dict  # (a, b) -> basis index, 0-based a, b

    def unit(self, a, b):
        return self.units[(a, b)]

    def diagonal(self):
        return [self.units[(a, a)] for a in range(self.size)]


@dataclass(frozen=True)
class AssociatedWord:
    """A basis word ``u_0 b_{l_1} u_1 ... b_{l_k} u_k`` of an associated algebra.

    ``units`` holds ``(block, a, b)`` triples and ``letters`` the radical
    generator indices, so ``len(units) == len(letters) + 1``.
    """

    units: tuple
    letters: tuple

    @property
    def length(self):
        return len(self.letters)

    def label(self):
        parts = [_unit_label(*self.units[0])]
        for letter, u in zip(self.letters, self.units[1:]):
            parts.append(f"b{letter + 1}")
            parts.append(_unit_label(*u))
        return "".join(parts)


def _unit_label(block, a, b):
    return f"e{block + 1}[{a + 1}{b + 1}]"


@dataclass(frozen=True)
class AlgebraMeta:
    blocks: tuple = ()
    radical: tuple = ()
    words: tuple = ()  # AssociatedWord per radical basis element (associated algebras)
    generators: int = 0


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    name: str
    dim: int
    basis_labels: tuple
    mul: dict  # (i, j) -> tuple of (k, Fraction)
    unit: Optional[tuple] = None
    meta: AlgebraMeta = field(default_factory=AlgebraMeta)

    def __post_init__(self):
        if self.dim < 1:
            raise ContractError("algebra dimension must be at least 1")
        if len(self.basis_labels) != self.dim:
            raise ContractError("basis label count does not match dimension")
        left = [dict() for _ in range(self.dim)]
        for (i, j), terms in self.mul.items():
            if terms:
                left[i][j] = terms
        object.__setattr__(self, "_left", left)

    # -- elements -------------------------------------------------------
    def zero(self):
        return [Fraction(0)] * self.dim

    def basis_vector(self, i):
        v = self.zero()
        v[i] = ONE
        return v

    def product_terms(self, i, j):
        return self._left[i].get(j, ())

    def multiply(self, x, y):
        """Product of two coefficient vectors."""
        out = [Fraction(0)] * self.dim
        ys = [(j, b) for j, b in enumerate(y) if b]
        if not ys:
            return out
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._left[i]
            for j, b in ys:
                terms = row.get(j)
                if terms:
                    ab = a * b
                    for k, c in terms:
                        out[k] += ab * c
        return out

    def multiply_sparse(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            row = self._left[i]
            for j, b in y.items():
                terms = row.get(j)
                if terms:
                    ab = a * b
                    for k, c in terms:
                        v = out.get(k, 0) + ab * c
                        if v:
                            out[k] = v
                        else:
                            del out[k]
        return out

    def left_matrix(self, x):
        """Matrix of left multiplication by ``x`` (columns indexed by basis)."""
        cols = [self.multiply(x, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def is_associative(self) -> bool:
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            ei, ej, ek = ({i: ONE}, {j: ONE}, {k: ONE})
            lhs = self.multiply_sparse(self.multiply_sparse(ei, ej), ek)
            rhs = self.multiply_sparse(ei, self.multiply_sparse(ej, ek))
            if lhs != rhs:
                return False
        return True

    def unit_is_identity(self) -> bool:
        if self.unit is None:
            return False
        u = list(self.unit)
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(u, e) != e or self.multiply(e, u) != e:
                return False
        return True

    def relabel(self, perm: Sequence[int], name=None) -> "StructureAlgebra":
        """Isomorphic copy whose basis element ``perm[i]`` is the old ``i``."""
        mul = {}
        for (i, j), terms in self.mul.items():
            mul[(perm[i], perm[j])] = tuple(sorted((perm[k], c) for k, c in terms))
        labels = [None] * self.dim
        for i, lab in enumerate(self.basis_labels):
            labels[perm[i]] = lab
        unit = None
        if self.unit is not None:
            unit = [Fraction(0)] * self.dim
            for i, c in enumerate(self.unit):
                unit[perm[i]] = c
            unit = tuple(unit)
        return StructureAlgebra(name or self.name, self.dim, tuple(labels), mul, unit)


# -- builders -----------------------------------------------------------

def build_matrix_algebra(d: int) -> StructureAlgebra:
    if d < 1:
        raise ContractError("matrix size must be positive")
    return _block_matrix_algebra([d], upper=False, name=f"M_{d}")


def build_ut_algebra(dims: Sequence[int]) -> StructureAlgebra:
    dims = list(dims)
    if not dims or any(d < 1 for d in dims):
        raise ContractError("block sizes must be a nonempty list of positive integers")
    label = ",".join(map(str, dims))
    return _block_matrix_algebra(dims, upper=True, name=f"UT({label})")


def _block_matrix_algebra(dims, upper, name):
    offsets = list(itertools.accumulate([0] + dims))
    owner = []
    for blk, d in enumerate(dims):
        owner += [blk] * d
    total = offsets[-1]
    cells = []
    for blk, d in enumerate(dims):
        for a in range(d):
            for b in range(d):
                cells.append((offsets[blk] + a, offsets[blk] + b))
    if upper:
        for r in range(total):
            for c in range(total):
                if owner[c] > owner[r]:
                    cells.append((r, c))
    index = {cell: i for i, cell in enumerate(cells)}
    mul = {}
    for (a, b), i in index.items():
        for (c, e), j in index.items():
            if b == c:
                mul[(i, j)] = ((index[(a, e)], ONE),)
    labels = tuple(f"e{a + 1}{b + 1}" if total < 10 else f"e{a + 1},{b + 1}" for a, b in cells)
    unit = [Fraction(0)] * len(cells)
    for r in range(total):
        unit[index[(r, r)]] = ONE
    blocks = []
    for blk, d in enumerate(dims):
        o = offsets[blk]
        blocks.append(Block(d, {(a, b): index[(o + a, o + b)] for a in range(d) for b in range(d)}))
    radical = tuple(i for (r, c), i in index.items() if owner[r] != owner[c])
    meta = AlgebraMeta(blocks=tuple(blocks), radical=radical)
    return StructureAlgebra(name, len(cells), labels, mul, tuple(unit), meta)


def associated_words(block_dims: Sequence[int], r: int, u: int) -> list:
    """Basis words of the associated algebra with 1..u radical letters.

    Word order: by number of letters, then lexicographically on
    (units, letters) with units enumerated block by block.
    """
    units = [(blk, a, b) for blk, d in enumerate(block_dims) for a in range(d) for b in range(d)]
    words = []
    for k in range(1, u + 1):
        for us in itertools.product(units, repeat=k + 1):
            for ls in itertools.product(range(r), repeat=k):
                words.append(AssociatedWord(tuple(us), tuple(ls)))
    return words


def build_associated_algebra(block_dims: Sequence[int], r: int, u: int) -> StructureAlgebra:
    """Truncated free product of ``M_{d_1} x ... x M_{d_q}`` with ``r`` free generators.

    Generator words of length greater than ``u`` are zero.  Words are written
    with a matrix unit between any two generators and at both ends; their
    product contracts the two touching matrix units.
    """
    block_dims = list(block_dims)
    if not block_dims or any(d < 1 for d in block_dims) or r < 1 or u < 1:
        raise ContractError("associated algebra needs positive block sizes, r and u")
    units = [(blk, a, b) for blk, d in enumerate(block_dims) for a in range(d) for b in range(d)]
    words = associated_words(block_dims, r, u)
    n_units = len(units)
    unit_index = {x: i for i, x in enumerate(units)}
    word_index = {(w.units, w.letters): n_units + i for i, w in enumerate(words)}

    def contract(x, y):
        if x[0] != y[0] or x[2] != y[1]:
            return None
        return (x[0], x[1], y[2])

    # element = (units tuple, letters tuple); a plain unit has no letters
    elements = [((x,), ()) for x in units] + [(w.units, w.letters) for w in words]
    mul = {}
    for i, (us1, ls1) in enumerate(elements):
        for j, (us2, ls2) in enumerate(elements):
            if len(ls1) + len(ls2) > u:
                continue
            mid = contract(us1[-1], us2[0])
            if mid is None:
                continue
            us = us1[:-1] + (mid,) + us2[1:]
            ls = ls1 + ls2
            k = unit_index[us[0]] if not ls else word_index[(us, ls)]
            mul[(i, j)] = ((k, ONE),)

    labels = tuple(_unit_label(*x) for x in units) + tuple(w.label() for w in words)
    unit = [Fraction(0)] * len(elements)
    for blk, d in enumerate(block_dims):
        for a in range(d):
            unit[unit_index[(blk, a, a)]] = ONE
    blocks = tuple(
        Block(d, {(a, b): unit_index[(blk, a, b)] for a in range(d) for b in range(d)})
        for blk, d in enumerate(block_dims)
    )
    meta = AlgebraMeta(
        blocks=blocks,
        radical=tuple(range(n_units, len(elements))),
        words=tuple(words),
        generators=r,
    )
    dims = ",".join(map(str, block_dims))
    return StructureAlgebra(f"A_u[{dims};r={r};u={u}]", len(elements), labels, mul, tuple(unit), meta)


def direct_product(a: StructureAlgebra, b: StructureAlgebra, name=None) -> StructureAlgebra:
    off = a.dim
    mul = dict(a.mul)
    for (i, j), terms in b.mul.items():
        mul[(i + off, j + off)] = tuple((k + off, c) for k, c in terms)
    labels = tuple(f"({x},0)" for x in a.basis_labels) + tuple(f"(0,{x})" for x in b.basis_labels)
    unit = None
    if a.unit is not None and b.unit is not None:
        unit = tuple(a.unit) + tuple(b.unit)
    blocks = a.meta.blocks + tuple(
        Block(blk.size, {key: v + off for key, v in blk.units.items()}) for blk in b.meta.blocks
    )
    meta = AlgebraMeta(
        blocks=blocks if (a.meta.blocks and b.meta.blocks) else (),
        radical=a.meta.radical + tuple(i + off for i in b.meta.radical),
    )
    return StructureAlgebra(name or f"{a.name}x{b.name}", a.dim + b.dim, labels, mul, unit, meta)


def multiply_elements(algebra: StructureAlgebra, x, y):
    if len(x) != algebra.dim or len(y) != algebra.dim:
        raise ContractError("vectors must have length dim")
    return algebra.multiply([Fraction(c) for c in x], [Fraction(c) for c in y])


# -- JSON ---------------------------------------------------------------

def algebra_to_dict(a: StructureAlgebra) -> dict:
    triples = []
    for (i, j), terms in a.mul.items():
        for k, c in terms:
            if c:
                triples.append([i, j, k, format_scalar(c)])
    triples.sort(key=lambda t: (t[0], t[1], t[2]))
    return {
        "name": a.name,
        "dim": a.dim,
        "basis": list(a.basis_labels),
        "unit": None if a.unit is None else [format_scalar(c) for c in a.unit],
        "mul": triples,
    }


def algebra_to_json(a: StructureAlgebra) -> str:
    return json.dumps(algebra_to_dict(a), indent=1) + "\n"


def algebra_from_dict(data: dict) -> StructureAlgebra:
    try:
        dim = int(data["dim"])
        labels = tuple(data.get("basis") or [f"e{i + 1}" for i in range(dim)])
        raw: dict = {}
        for i, j, k, c in data["mul"]:
            i, j, k = int(i), int(j), int(k)
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ContractError(f"index out of range in mul entry {[i, j, k]}")
            val = parse_scalar(c)
            slot = raw.setdefault((i, j), {})
            slot[k] = slot.get(k, 0) + val
        mul = {key: tuple((k, c) for k, c in sorted(v.items()) if c) for key, v in raw.items()}
        mul = {key: v for key, v in mul.items() if v}
        unit = data.get("unit")
        if unit is not None:
            unit = tuple(parse_scalar(c) for c in unit)
            if len(unit) != dim:
                raise ContractError("unit has wrong length")
        return StructureAlgebra(str(data.get("name", "A")), dim, labels, mul, unit)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ContractError):
            raise
        raise ContractError(f"malformed algebra file: {exc}") from exc


def algebra_from_json(text: str) -> StructureAlgebra:
    return algebra_from_dict(json.loads(text))
