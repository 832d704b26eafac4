"""Subspaces, Jacobson radical and Wedderburn data of a StructureAlgebra."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import sympy

from .algebra import StructureAlgebra
from .errors import ContractError, NonSplitError
from .linalg import EchelonBasis, nullspace, solve, to_dense, to_sparse


class Subspace:
    """Span of vectors of an algebra, stored in reduced row echelon form."""

    __slots__ = ("ambient", "_basis")

    def __init__(self, ambient: StructureAlgebra, vectors=()):
        self.ambient = ambient
        self._basis = EchelonBasis()
        for v in vectors:
            self._basis.add(v if isinstance(v, dict) else to_sparse(v))

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def rows(self) -> list:
        return [to_dense(r, self.ambient.dim) for r in self._basis.sorted_rows()]

    @property
    def sparse_rows(self) -> list:
        return self._basis.sorted_rows()

    @property
    def pivots(self) -> list:
        return sorted(self._basis.rows)

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, v) -> bool:
        return self._basis.contains(v if isinstance(v, dict) else to_sparse(v))

    def reduce(self, v) -> dict:
        return self._basis.reduce(v if isinstance(v, dict) else to_sparse(v))

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.sparse_rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient is other.ambient and self.sparse_rows == other.sparse_rows

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient.name})"


def span(algebra: StructureAlgebra, vectors) -> Subspace:
    return Subspace(algebra, vectors)


def basis_span(algebra: StructureAlgebra, indices) -> Subspace:
    return Subspace(algebra, [{i: Fraction(1)} for i in indices])


def whole(algebra: StructureAlgebra) -> Subspace:
    return basis_span(algebra, range(algebra.dim))


def subspace_product(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient is not v.ambient:
        raise ContractError("subspaces live in different algebras")
    alg = u.ambient
    out = Subspace(alg)
    for x in u.sparse_rows:
        for y in v.sparse_rows:
            z = alg.multiply_sparse(x, y)
            if z:
                out._basis.add(z)
    return out


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return Subspace(u.ambient, u.sparse_rows + v.sparse_rows)


# -- radical ----------------------------------------------------------------

def regular_traces(a: StructureAlgebra) -> list:
    """``tr(L_{e_k})`` for each basis element."""
    tr = [Fraction(0)] * a.dim
    for k in range(a.dim):
        for i in range(a.dim):
            for kk, c in a.product_terms(k, i):
                if kk == i:
                    tr[k] += c
    return tr


def radical(a: StructureAlgebra) -> Subspace:
    """Jacobson radical as the kernel of the regular trace form.

    In characteristic zero ``x`` lies in J(A) iff ``tr(L_x) = 0`` and
    ``tr(L_{xy}) = 0`` for every ``y``; the first condition stands in for
    ``y = 1`` so non-unital algebras are handled too.
    """
    t = regular_traces(a)
    # form[a][b] = tr(L_{e_a e_b})
    form = [[Fraction(0)] * a.dim for _ in range(a.dim)]
    for (i, j), terms in a.mul.items():
        form[i][j] = sum((c * t[k] for k, c in terms), Fraction(0))
    equations = [[form[i][b] for i in range(a.dim)] for b in range(a.dim)]
    equations.append(list(t))
    return Subspace(a, nullspace(equations, a.dim))


def nilpotency_degree(j: Subspace) -> int:
    """Least ``l`` with ``J^l = 0``; the zero subspace has degree 1."""
    if j.is_zero():
        return 1
    power, l = j, 1
    while not power.is_zero():
        power = subspace_product(power, j)
        l += 1
        if l > j.ambient.dim + 1:
            raise ContractError("subspace is not nilpotent")
    return l


# -- quotient by the radical ------------------------------------------------

class _Quotient:
    """Coordinates of A/J on the non-pivot basis elements of J."""

    def __init__(self, a: StructureAlgebra, j: Subspace):
        self.a, self.j = a, j
        piv = set(j.pivots)
        self.cols = [c for c in range(a.dim) if c not in piv]
        self.m = len(self.cols)

    def project(self, v: dict) -> list:
        r = self.j.reduce(v)
        return [r.get(c, Fraction(0)) for c in self.cols]

    def lift(self, x: Sequence) -> dict:
        return {c: Fraction(v) for c, v in zip(self.cols, x) if v}

    def mul(self, x, y) -> list:
        return self.project(self.a.multiply_sparse(self.lift(x), self.lift(y)))

    def basis(self, i) -> list:
        v = [Fraction(0)] * self.m
        v[i] = Fraction(1)
        return v


def _center(qa: _Quotient) -> list:
    m = qa.m
    # products[p][c] = e_p e_c in the quotient
    prods = [[qa.mul(qa.basis(p), qa.basis(c)) for c in range(m)] for p in range(m)]
    equations = []
    for c in range(m):
        for out in range(m):
            equations.append([prods[p][c][out] - prods[c][p][out] for p in range(m)])
    return nullspace(equations, m)


def _quotient_unit(qa: _Quotient):
    m = qa.m
    prods = [[qa.mul(qa.basis(p), qa.basis(c)) for c in range(m)] for p in range(m)]
    rows, rhs = [], []
    for c in range(m):
        target = qa.basis(c)
        for out in range(m):
            rows.append([prods[p][c][out] for p in range(m)])
            rhs.append(target[out])
            rows.append([prods[c][p][out] for p in range(m)])
            rhs.append(target[out])
    u = solve(rows, rhs, m)
    if u is None:
        raise ContractError("quotient by the radical has no unit; input is not associative")
    return u


def _min_poly(qa: _Quotient, unit, z):
    powers = [unit]
    while True:
        nxt = qa.mul(powers[-1], z)
        powers.append(nxt)
        cols = len(powers)
        mat = [[powers[k][i] for k in range(cols)] for i in range(qa.m)]
        ns = nullspace(mat, cols)
        if ns:
            coeffs = ns[0]
            lead = coeffs[-1]
            return [c / lead for c in coeffs]  # ascending, monic


class ParValue(NamedTuple):
    dim_ss: int
    s: int


@dataclass(frozen=True)
class WedderburnData:
    q: int
    block_dims: tuple
    dim_ss: int
    radical: Subspace
    nildeg: int
    component_idempotents: tuple  # representatives in A of central idempotents of A/J
    seed: int = 0

    @property
    def s(self) -> int:
        return self.nildeg - 1

    @property
    def par(self) -> ParValue:
        return ParValue(self.dim_ss, self.nildeg - 1)


def wedderburn_data(a: StructureAlgebra, seed: int = 0, retries: int = 8) -> WedderburnData:
    """Number and sizes of the simple components of A/J(A).

    Central primitive idempotents come from the minimal polynomial of a random
    central element, which must split into distinct rational linear factors.
    """
    j = radical(a)
    nd = nilpotency_degree(j)
    qa = _Quotient(a, j)
    if qa.m == 0:
        return WedderburnData(0, (), 0, j, nd, (), seed)
    center = _center(qa)
    q = len(center)
    unit = _quotient_unit(qa)
    rng = random.Random(seed)
    t = sympy.Symbol("t")
    idempotents = None
    for _ in range(max(1, retries)):
        weights = [rng.randint(-12, 12) for _ in center]
        z = [sum(w * v[i] for w, v in zip(weights, center)) for i in range(qa.m)]
        coeffs = _min_poly(qa, unit, z)
        poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), t)
        _, factors = poly.factor_list()
        if any(f.degree() > 1 for f, _ in factors):
            continue
        roots = []
        for f, _ in factors:
            lead, const = f.all_coeffs()
            r = -const / lead
            roots.append(Fraction(int(r.p), int(r.q)))
        if len(roots) != q:
            continue
        idempotents = []
        for i, li in enumerate(roots):
            e = unit
            for jdx, lj in enumerate(roots):
                if jdx == i:
                    continue
                shifted = [zc - lj * uc for zc, uc in zip(z, unit)]
                e = [c / (li - lj) for c in qa.mul(e, shifted)]
            idempotents.append(e)
        break
    if idempotents is None:
        raise NonSplitError(
            f"non-split center: no random central element split into {q} rational roots "
            f"after {retries} tries (seed {seed})"
        )
    comps = []
    for e in idempotents:
        sub = EchelonBasis()
        for c in range(qa.m):
            sub.add(to_sparse(qa.mul(e, qa.basis(c))))
        dim_i = len(sub)
        d_i = math.isqrt(dim_i)
        if d_i * d_i != dim_i:
            raise NonSplitError(f"component of dimension {dim_i} is not a perfect square")
        rep = to_dense(qa.lift(e), a.dim)
        comps.append((rep, d_i))
    # deterministic order: by first basis index in the support of the representative
    comps.sort(key=lambda rd: min(i for i, c in enumerate(rd[0]) if c))
    dims = tuple(d for _, d in comps)
    return WedderburnData(
        q=q,
        block_dims=dims,
        dim_ss=sum(d * d for d in dims),
        radical=j,
        nildeg=nd,
        component_idempotents=tuple(tuple(r) for r, _ in comps),
        seed=seed,
    )


def par(a: StructureAlgebra, seed: int = 0) -> ParValue:
    return wedderburn_data(a, seed=seed).par


def lift_idempotent(a: StructureAlgebra, e) -> list:
    """Lift an idempotent modulo the radical to a genuine idempotent of A."""
    x = [Fraction(c) for c in e]
    for _ in range(2 * a.dim + 2):
        x2 = a.multiply(x, x)
        if x2 == x:
            return x
        x3 = a.multiply(x2, x)
        x = [3 * p - 2 * r for p, r in zip(x2, x3)]
    raise ContractError("idempotent lifting did not converge")
