"""Exponent, Kemer index estimates and basicness certificates.

The Kemer index is bracketed: witnessed non-identities give lower bounds and
``Par(A)`` is an upper bound.  The algebra is certified basic exactly when the
two meet.  A missing witness is never read as a proof.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy.utilities.iterables import multiset_permutations

from .algebra import StructureAlgebra
from .errors import ContractError
from .linalg import format_scalar
from .multilinear import (
    AlternatedPolynomial,
    AlternationShape,
    MultilinearPolynomial,
    evaluate_basis,
    find_nonzero_evaluation,
    is_identity,
    ut_kemer_polynomial,
)
from .structure import (
    ParValue,
    lift_idempotent,
    span,
    subspace_product,
    wedderburn_data,
)

CERTIFIED = "certified_basic"
LOWER_ONLY = "lower_bound_only"


def _component_idempotents(a: StructureAlgebra, wd) -> list:
    return [lift_idempotent(a, e) for e in wd.component_idempotents]


def admissible_chains(a: StructureAlgebra, wd=None) -> list:
    """Sequences of distinct components with ``e_1 J e_2 J ... J e_r != 0``.

    Listed as tuples of component indices, singletons included.
    """
    wd = wd or wedderburn_data(a)
    es = [span(a, [e]) for e in _component_idempotents(a, wd)]
    j = wd.radical
    out = [(i,) for i in range(wd.q)]
    # grow chains breadth-first; a dead prefix kills every extension
    frontier = [((i,), es[i]) for i in range(wd.q)]
    while frontier:
        nxt = []
        for chain, sub in frontier:
            with_j = subspace_product(sub, j)
            if with_j.is_zero():
                continue
            for k in range(wd.q):
                if k in chain:
                    continue
                ext = subspace_product(with_j, es[k])
                if not ext.is_zero():
                    out.append(chain + (k,))
                    nxt.append((chain + (k,), ext))
        frontier = nxt
    return out


def exp_gz(a: StructureAlgebra, wd=None) -> int:
    """Maximal total dimension of the components along an admissible chain."""
    wd = wd or wedderburn_data(a)
    if wd.q == 0:
        return 0
    dims = wd.block_dims
    return max(sum(dims[i] ** 2 for i in ch) for ch in admissible_chains(a, wd))


@dataclass
class KemerWitness:
    polynomial: AlternatedPolynomial
    shape: AlternationShape
    assignment: dict  # variable -> basis index
    value: list
    chain: tuple = ()

    def check(self, a: StructureAlgebra) -> bool:
        return bool(evaluate_basis(self.polynomial, a, self.assignment))

    def to_dict(self, a: StructureAlgebra = None) -> dict:
        p = self.polynomial
        base = p.base if isinstance(p, AlternatedPolynomial) else p
        words = [list(w) for w in base.terms]
        label = (lambda i: a.basis_labels[i]) if a is not None else str
        return {
            "polynomial": {
                "base_words": words,
                "alternating_sets": [list(s) for s in p.alt_sets],
                "scale": format_scalar(getattr(p, "scale", Fraction(1))),
            },
            "shape": self.shape.to_dict(),
            "assignment": {v: label(i) for v, i in sorted(self.assignment.items())},
            "value": [format_scalar(x) for x in self.value],
            "chain": list(self.chain),
        }


@dataclass
class KemerEstimate:
    d_lower: int
    s_lower: int
    par: ParValue
    status: str
    witnesses: list = field(default_factory=list)
    nu: int = 2
    exp: int = 0
    budget: int = 0
    seed: int = 0
    notes: list = field(default_factory=list)

    @property
    def lower(self) -> tuple:
        return (self.d_lower, self.s_lower)

    def to_dict(self, a: StructureAlgebra = None) -> dict:
        return {
            "exp": self.exp,
            "par": [self.par.dim_ss, self.par.s],
            "kemer_lower": [self.d_lower, self.s_lower],
            "status": self.status,
            "nu": self.nu,
            "witnesses": [w.to_dict(a) for w in self.witnesses],
            "seed": self.seed,
            "budget": self.budget,
            "notes": list(self.notes),
        }

    def to_json(self, a: StructureAlgebra = None) -> str:
        return json.dumps(self.to_dict(a), indent=1, sort_keys=True) + "\n"


def _block_chains(a: StructureAlgebra, wd):
    """Candidate (block dims, metadata chain) pairs, largest total first.

    Algebras built here carry block metadata and are searched along every
    ordering of distinct blocks.  Otherwise the Wedderburn block sizes are
    used along admissible chains and only randomized search is possible.
    """
    blocks = a.meta.blocks if a.meta is not None else ()
    if blocks:
        cands = []
        for m in range(1, len(blocks) + 1):
            for ch in itertools.permutations(range(len(blocks)), m):
                cands.append((tuple(blocks[k].size for k in ch), ch))
    else:
        cands = [(tuple(wd.block_dims[i] for i in ch), None) for ch in admissible_chains(a, wd)]
    cands.sort(key=lambda c: (-sum(d * d for d in c[0]), -len(c[0]), c[1] or ()))
    return cands


def kemer_lower_bound_search(a: StructureAlgebra, nu: int = 2, budget: int = 2000, seed: int = 0,
                             wd=None) -> KemerEstimate:
    """Witnessed lower bound for the Kemer index using bridged Capelli products.

    For a chain of blocks ``d_1..d_m`` the polynomial f_{2,mu} with
    ``mu = nu + m - 1`` alternates in ``nu`` small sets of size ``sum d_i^2``
    and ``m - 1`` big sets.  The first chain (largest total) with a witness
    fixes ``d``; among chains of that total the longest one fixes ``s``.
    """
    if nu < 1:
        raise ContractError("nu must be at least 1")
    wd = wd or wedderburn_data(a, seed=seed)
    best = None
    witnesses = []
    for dims, ch in _block_chains(a, wd):
        d = sum(x * x for x in dims)
        if best is not None and (d < best[0] or (d == best[0] and len(dims) - 1 <= best[1])):
            continue
        m = len(dims)
        _, f2, shape = ut_kemer_polynomial(list(dims), nu + m - 1)
        res = find_nonzero_evaluation(f2, a, strategy="auto", seed=seed, budget=budget, chain=ch)
        if not res.found:
            continue
        w = KemerWitness(f2, shape, res.assignment, res.value, tuple(ch) if ch else ())
        if best is None or d > best[0]:
            witnesses = [w]
        else:
            witnesses.append(w)
        best = (d, m - 1)
    d_lower, s_lower = best if best else (0, 0)
    par = wd.par
    status = CERTIFIED if (d_lower, s_lower) == tuple(par) else LOWER_ONLY
    return KemerEstimate(d_lower, s_lower, par, status, witnesses, nu, exp_gz(a, wd), budget, seed)


def alternating_span(nu: int, r: int, extra: int):
    """Alternations of all monomials in ``nu`` sets of size ``r`` plus extras.

    Every multilinear polynomial alternating in those sets is a combination of
    these, so all of them being identities settles the question for this
    variable budget.  One representative per alternation class is produced:
    the variables of each set appear in increasing order.
    """
    sets = [tuple(f"z[{i},{k}]" for k in range(1, r + 1)) for i in range(1, nu + 1)]
    extras = [f"u[{k}]" for k in range(1, extra + 1)]
    variables = tuple(v for s in sets for v in s) + tuple(extras)
    slot_labels = [i for i in range(nu) for _ in range(r)] + [nu + k for k in range(extra)]
    # choose which positions each set occupies, then fill them in order
    for pattern in _multiset_orders(slot_labels):
        counters = [0] * nu
        word = []
        for lab in pattern:
            if lab < nu:
                word.append(sets[lab][counters[lab]])
                counters[lab] += 1
            else:
                word.append(extras[lab - nu])
        base = MultilinearPolynomial(variables, {tuple(word): Fraction(1)})
        yield AlternatedPolynomial(base, tuple(sets))


def _multiset_orders(labels):
    for p in multiset_permutations(sorted(labels)):
        yield tuple(p)


def exhaustive_refutation(a: StructureAlgebra, nu: int, r: int, extra: int, budget: int) -> Optional[bool]:
    """Whether every polynomial alternating in ``nu`` sets of size ``r`` with at
    most ``extra`` further variables is an identity.

    Returns None when the search would exceed ``budget`` basis evaluations.
    """
    cost = 0
    for e in range(extra + 1):
        n = nu * r + e
        shapes = math.factorial(n) // math.factorial(r) ** nu
        tuples = math.comb(a.dim, r) ** nu * a.dim ** e
        cost += shapes * tuples
    if cost > budget:
        return None
    for e in range(extra + 1):
        for f in alternating_span(nu, r, e):
            if not is_identity(f, a):
                return False
    return True


def kemer_index_estimate(a: StructureAlgebra, nu: int = 2, budget: int = 2000, seed: int = 0,
                         exhaustive_extra_vars: Optional[int] = None,
                         exhaustive_budget: int = 200_000) -> KemerEstimate:
    est = kemer_lower_bound_search(a, nu, budget, seed)
    if exhaustive_extra_vars is not None and est.status != CERTIFIED:
        e = exhaustive_extra_vars
        r = est.d_lower + 1
        if r <= est.par.dim_ss:
            verdict = exhaustive_refutation(a, nu, r, e, exhaustive_budget)
            if verdict is None:
                est.notes.append(f"exhaustive check for r={r}, nu={nu}, extra<={e} skipped: over budget")
            elif verdict:
                est.notes.append(
                    f"exhaustive: every polynomial alternating in {nu} sets of size {r} "
                    f"with at most {e} extra variables is an identity"
                )
            else:
                est.notes.append(
                    f"exhaustive: a non-identity alternating in {nu} sets of size {r} exists "
                    f"(extra<={e}); lower bound search missed it"
                )
    return est


@dataclass
class BasicnessResult:
    certified: bool
    estimate: KemerEstimate

    @property
    def status(self) -> str:
        return CERTIFIED if self.certified else "not_certified"

    @property
    def details(self) -> str:
        e = self.estimate
        if self.certified:
            return f"kappa = Par = {tuple(e.par)}"
        return f"witnessed {e.lower} < Par {tuple(e.par)}"


def basicness_check(a: StructureAlgebra, nu: int = 2, budget: int = 2000, seed: int = 0,
                    exhaustive_extra_vars: Optional[int] = 2) -> BasicnessResult:
    """Certify ``kappa_A = Par(A)`` or report the witnessed gap.

    Never concludes that an algebra is not basic.
    """
    est = kemer_index_estimate(a, nu, budget, seed, exhaustive_extra_vars)
    return BasicnessResult(est.status == CERTIFIED, est)
