"""Codimensions ``c_n(A)``: rank of the multilinear monomials as maps A^n -> A.

Row ``sigma`` of the evaluation matrix holds the coordinates of
``t_{sigma(1)} ... t_{sigma(n)}`` for every basis tuple ``t``.  Permuting the
variables acts on the columns, and row ``sigma`` is the image of the identity
row under ``sigma``; the row space is therefore the S_n-span of one vector.

The fast path spins that vector under two generators of S_n modulo large
primes.  The ``rows`` strategy instead feeds every permutation's row, and the
exact oracle builds the full rational matrix with no shortcuts at all.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from .algebra import StructureAlgebra
from .errors import BudgetExceeded, ContractError, PrimeExhaustion
from .linalg import EchelonBasis, mod_image
from .modular import ModularEchelon, draw_primes

DEFAULT_ORACLE_BUDGET = 500_000
BATCH = 256


@dataclass
class CodimRecord:
    n: int
    c_n: int
    method: str
    primes: tuple = ()
    verified: bool = False
    wall_time: Optional[float] = None
    prime_ranks: tuple = ()

    def to_dict(self, timing=True) -> dict:
        d = asdict(self)
        d["primes"] = list(self.primes)
        d["prime_ranks"] = list(self.prime_ranks)
        if not timing:
            d["wall_time"] = None
        return d


# -- exact oracle -------------------------------------------------------

def codimension_exact_oracle(a: StructureAlgebra, n: int, budget: int = DEFAULT_ORACLE_BUDGET) -> CodimRecord:
    """Rational rank of the full ``n! x dim^(n+1)`` evaluation matrix."""
    if n < 1:
        raise ContractError("degree must be at least 1")
    cells = math.factorial(n) * a.dim ** (n + 1)
    if cells > budget:
        raise BudgetExceeded(f"oracle matrix has {cells} cells, budget is {budget}")
    start = time.perf_counter()
    tuples = list(itertools.product(range(a.dim), repeat=n))
    cache: dict = {}

    def product(seq):
        val = cache.get(seq)
        if val is None:
            val = {seq[0]: Fraction(1)}
            for i in seq[1:]:
                val = a.multiply_sparse(val, {i: Fraction(1)})
                if not val:
                    break
            cache[seq] = val
        return val

    basis = EchelonBasis()
    for sigma in itertools.permutations(range(n)):
        row = {}
        for ti, t in enumerate(tuples):
            val = product(tuple(t[s] for s in sigma))
            for k, c in val.items():
                row[ti * a.dim + k] = c
        basis.add(row)
    return CodimRecord(n, len(basis), "exact", (), True, time.perf_counter() - start)


# -- column space and generators ----------------------------------------

def nonzero_chains(a: StructureAlgebra, n: int) -> list:
    """All basis sequences of length ``n`` with nonzero product, with the product."""
    out = []

    def dfs(seq, val):
        if len(seq) == n:
            out.append((tuple(seq), val))
            return
        for i in range(a.dim):
            nxt = a.multiply_sparse(val, {i: Fraction(1)})
            if nxt:
                seq.append(i)
                dfs(seq, nxt)
                seq.pop()

    for i in range(a.dim):
        dfs([i], {i: Fraction(1)})
    return out


@dataclass
class EvaluationSpace:
    """Columns reachable from the identity row, and the identity row itself."""

    n: int
    dim: int
    codes: np.ndarray  # sorted column codes: tuple digits base dim, then output coordinate
    tuples: np.ndarray  # (ncols, n) basis tuple of each column
    outs: np.ndarray  # output coordinate of each column
    identity_entries: list = field(default_factory=list)  # (column, Fraction)

    @property
    def ncols(self) -> int:
        return len(self.codes)

    def encode(self, tuples: np.ndarray, outs: np.ndarray) -> np.ndarray:
        weights = self.dim ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (tuples @ weights) * self.dim + outs

    def permuted_columns(self, perm) -> np.ndarray:
        """Index array ``idx`` with ``idx[col(t, k)] = col(t o perm, k)``."""
        moved = self.tuples[:, list(perm)]
        codes = self.encode(moved, self.outs)
        idx = np.searchsorted(self.codes, codes)
        return idx

    def identity_row(self, p: int) -> np.ndarray:
        row = np.zeros(self.ncols, dtype=np.int64)
        for col, c in self.identity_entries:
            row[col] = mod_image(c, p)
        return row


def evaluation_space(a: StructureAlgebra, n: int) -> EvaluationSpace:
    chains = nonzero_chains(a, n)
    outs_by_content: dict = {}
    for seq, val in chains:
        outs_by_content.setdefault(tuple(sorted(seq)), set()).update(val)
    codes, tuples, outs = [], [], []
    weights = [a.dim ** (n - 1 - i) for i in range(n)]
    for content in sorted(outs_by_content):
        ks = sorted(outs_by_content[content])
        for t in multiset_permutations(list(content)):
            base = sum(w * x for w, x in zip(weights, t))
            for k in ks:
                codes.append(base * a.dim + k)
                tuples.append(t)
                outs.append(k)
    order = np.argsort(np.array(codes, dtype=np.int64), kind="stable")
    codes_arr = np.array(codes, dtype=np.int64)[order]
    tuples_arr = np.array(tuples, dtype=np.int64).reshape(-1, n)[order]
    outs_arr = np.array(outs, dtype=np.int64)[order]
    space = EvaluationSpace(n, a.dim, codes_arr, tuples_arr, outs_arr)
    index = {int(c): i for i, c in enumerate(codes_arr)}
    for seq, val in chains:
        base = sum(w * x for w, x in zip(weights, seq))
        for k, c in val.items():
            space.identity_entries.append((index[base * a.dim + k], c))
    space.identity_entries.sort()
    return space


def _generators(n):
    if n == 1:
        return []
    swap = [1, 0] + list(range(2, n))
    if n == 2:
        return [swap]
    cycle = list(range(1, n)) + [0]
    return [swap, cycle]


def _rank_spin(space: EvaluationSpace, p: int) -> int:
    if not space.identity_entries:
        return 0
    gens = [space.permuted_columns(g) for g in _generators(space.n)]
    ech = ModularEchelon(space.ncols, p)
    pending = ech.add_batch(space.identity_row(p)[None, :])
    while pending:
        images = [v[g] for v in pending for g in gens]
        pending = []
        for i in range(0, len(images), BATCH):
            pending += ech.add_batch(np.array(images[i:i + BATCH]))
    return ech.rank


def _rank_rows(space: EvaluationSpace, p: int) -> int:
    if not space.identity_entries:
        return 0
    ident = space.identity_row(p)
    ech = ModularEchelon(space.ncols, p)
    batch = []
    for sigma in itertools.permutations(range(space.n)):
        batch.append(ident[space.permuted_columns(sigma)])
        if len(batch) == BATCH:
            ech.add_batch(np.array(batch))
            batch = []
    if batch:
        ech.add_batch(np.array(batch))
    return ech.rank


_STRATEGIES = {"spin": _rank_spin, "rows": _rank_rows}


def _rank_task(args):
    space, p, strategy = args
    return _STRATEGIES[strategy](space, p)


def _check_denominators(a: StructureAlgebra, p: int) -> bool:
    for terms in a.mul.values():
        for _, c in terms:
            if c.denominator % p == 0:
                return False
    return True


def codimension_modular(
    a: StructureAlgebra,
    n: int,
    primes=None,
    seed: int = 0,
    strategy: str = "spin",
    workers: int = 1,
    max_primes: int = 5,
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
    space: EvaluationSpace = None,
) -> CodimRecord:
    """``c_n(A)`` from ranks modulo two or more independent primes.

    A rank can only drop modulo p, so the record is accepted once two distinct
    primes agree on the largest rank seen.  Otherwise more primes are drawn;
    when ``max_primes`` are used up the exact oracle decides if it fits its
    budget, else :class:`PrimeExhaustion` is raised.
    """
    if n < 1:
        raise ContractError("degree must be at least 1")
    if strategy not in _STRATEGIES:
        raise ContractError(f"unknown strategy {strategy!r}")
    start = time.perf_counter()
    if space is None:
        space = evaluation_space(a, n)
    pool = list(primes) if primes else draw_primes(seed, max_primes)
    pool = [p for p in pool if _check_denominators(a, p)]
    ranks: list = []
    used: list = []

    def run(batch):
        if workers > 1 and len(batch) > 1:
            with ProcessPoolExecutor(max_workers=min(workers, len(batch))) as ex:
                return list(ex.map(_rank_task, [(space, p, strategy) for p in batch]))
        return [_rank_task((space, p, strategy)) for p in batch]

    queue = list(pool)
    first = queue[:2]
    queue = queue[2:]
    ranks += run(first)
    used += first
    while True:
        best = max(ranks) if ranks else 0
        if sum(1 for r in ranks if r == best) >= 2:
            return CodimRecord(n, best, "modular", tuple(used), True,
                               time.perf_counter() - start, tuple(ranks))
        if not queue:
            break
        p = queue.pop(0)
        ranks += run([p])
        used.append(p)
    if math.factorial(n) * a.dim ** (n + 1) <= oracle_budget:
        rec = codimension_exact_oracle(a, n, oracle_budget)
        return CodimRecord(n, rec.c_n, "exact", tuple(used), True,
                           time.perf_counter() - start, tuple(ranks))
    raise PrimeExhaustion(f"primes {used} gave ranks {ranks} with no agreement")


@dataclass
class CodimSequence:
    records: list
    nondecreasing_from: int
    eventually_nondecreasing: bool

    @property
    def values(self) -> list:
        return [r.c_n for r in self.records]


def monotonicity(values: list):
    """First degree from which the window is nondecreasing, and the flag.

    The flag is set when the window is nondecreasing over its second half.
    """
    nmax = len(values)
    start = nmax
    while start > 1 and values[start - 2] <= values[start - 1]:
        start -= 1
    half = (nmax + 1) // 2
    return start, start <= max(1, half)


def codim_sequence(a: StructureAlgebra, nmax: int, method: str = "modular", seed: int = 0,
                   workers: int = 1, strategy: str = "spin") -> CodimSequence:
    if nmax < 1:
        raise ContractError("N must be at least 1")
    records = []
    for n in range(1, nmax + 1):
        if method == "exact":
            records.append(codimension_exact_oracle(a, n))
        else:
            records.append(codimension_modular(a, n, seed=seed, workers=workers, strategy=strategy))
    start, flag = monotonicity([r.c_n for r in records])
    return CodimSequence(records, start, flag)


CSV_COLUMNS = ["n", "c_n", "method", "primes", "verified", "seconds"]


def records_to_csv(records, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        secs = "" if (not timing or r.wall_time is None) else f"{r.wall_time:.3f}"
        w.writerow([r.n, r.c_n, r.method, " ".join(map(str, r.primes)), str(r.verified).lower(), secs])
    return buf.getvalue()


def records_to_json(records, timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in records], indent=1, sort_keys=True) + "\n"
