"""Rank computations over Z/p for primes just below 2**31."""

from __future__ import annotations

import random

import numpy as np
import sympy

PRIME_LOW = 2**30
PRIME_HIGH = 2**31

_SPLIT = 1 << 16


def draw_primes(seed: int, count: int, exclude=()) -> list:
    """``count`` distinct primes in [2**30, 2**31) from a seeded generator."""
    rng = random.Random(f"picodim-primes-{seed}")
    out = []
    while len(out) < count:
        c = rng.randrange(PRIME_LOW, PRIME_HIGH) | 1
        if c in out or c in exclude:
            continue
        if sympy.isprime(c):
            out.append(c)
    return out


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for int64 arrays with entries in [0, p), p < 2**31.

    Both factors are split in 16-bit halves so every partial product sum is
    exact in float64 (inner dimension below 2**21).
    """
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] >= 1 << 21:
        raise ValueError("inner dimension too large for exact float accumulation")
    a_hi, a_lo = np.divmod(a, _SPLIT)
    b_hi, b_lo = np.divmod(b, _SPLIT)
    fa_hi, fa_lo = a_hi.astype(np.float64), a_lo.astype(np.float64)
    fb_hi, fb_lo = b_hi.astype(np.float64), b_lo.astype(np.float64)

    def mm(x, y):
        return np.fmod(x @ y, p).astype(np.int64)

    hh = mm(fa_hi, fb_hi)
    mid = (mm(fa_hi, fb_lo) + mm(fa_lo, fb_hi)) % p
    ll = mm(fa_lo, fb_lo)
    shift = _SPLIT % p
    res = (hh * shift) % p
    res = (res * shift) % p
    res = (res + mid * shift) % p
    return (res + ll) % p


class ModularEchelon:
    """Reduced row echelon basis over Z/p, grown batch by batch."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    def reduce(self, batch: np.ndarray) -> np.ndarray:
        if self.rank == 0:
            return batch % self.p
        coef = batch[:, self.pivots] % self.p
        return (batch - matmul_mod(coef, self.rows, self.p)) % self.p

    def add_batch(self, batch: np.ndarray) -> list:
        """Reduce a batch into the basis; return the residual rows that were new."""
        p = self.p
        res = self.reduce(batch)
        new_rows, new_piv, added = [], [], []
        for row in res:
            row = row.copy()
            for r, c in zip(new_rows, new_piv):
                if row[c]:
                    row = (row - row[c] * r) % p
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            added.append(row.copy())
            c = int(nz[0])
            row = (row * pow(int(row[c]), -1, p)) % p
            for k, r in enumerate(new_rows):
                if r[c]:
                    new_rows[k] = (r - r[c] * row) % p
            new_rows.append(row)
            new_piv.append(c)
        if not new_rows:
            return added
        new = np.array(new_rows, dtype=np.int64)
        piv = np.array(new_piv, dtype=np.int64)
        if self.rank:
            coef = self.rows[:, piv] % p
            self.rows = (self.rows - matmul_mod(coef, new, p)) % p
        self.rows = np.vstack([self.rows, new])
        self.pivots = np.concatenate([self.pivots, piv])
        return added
