"""Predicted polynomial part, Regev-Beckner sums and desk-scale fits."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .algebra import StructureAlgebra
from .codim import CodimRecord, codim_sequence
from .errors import ContractError
from .kemer import basicness_check, exp_gz
from .linalg import format_scalar
from .structure import wedderburn_data

PRECISION_BITS = 128


def predicted_t(q: int, d: int, s: int) -> Fraction:
    """``(q - d)/2 + s``."""
    if q < 1 or d < q or s < 0:
        raise ContractError("need d >= q >= 1 and s >= 0")
    return Fraction(q - d, 2) + s


@dataclass(frozen=True)
class AsymptoticParams:
    k: tuple
    r: tuple

    def __post_init__(self):
        if len(self.k) != len(self.r) or not self.k:
            raise ContractError("k and r must be nonempty and of equal length")
        if any(x <= 0 for x in self.k):
            raise ContractError("all k_i must be positive")
        object.__setattr__(self, "k", tuple(self.k))
        object.__setattr__(self, "r", tuple(self.r))

    @property
    def q(self) -> int:
        return len(self.k)

    @property
    def k_total(self):
        return sum(self.k)

    @property
    def r_total(self):
        return sum(self.r)


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _compositions(n: int, q: int):
    """Compositions of ``n`` into ``q`` positive parts."""
    if q == 1:
        yield (n,)
        return
    for first in range(1, n - q + 2):
        for rest in _compositions(n - first, q - 1):
            yield (first,) + rest


def multinomial(n: int, parts: Sequence[int]) -> int:
    out, left = 1, n
    for p in parts:
        out *= math.comb(left, p)
        left -= p
    return out


def regev_beckner_lhs(params: AsymptoticParams, n: int, prec: int = PRECISION_BITS):
    """``sum over n_1+..+n_q = n, n_i >= 1`` of
    ``multinomial * prod k_i^{n_i} n_i^{r_i}``."""
    if n < params.q:
        raise ContractError("need n >= q")
    with mpmath.workprec(prec):
        ks = [_mpf(x) for x in params.k]
        rs = [_mpf(x) for x in params.r]
        total = mpmath.mpf(0)
        for parts in _compositions(n, params.q):
            term = mpmath.mpf(multinomial(n, parts))
            for ni, ki, ri in zip(parts, ks, rs):
                term *= ki ** ni * mpmath.mpf(ni) ** ri
            total += term
        return +total


def regev_beckner_lhs_loggamma(params: AsymptoticParams, n: int, prec: int = PRECISION_BITS):
    """Same sum, each term assembled in log space from log-gamma values."""
    if n < params.q:
        raise ContractError("need n >= q")
    with mpmath.workprec(prec):
        ks = [_mpf(x) for x in params.k]
        rs = [_mpf(x) for x in params.r]
        lg_n = mpmath.loggamma(n + 1)
        total = mpmath.mpf(0)
        for parts in _compositions(n, params.q):
            lt = lg_n
            for ni, ki, ri in zip(parts, ks, rs):
                lt += ni * mpmath.log(ki) + ri * mpmath.log(ni) - mpmath.loggamma(ni + 1)
            total += mpmath.exp(lt)
        return +total


def regev_beckner_rhs(params: AsymptoticParams, n: int, prec: int = PRECISION_BITS):
    """``prod (k_i/k)^{r_i} * n^r * k^n``."""
    with mpmath.workprec(prec):
        k = _mpf(params.k_total)
        out = mpmath.mpf(1)
        for ki, ri in zip(params.k, params.r):
            out *= (_mpf(ki) / k) ** _mpf(ri)
        return +(out * mpmath.mpf(n) ** _mpf(params.r_total) * k ** n)


def regev_beckner_ratio(params: AsymptoticParams, n: int, prec: int = PRECISION_BITS):
    with mpmath.workprec(prec):
        return regev_beckner_lhs(params, n, prec) / regev_beckner_rhs(params, n, prec)


@dataclass
class FitReport:
    d: int
    window: tuple
    t_hat: float
    c_hat: float
    residuals: list
    predicted_t: Optional[Fraction] = None
    slopes: list = field(default_factory=list)  # (n, t_hat_n) for consecutive pairs

    @property
    def slope_bracket(self) -> tuple:
        vals = [t for _, t in self.slopes]
        return (min(vals), max(vals)) if vals else (self.t_hat, self.t_hat)

    @property
    def gap(self) -> Optional[float]:
        if self.predicted_t is None:
            return None
        return self.t_hat - float(self.predicted_t)

    @property
    def bracket_contains_prediction(self) -> Optional[bool]:
        if self.predicted_t is None:
            return None
        lo, hi = self.slope_bracket
        return lo <= float(self.predicted_t) <= hi

    def to_dict(self) -> dict:
        lo, hi = self.slope_bracket
        return {
            "d": self.d,
            "window": list(self.window),
            "t_hat": _round(self.t_hat),
            "c_hat": _round(self.c_hat),
            "residuals": [_round(x) for x in self.residuals],
            "predicted_t": format_scalar(self.predicted_t) if self.predicted_t is not None else None,
            "slopes": [[n, _round(t)] for n, t in self.slopes],
            "slope_bracket": [_round(lo), _round(hi)],
            "gap": _round(self.gap) if self.gap is not None else None,
            "bracket_contains_prediction": self.bracket_contains_prediction,
        }


def _round(x: float) -> float:
    # 12 significant digits keeps reports stable across BLAS builds
    return float(f"{x:.12g}")


def fit_t(records, d: int, window: Optional[tuple] = None, predicted: Optional[Fraction] = None) -> FitReport:
    """Least squares of ``log c_n - n log d`` against ``log n`` on the window,
    plus successive slopes ``t_n`` between consecutive degrees."""
    if d < 1:
        raise ContractError("d must be at least 1")
    values = {}
    for r in records:
        if isinstance(r, CodimRecord):
            values[r.n] = r.c_n
        else:
            values[r[0]] = r[1]
    ns = sorted(values)
    if window is None:
        window = (ns[-5] if len(ns) >= 5 else ns[0], ns[-1]) if ns else (1, 0)
    lo, hi = window
    ns = [n for n in ns if lo <= n <= hi]
    if not ns:
        raise ContractError("empty fit window")
    if any(values[n] <= 0 for n in ns):
        raise ContractError("codimensions in the window must be positive")
    x = np.array([math.log(n) for n in ns])
    y = np.array([math.log(values[n]) - n * math.log(d) for n in ns])
    if len(ns) == 1:
        t_hat, logc = 0.0, float(y[0])
    else:
        design = np.vstack([x, np.ones_like(x)]).T
        (t_hat, logc), *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = [float(yy - (t_hat * xx + logc)) for xx, yy in zip(x, y)]
    slopes = []
    for n0, n1 in zip(ns, ns[1:]):
        num = math.log(values[n1]) - math.log(values[n0]) - (n1 - n0) * math.log(d)
        slopes.append((n0, num / (math.log(n1) - math.log(n0))))
    return FitReport(d, (lo, hi), float(t_hat), math.exp(logc), residuals, predicted, slopes)


@dataclass
class ConjectureReport:
    algebra: str
    dim: int
    q: int
    block_dims: tuple
    exp: int
    par: tuple
    predicted_t: Optional[Fraction]
    kemer_status: str
    kemer_lower: tuple
    codim: list
    fit: Optional[FitReport]
    ratios: list
    nondecreasing_from: int
    eventually_nondecreasing: bool
    seed: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "algebra": self.algebra,
            "dim": self.dim,
            "q": self.q,
            "block_dims": list(self.block_dims),
            "exp": self.exp,
            "par": list(self.par),
            "predicted_t": format_scalar(self.predicted_t) if self.predicted_t is not None else None,
            "kemer_status": self.kemer_status,
            "kemer_lower": list(self.kemer_lower),
            "codim": [r.to_dict(timing) for r in self.codim],
            "monotonicity": {
                "nondecreasing_from": self.nondecreasing_from,
                "eventually_nondecreasing": self.eventually_nondecreasing,
            },
            "fit": self.fit.to_dict() if self.fit else None,
            "ratios": [[n, _round(x)] for n, x in self.ratios],
            "seed": self.seed,
            "notes": list(self.notes),
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=1, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "c_n", "ratio"])
        ratio = dict(self.ratios)
        for r in self.codim:
            w.writerow([r.n, r.c_n, f"{ratio[r.n]:.12g}" if r.n in ratio else ""])
        return buf.getvalue()


def conjecture_report(a: StructureAlgebra, nmax: int, seed: int = 0, workers: int = 1,
                      nu: int = 2, budget: int = 2000, window: Optional[tuple] = None) -> ConjectureReport:
    """Everything the polynomial-part prediction needs, side by side.

    The verdict is descriptive only: desk-scale degrees cannot confirm an
    asymptotic statement, so the notes say whether diagnostics are consistent.
    """
    wd = wedderburn_data(a, seed=seed)
    exp = exp_gz(a, wd)
    basic = basicness_check(a, nu=nu, budget=budget, seed=seed)
    pred = predicted_t(wd.q, wd.dim_ss, wd.s) if wd.q >= 1 else None
    seq = codim_sequence(a, nmax, seed=seed, workers=workers)
    notes = []
    fit = None
    ratios = []
    if exp >= 1:
        fit = fit_t(seq.records, exp, window, pred)
        if pred is not None:
            for r in seq.records:
                ratios.append((r.n, r.c_n / (r.n ** float(pred) * exp ** r.n)))
    if exp != wd.dim_ss:
        notes.append("exp differs from dim A_ss: the formula applies to the basic pieces, "
                     "t(A) is the maximum of t over them")
    if not basic.certified:
        notes.append("not certified basic: predicted_t uses Par(A) and may not apply directly")
    if fit is not None and pred is not None:
        lo, hi = fit.slope_bracket
        verdict = "consistent" if lo <= float(pred) <= hi else "inconsistent"
        notes.append(f"desk-scale diagnostics {verdict} with predicted_t; "
                     "successive slopes are still drifting, no asymptotic claim is made")
    return ConjectureReport(
        algebra=a.name,
        dim=a.dim,
        q=wd.q,
        block_dims=wd.block_dims,
        exp=exp,
        par=tuple(wd.par),
        predicted_t=pred,
        kemer_status=basic.status,
        kemer_lower=basic.estimate.lower,
        codim=seq.records,
        fit=fit,
        ratios=ratios,
        nondecreasing_from=seq.nondecreasing_from,
        eventually_nondecreasing=seq.eventually_nondecreasing,
        seed=seed,
        notes=notes,
    )
