"""The ten acceptance criteria, one PASS/FAIL line each in the terminal summary."""

import json
import time
from fractions import Fraction

import mpmath
import pytest

from picodim.algebra import (
    associated_words,
    build_associated_algebra,
    build_matrix_algebra,
    build_ut_algebra,
    direct_product,
)
from picodim.asymptotics import AsymptoticParams, fit_t, regev_beckner_ratio
from picodim.cli import main
from picodim.codim import codim_sequence, codimension_exact_oracle, codimension_modular
from picodim.kemer import basicness_check, exp_gz
from picodim.multilinear import capelli, find_nonzero_evaluation, is_identity
from picodim.paths import (
    acal_s,
    enumerate_path_structures,
    enumerate_symbols,
    monomial_class_bound,
    monomial_class_lower,
    path_count_bound,
    upper_bound_series,
)
from picodim.structure import wedderburn_data

from test_algebra import word_oracle

F = build_matrix_algebra(1)
FF = direct_product(F, F)
UT11 = build_ut_algebra([1, 1])
M2 = build_matrix_algebra(2)


@pytest.mark.criterion(1, "Capelli facts on M2")
def test_capelli_facts():
    t0 = time.perf_counter()
    assert is_identity(capelli(5), M2)
    res = find_nonzero_evaluation(capelli(4), M2, strategy="structured")
    assert res.found
    nz = [M2.basis_labels[i] for i, c in enumerate(res.value) if c]
    assert len(nz) == 1 and nz[0] in ("e11", "e22")
    assert time.perf_counter() - t0 <= 120


@pytest.mark.criterion(2, "exponents of M_d and UT(d1,d2)")
def test_exponents():
    for d in (1, 2, 3):
        assert exp_gz(build_matrix_algebra(d)) == d * d
    for d1, d2 in [(1, 1), (1, 2), (2, 2)]:
        assert exp_gz(build_ut_algebra([d1, d2])) == d1 * d1 + d2 * d2


@pytest.mark.criterion(3, "Par/Kemer certification")
def test_certification():
    t0 = time.perf_counter()
    for a, expected in [(M2, (4, 0)), (UT11, (2, 1)), (build_ut_algebra([1, 2]), (5, 1))]:
        res = basicness_check(a)
        assert res.certified, a.name
        assert res.estimate.lower == expected == tuple(res.estimate.par)
    res = basicness_check(FF)
    assert res.status == "not_certified"
    assert res.estimate.lower == (1, 0) and tuple(res.estimate.par) == (2, 0)
    assert time.perf_counter() - t0 <= 600


@pytest.mark.criterion(4, "associated algebra")
@pytest.mark.parametrize("blocks", [(1,), (1, 1), (2,)])
@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("u", [1, 2])
def test_associated_algebra(blocks, r, u):
    a = build_associated_algebra(blocks, r, u)
    assert a.is_associative()
    ss = sum(d * d for d in blocks)
    assert a.dim == ss + word_oracle(blocks, r, u) == ss + len(associated_words(blocks, r, u))
    wd = wedderburn_data(a)
    assert wd.nildeg == u + 1
    assert tuple(wd.par) == (ss, u)


ORACLE_ALGEBRAS = [("F", F), ("FxF", FF), ("UT(1,1)", UT11), ("M2", M2)]


@pytest.mark.criterion(5, "codimension oracle equivalence")
@pytest.mark.parametrize("label,a", ORACLE_ALGEBRAS, ids=[x[0] for x in ORACLE_ALGEBRAS])
def test_oracle_equivalence(label, a, golden):
    for n in range(1, 6):
        mod = codimension_modular(a, n)
        assert mod.verified and len(mod.primes) >= 2
        assert mod.c_n == codimension_exact_oracle(a, n).c_n
    frozen = golden["codim"][label]
    for n in range(1, min(len(frozen), 7) + 1):
        assert codimension_modular(a, n).c_n == frozen[n - 1]


@pytest.mark.criterion(6, "codimension properties")
def test_codimension_properties():
    assert codim_sequence(F, 8).values == [1] * 8
    grid = [(F, F, 6), (F, UT11, 6), (UT11, UT11, 6), (F, M2, 5), (UT11, M2, 5)]
    for a, b, nmax in grid:
        ca, cb = codim_sequence(a, nmax).values, codim_sequence(b, nmax).values
        cab = codim_sequence(direct_product(a, b), nmax).values
        assert all(x <= y + z for x, y, z in zip(cab, ca, cb)), (a.name, b.name)
    assert codim_sequence(UT11, 9).eventually_nondecreasing
    assert codim_sequence(M2, 6).eventually_nondecreasing


RB = [("k=1,4;r=0,-3/2", (1, 4), (0, Fraction(-3, 2))),
      ("k=1,1;r=-1/2,-1/2", (1, 1), (Fraction(-1, 2), Fraction(-1, 2)))]


@pytest.mark.criterion(7, "Regev-Beckner convergence")
@pytest.mark.parametrize("label,k,r", RB, ids=[x[0] for x in RB])
def test_regev_beckner(label, k, r, golden):
    t0 = time.perf_counter()
    p = AsymptoticParams(k, r)
    gaps = [abs(regev_beckner_ratio(p, n) - 1) for n in (50, 100, 200, 400)]
    assert all(x > y for x, y in zip(gaps, gaps[1:]))
    assert gaps[-1] < golden["regev_beckner"][label]["final_gap_threshold"] <= 0.1
    assert time.perf_counter() - t0 <= 60


@pytest.mark.criterion(8, "fit sanity")
def test_fit(golden):
    for t in (Fraction(-3, 2), Fraction(0), Fraction(1), Fraction(5, 2)):
        for d in (1, 2, 4):
            fit = fit_t([(n, 0.7 * n ** float(t) * d ** n) for n in range(4, 13)], d)
            assert abs(fit.t_hat - float(t)) < 1e-9
    vals = golden["codim"]["UT(1,1)"]
    recs = [(n, c) for n, c in zip(range(1, 10), codim_sequence(UT11, 9).values)]
    assert [c for _, c in recs] == vals
    fit = fit_t(recs, 2, (5, 9), Fraction(1))
    assert fit.to_dict() == golden["fit_ut11"]


@pytest.mark.criterion(9, "path bounds")
def test_path_bounds():
    for blocks, r, u in [((1,), 1, 1), ((1,), 1, 2), ((1, 1), 1, 1), ((1, 1), 2, 1), ((2,), 1, 1), ((1,), 2, 2)]:
        a = build_associated_algebra(blocks, r, u)
        s = acal_s(a)
        bound = path_count_bound(len(enumerate_symbols(a)), s)
        for extended in (False, True):
            assert len(enumerate_path_structures(a, s, extended=extended)) <= bound
    for n in range(0, 8):
        for sp in range(0, n + 1):
            m = n - sp
            for n1 in range(m + 1):
                for parts in [(m,), (n1, m - n1)]:
                    assert monomial_class_lower(n, parts, sp) <= monomial_class_bound(n, parts, sp)
    acal = build_associated_algebra([1, 1], 1, 1)
    for n in range(1, 7):
        assert upper_bound_series(acal, n) >= codimension_modular(UT11, n).c_n


def _run(tmp_path, name, argv):
    out = tmp_path / name
    assert main(argv + ["--out", str(out)]) == 0
    return out.read_bytes()


@pytest.mark.criterion(10, "determinism across worker counts")
def test_determinism(tmp_path):
    for cmd in (["codim", "--builder", "ut:1,1", "--n", "7", "--seed", "3"],
                ["codim", "--builder", "mat:2", "--n", "5", "--seed", "3", "--format", "json"],
                ["conjecture", "--builder", "ut:1,1", "--n", "6", "--seed", "3"]):
        outs = {w: _run(tmp_path, f"{cmd[0]}-{w}", cmd + ["--workers", str(w)]) for w in (1, 4, 8)}
        assert outs[1] == outs[4] == outs[8]
        assert b"picodim" in outs[1]
