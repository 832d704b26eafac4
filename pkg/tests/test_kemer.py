import pytest

from picodim.algebra import build_associated_algebra, build_matrix_algebra, build_ut_algebra, direct_product
from picodim.kemer import (
    CERTIFIED,
    alternating_span,
    basicness_check,
    exhaustive_refutation,
    exp_gz,
    kemer_index_estimate,
    kemer_lower_bound_search,
)
from picodim.multilinear import evaluate_basis, is_identity
from picodim.structure import par

F = build_matrix_algebra(1)
FF = direct_product(F, F)
M2 = build_matrix_algebra(2)
UT11 = build_ut_algebra([1, 1])


def test_exp_examples():
    assert exp_gz(M2) == 4
    assert exp_gz(build_ut_algebra([1, 2])) == 5
    assert exp_gz(FF) == 1


@pytest.mark.parametrize("a,b", [
    (UT11, M2),
    (F, build_ut_algebra([1, 2])),
    (build_ut_algebra([2, 1]), build_associated_algebra([1, 1], 1, 1)),
    (F, F),
])
def test_exp_of_product_is_max(a, b):
    assert exp_gz(direct_product(a, b)) == max(exp_gz(a), exp_gz(b))


def test_lower_bound_examples():
    est = kemer_lower_bound_search(M2, nu=2)
    assert est.d_lower == 4
    est = kemer_lower_bound_search(UT11, nu=2)
    assert est.lower == (2, 1)
    for nu in (1, 2, 3):
        assert kemer_lower_bound_search(F, nu=nu).lower == (1, 0)


@pytest.mark.parametrize("a", [M2, UT11, build_ut_algebra([1, 2]), FF, direct_product(UT11, M2),
                               build_associated_algebra([1], 1, 2)], ids=lambda a: a.name)
def test_estimate_invariants(a):
    est = kemer_lower_bound_search(a)
    assert est.lower <= tuple(est.par)
    assert (est.status == CERTIFIED) == (est.lower == tuple(est.par))
    for w in est.witnesses:
        assert w.check(a)
        assert evaluate_basis(w.polynomial, a, w.assignment)
        assert w.shape.is_disjoint() and w.shape.sizes_ok()
        assert len(w.shape.small_sets) == est.nu
        assert all(len(s) == est.d_lower for s in w.shape.small_sets)
        assert len(w.shape.big_sets) == est.s_lower


def test_monotone_in_nu():
    for a in (M2, UT11, FF):
        ds = [kemer_lower_bound_search(a, nu=nu).d_lower for nu in (1, 2, 3)]
        assert ds == sorted(ds, reverse=True)


def test_certifications():
    assert kemer_index_estimate(UT11).status == CERTIFIED
    assert kemer_index_estimate(UT11).lower == (2, 1) == tuple(par(UT11))
    assert kemer_index_estimate(M2).lower == (4, 0)
    for dims in [(1, 1), (1, 2), (2, 2), (2, 1)]:
        a = build_ut_algebra(dims)
        est = kemer_index_estimate(a)
        assert est.status == CERTIFIED
        assert est.lower == (sum(d * d for d in dims), len(dims) - 1)


def test_product_of_fields_not_certified():
    est = kemer_index_estimate(FF, exhaustive_extra_vars=2)
    assert est.status != CERTIFIED
    assert est.lower == (1, 0) and tuple(est.par) == (2, 0)
    assert any("is an identity" in n for n in est.notes)


def test_basicness_check():
    assert basicness_check(build_ut_algebra([1, 2])).certified
    assert basicness_check(build_matrix_algebra(3)).certified
    res = basicness_check(FF)
    assert res.status == "not_certified"
    assert "(1, 0)" in res.details and "(2, 0)" in res.details


def test_exhaustive_span_counts():
    # representatives: multiset orders of the slot labels
    assert sum(1 for _ in alternating_span(2, 2, 0)) == 6
    assert sum(1 for _ in alternating_span(1, 2, 1)) == 3
    assert exhaustive_refutation(FF, 2, 2, 2, 10**6) is True
    assert exhaustive_refutation(M2, 1, 2, 0, 10**6) is False
    assert exhaustive_refutation(M2, 2, 3, 2, 10) is None


def test_exhaustive_finds_what_search_finds():
    for f in alternating_span(1, 2, 1):
        if not is_identity(f, UT11):
            break
    else:
        pytest.fail("UT(1,1) has a non-identity alternating in a set of size 2")


def test_report_shape():
    est = kemer_index_estimate(UT11, seed=3, budget=50)
    d = est.to_dict(UT11)
    assert set(d) >= {"exp", "par", "kemer_lower", "status", "witnesses", "seed", "budget"}
    assert d["par"] == [2, 1] and d["seed"] == 3 and d["budget"] == 50
    assert est.to_json(UT11) == kemer_index_estimate(UT11, seed=3, budget=50).to_json(UT11)
