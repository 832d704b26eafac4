from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from picodim.linalg import EchelonBasis, format_scalar, mod_image, nullspace, parse_scalar, rank, solve, to_sparse

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def matrices(rows=4, cols=4):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=1, max_size=rows)


def test_scalar_round_trip():
    for x in [Fraction(0), Fraction(3), Fraction(-7, 4)]:
        assert parse_scalar(format_scalar(x)) == x
    assert format_scalar(Fraction(6, 3)) == "2"


def test_mod_image_is_homomorphism():
    p = 1000003
    a, b = Fraction(3, 7), Fraction(-5, 11)
    assert mod_image(a + b, p) == (mod_image(a, p) + mod_image(b, p)) % p
    assert mod_image(a * b, p) == (mod_image(a, p) * mod_image(b, p)) % p


@given(matrices())
def test_rank_matches_sympy(m):
    expected = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m]).rank()
    assert rank(to_sparse(r) for r in m) == expected


@given(matrices())
def test_nullspace_vectors_are_killed(m):
    ns = nullspace(m, 4)
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
    assert len(ns) + rank(to_sparse(r) for r in m) == 4


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_consistent_systems(m, x):
    rhs = [sum(a * b for a, b in zip(row, x)) for row in m]
    sol = solve(m, rhs, 4)
    assert sol is not None
    assert [sum(a * b for a, b in zip(row, sol)) for row in m] == rhs


def test_echelon_membership():
    e = EchelonBasis()
    assert e.add({0: Fraction(1), 1: Fraction(2)})
    assert not e.add({0: Fraction(2), 1: Fraction(4)})
    assert e.contains({0: Fraction(-1), 1: Fraction(-2)})
    assert not e.contains({1: Fraction(1)})
