import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picodim.algebra import (
    algebra_from_json,
    algebra_to_json,
    associated_words,
    build_associated_algebra,
    build_matrix_algebra,
    build_ut_algebra,
    direct_product,
    multiply_elements,
)
from picodim.errors import ContractError

from strategies import algebras, vectors


def idx(a, label):
    return a.basis_labels.index(label)


def word_oracle(block_dims, r, u):
    """Independent count of the word basis: strings u0 b u1 ... b uk as tuples."""
    units = [(blk, i, j) for blk, d in enumerate(block_dims) for i in range(d) for j in range(d)]
    seen = set()
    for k in range(1, u + 1):
        for us in itertools.product(units, repeat=k + 1):
            for ls in itertools.product(range(r), repeat=k):
                seen.add(tuple(x for pair in itertools.zip_longest(us, ls) for x in pair if x is not None))
    return len(seen)


def test_matrix_units():
    m1 = build_matrix_algebra(1)
    assert m1.dim == 1 and m1.multiply([1], [1]) == [1]
    m2 = build_matrix_algebra(2)
    e = lambda lab: m2.basis_vector(idx(m2, lab))
    assert m2.multiply(e("e12"), e("e21")) == e("e11")
    assert m2.multiply(e("e12"), e("e12")) == m2.zero()
    m3 = build_matrix_algebra(3)
    assert m3.dim == 9
    assert [m3.unit[idx(m3, f"e{i}{i}")] for i in (1, 2, 3)] == [1, 1, 1]
    assert sum(m3.unit) == 3


def test_ut_dimensions():
    ut = build_ut_algebra([1, 1])
    assert ut.dim == 3 and set(ut.basis_labels) == {"e11", "e22", "e12"}
    assert build_ut_algebra([1, 2]).dim == 7
    u22 = build_ut_algebra([2, 2])
    assert u22.dim == 12 and "e31" not in u22.basis_labels and "e13" in u22.basis_labels


def test_associated_examples():
    a = build_associated_algebra([1], 1, 1)
    assert a.dim == 2
    w = a.basis_vector(1)
    assert a.multiply(w, w) == a.zero()
    a2 = build_associated_algebra([1], 1, 2)
    assert a2.dim == 3
    w1, w2 = a2.basis_vector(1), a2.basis_vector(2)
    assert a2.multiply(w1, w1) == w2
    assert a2.multiply(w2, w1) == a2.zero()
    assert build_associated_algebra([1, 1], 1, 1).dim == 6


@pytest.mark.parametrize("blocks", [(1,), (1, 1), (2,)])
@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("u", [1, 2])
def test_associated_matches_word_oracle(blocks, r, u):
    a = build_associated_algebra(blocks, r, u)
    n_words = word_oracle(blocks, r, u)
    assert len(associated_words(blocks, r, u)) == n_words
    assert a.dim == sum(d * d for d in blocks) + n_words
    s = sum(d * d for d in blocks)
    assert n_words == sum(s ** (k + 1) * r ** k for k in range(1, u + 1))


@given(algebras)
def test_exhaustive_associativity_and_unit(a):
    assert a.is_associative()
    if a.unit is not None:
        assert a.unit_is_identity()


def test_direct_product():
    f = build_matrix_algebra(1)
    ff = direct_product(f, f)
    assert ff.dim == 2
    e1, e2 = ff.basis_vector(0), ff.basis_vector(1)
    assert ff.multiply(e1, e2) == ff.zero() and ff.multiply(e1, e1) == e1


def test_multiply_elements():
    ut = build_ut_algebra([1, 1])
    x = [0] * 3
    x[idx(ut, "e11")] = 1
    x[idx(ut, "e12")] = 1
    y = ut.basis_vector(idx(ut, "e12"))
    assert multiply_elements(ut, x, y) == y
    assert multiply_elements(ut, x, [0, 0, 0]) == ut.zero()
    with pytest.raises(ContractError):
        multiply_elements(ut, [1], y)


@given(algebras.flatmap(lambda a: st.tuples(st.just(a), vectors(a.dim), vectors(a.dim), vectors(a.dim))))
def test_random_associativity(args):
    a, x, y, z = args
    assert a.multiply(a.multiply(x, y), z) == a.multiply(x, a.multiply(y, z))


@given(algebras)
def test_json_round_trip(a):
    text = algebra_to_json(a)
    b = algebra_from_json(text)
    assert algebra_to_json(b).replace(b.name, a.name) == text
    assert b.mul == a.mul


def test_json_rejects_bad_input():
    with pytest.raises(ContractError):
        algebra_from_json(json.dumps({"dim": 1, "mul": [[0, 0, 3, "1"]]}))
    with pytest.raises(ContractError):
        algebra_from_json(json.dumps({"mul": []}))


def test_relabel_preserves_structure():
    ut = build_ut_algebra([1, 2])
    perm = [3, 0, 6, 1, 5, 2, 4]
    b = ut.relabel(perm)
    assert b.is_associative() and b.unit_is_identity()
