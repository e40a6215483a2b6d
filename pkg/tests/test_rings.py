from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planardpp.errors import DuplicatePoint, ModulusMismatch, NonIntegerResult
from planardpp.oracle import det_by_permutation
from planardpp.rings import (
    CycloElem,
    Poly,
    cyclo_mul,
    det_cyclo_poly_matrix,
    det_division_free,
    det_integer,
    det_poly_matrix,
    interpolate,
)

small_ints = st.integers(min_value=-9, max_value=9)


def square(n: int, elems=small_ints):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


def cofactor(mat):
    if not mat:
        return 1
    if len(mat) == 1:
        return mat[0][0]
    return sum((-1) ** j * mat[0][j] * cofactor([row[:j] + row[j + 1 :] for row in mat[1:]]) for j in range(len(mat)))


def test_poly_canonical_form():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly().degree == -1
    assert Poly().min_degree is None
    assert Poly([0, 0, 3]).min_degree == 2
    assert Poly([1, 1]) * Poly([-1, 1]) == Poly([-1, 0, 1])


def test_det_integer_examples():
    assert det_integer([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det_integer([[0, 1], [1, 0]]) == -1
    rng = random.Random(5)
    for _ in range(20):
        m = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(5)]
        assert det_integer(m) == cofactor(m)


@given(square(4))
def test_det_integer_matches_cofactor(mat):
    assert det_integer(mat) == cofactor(mat)


def test_det_division_free_examples():
    one = CycloElem.one(3)
    zero = CycloElem.zero(3)
    assert det_division_free([[one, zero], [zero, one]]) == one
    y = lambda e: CycloElem.monomial(3, e)  # noqa: E731
    assert det_division_free([[y(1), zero], [zero, y(2)]]) == one


def test_det_division_free_monomials_match_permutations():
    rng = random.Random(11)
    for _ in range(10):
        k = rng.randint(2, 4)
        mat = [[CycloElem.monomial(k, rng.randrange(k), rng.choice([0, 1, -1, 2])) for _ in range(4)] for _ in range(4)]
        assert det_division_free(mat) == det_by_permutation(mat, CycloElem.one(k), CycloElem.zero(k))


def test_det_division_free_rejects_mixed_moduli():
    with pytest.raises(ModulusMismatch):
        det_division_free([[CycloElem.one(2), CycloElem.zero(3)], [CycloElem.zero(3), CycloElem.one(3)]])


@given(st.integers(min_value=1, max_value=6).flatmap(square))
@settings(max_examples=40)
def test_division_free_agrees_with_bareiss_on_constants(mat):
    k = 3
    emb = [[CycloElem.monomial(k, 0, x) for x in row] for row in mat]
    assert det_division_free(emb) == CycloElem.monomial(k, 0, det_integer(mat))


@given(square(2), square(2))
def test_det_multiplicative_on_block_diagonal(a, b):
    block = [a[0] + [0, 0], a[1] + [0, 0], [0, 0] + b[0], [0, 0] + b[1]]
    assert det_integer(block) == det_integer(a) * det_integer(b)
    assert det_division_free(block) == det_integer(a) * det_integer(b)


def test_interpolate_examples():
    assert interpolate([(0, 1), (1, 2), (2, 5)], 2) == Poly([1, 0, 1])
    assert interpolate([(0, 7), (1, 7)], 1) == Poly([7])
    with pytest.raises(DuplicatePoint):
        interpolate([(0, 1), (0, 2)], 1)
    with pytest.raises(NonIntegerResult):
        interpolate([(0, 0), (2, 1)], 1)


@given(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=1, max_size=9))
def test_interpolate_round_trip(coeffs):
    p = Poly(coeffs)
    d = len(coeffs) - 1
    assert interpolate([(x, p(x)) for x in range(d + 1)], d) == p


def test_cyclo_mul_examples():
    y = CycloElem.monomial
    assert cyclo_mul(y(3, 2), y(3, 2)) == y(3, 1)
    assert cyclo_mul(y(2, 0) + y(2, 1), y(2, 0) - y(2, 1)) == CycloElem.zero(2)
    assert cyclo_mul(y(4, 3), y(4, 1)) == CycloElem.one(4)
    with pytest.raises(ModulusMismatch):
        cyclo_mul(y(2, 1), y(3, 1))


cyclo3 = st.lists(small_ints, min_size=3, max_size=3).map(lambda c: CycloElem(3, c))


@given(cyclo3, cyclo3, cyclo3)
def test_cyclo_mul_commutative_associative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


def _brute_poly_det(n, entries):
    mat = [[Poly.from_terms(entries.get((i, j), {})) for j in range(n)] for i in range(n)]
    return det_by_permutation(mat, Poly([1]), Poly())


def test_det_poly_matrix_matches_permutation_expansion():
    rng = random.Random(2)
    for _ in range(25):
        n = rng.randint(1, 5)
        entries = {}
        for i, j in itertools.product(range(n), repeat=2):
            if rng.random() < 0.6:
                entries[i, j] = {rng.randint(0, 6): rng.randint(-3, 3) for _ in range(rng.randint(1, 2))}
        # a few exact unit diagonals exercise the symbolic elimination
        for i in range(n):
            if rng.random() < 0.4:
                entries[i, i] = {0: 1}
        assert det_poly_matrix(n, entries) == _brute_poly_det(n, entries)


def test_det_cyclo_poly_matrix_matches_permutation_expansion():
    rng = random.Random(3)
    for _ in range(20):
        n, k = rng.randint(1, 4), rng.randint(1, 3)
        entries = {}
        for i, j in itertools.product(range(n), repeat=2):
            if rng.random() < 0.6:
                entries[i, j] = {(rng.randint(0, 5), rng.randrange(k)): rng.randint(-2, 2) for _ in range(2)}
        for i in range(n):
            if rng.random() < 0.4:
                entries[i, i] = {(0, 0): 1}
        mat = [
            [
                CycloElem(k, [Poly.from_terms({xe: c for (xe, ye), c in entries.get((i, j), {}).items() if ye == cls}) for cls in range(k)])
                for j in range(n)
            ]
            for i in range(n)
        ]
        zero = CycloElem(k, [Poly()] * k)
        one = CycloElem(k, [Poly([1])] + [Poly()] * (k - 1))
        expected = det_by_permutation(mat, one, zero)
        assert det_cyclo_poly_matrix(n, k, entries) == list(expected.coeffs)


def test_det_poly_matrix_empty_row_is_zero():
    assert det_poly_matrix(2, {(0, 0): {1: 1}}) == Poly()
    assert det_poly_matrix(0, {}) == Poly([1])
