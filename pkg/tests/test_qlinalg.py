import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from taut_gm.qlinalg import SparseMat, inverse, kernel_basis, rank, rat, rat_str
from oracles import bruteforce_rank


def test_rat_normalized():
    x = Fraction(6, -4)
    assert (x.numerator, x.denominator) == (-3, 2)
    assert rat_str(Fraction(0)) == "0"
    assert rat_str(Fraction(-3, 2)) == "-3/2"
    assert rat_str(Fraction(10, 1)) == "10"
    assert rat("5/3") == Fraction(5, 3)


def test_rat_rejects_float():
    with pytest.raises(TypeError):
        rat(0.5)


def test_no_stored_zeros_and_bounds():
    M = SparseMat(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert M.nnz == 1
    with pytest.raises(IndexError):
        SparseMat(2, 2, {(2, 0): 1})


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    ([[0, 0], [0, 0]], 0),
    ([[10, 6], [6, 4]], 2),
])
def test_rank_examples(rows, expected):
    assert rank(SparseMat.from_rows(rows)) == expected


def test_kernel_examples():
    assert kernel_basis(SparseMat.from_rows([[1, 0], [0, 1]])) == []
    (v,) = kernel_basis(SparseMat.from_rows([[1, -1]]))
    assert v == [1, 1]
    assert kernel_basis(SparseMat.from_rows([[10, 6], [6, 4]])) == []


def test_inverse():
    M = SparseMat.from_rows([[10, 6], [6, 4]])
    Minv = inverse(M)
    assert Minv.to_dense() == [[1, Fraction(-3, 2)], [Fraction(-3, 2), Fraction(5, 2)]]
    with pytest.raises(ZeroDivisionError):
        inverse(SparseMat.from_rows([[1, 2], [2, 4]]))


small_entries = st.fractions(min_value=-5, max_value=5, max_denominator=4) | st.just(Fraction(0))


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    rows = draw(st.lists(st.lists(small_entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows


@given(matrices())
def test_rank_matches_dense_oracle(rows):
    assert rank(SparseMat.from_rows(rows)) == bruteforce_rank(rows)


@given(matrices())
def test_rank_transpose(rows):
    M = SparseMat.from_rows(rows)
    assert rank(M) == rank(M.transpose())


@given(matrices())
def test_rank_nullity(rows):
    M = SparseMat.from_rows(rows)
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == M.n_cols
    for v in ker:
        assert all(x == 0 for x in M.matvec(v))
    if ker:
        assert rank(SparseMat.from_rows(ker)) == len(ker)


@given(matrices(), st.randoms())
def test_insertion_order_independent(rows, rnd):
    M = SparseMat.from_rows(rows)
    items = list(M.entries.items())
    rnd.shuffle(items)
    M2 = SparseMat(M.n_rows, M.n_cols, dict(items))
    assert M2 == M
    assert rank(M2) == rank(M)
    assert kernel_basis(M2) == kernel_basis(M)


def test_row_permutation_does_not_change_rank():
    rnd = random.Random(7)
    rows = [[rnd.randint(-3, 3) for _ in range(8)] for _ in range(10)]
    r = rank(SparseMat.from_rows(rows))
    for _ in range(5):
        rnd.shuffle(rows)
        assert rank(SparseMat.from_rows(rows)) == r
