from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from weilmmp.errors import ZeroVectorError
from weilmmp.exactla import (as_fraction, det, hermite_normal_form, integer_kernel_basis, integer_solution,
                             invariant_factors, inverse, lp_feasible, matmul, nullspace, primitive, rank,
                             smith_normal_form, solve, transpose)
from weilmmp.fixtures import FAN_QC

small_int = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_primitive_examples():
    assert primitive((2, 4)) == (1, 2)
    assert primitive((-3, 6, -9)) == (-1, 2, -3)
    with pytest.raises(ZeroVectorError):
        primitive((0, 0))


def test_as_fraction_rejects_floats():
    assert as_fraction("3/6") == Fraction(1, 2)
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_snf_of_quadric_cone_relations():
    M = transpose(FAN_QC.ray_matrix())  # 3 x 5 pairings of a basis of M with the rays
    assert invariant_factors(M) == [1, 1, 1]
    assert rank(M) == 3


def test_snf_torsion_example():
    assert invariant_factors([[1, 0], [1, 2]]) == [1, 2]


@given(matrices())
def test_snf_unimodular_and_diagonal(M):
    S, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = [S[i][i] for i in range(min(len(S), len(S[0])))]
    nz = [x for x in d if x]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@given(matrices())
def test_invariant_factors_match_sympy(M):
    ours = invariant_factors(M)
    S = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    theirs = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert ours == theirs


@given(matrices())
def test_rank_counts(M):
    assert rank(M) == len(invariant_factors(M))
    assert rank(M) == sympy.Matrix(M).rank()
    assert len(M) - len(nullspace(transpose(M), len(M))) == rank(M)


@given(st.lists(small_int, min_size=1, max_size=5).filter(any), st.integers(1, 20))
def test_primitive_scaling(v, k):
    assert primitive([k * x for x in v]) == primitive(v)


@given(matrices())
def test_integer_kernel(M):
    n = len(M[0])
    K = integer_kernel_basis(M, n)
    assert len(K) == n - rank(M)
    for k in K:
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in M)


@given(matrices(4, 4))
def test_hnf_same_lattice(M):
    H = hermite_normal_form(M)
    assert rank(H) == rank(M) == len(H)
    for row in M:
        assert integer_solution(transpose(H), row) is not None


def test_inverse_and_solve():
    A = [[2, 1], [1, 1]]
    assert matmul(A, inverse(A)) == [[1, 0], [0, 1]]
    assert solve(A, [3, 2]) == [1, 1]
    assert det([[1, 2], [3, 4]]) == -2


def test_lp_feasible():
    x = lp_feasible([[1, 0], [0, 1], [-1, -1]], [1, 1, -3])
    assert x is not None and x[0] >= 1 and x[1] >= 1 and x[0] + x[1] <= 3
    assert lp_feasible([[1], [-1]], [1, 0]) is None
    y = lp_feasible([[1, 1]], [0], [[1, -1]], [2])
    assert y[0] - y[1] == 2
