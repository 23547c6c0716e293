import numpy as np
import pytest

from errors import SearchExhausted
from lattice import (
    ShortVectorEnumerator, T2Geometry, determinant, hnf_basis, integer_inverse, mat_vec, smith_form,
    solve_in_finite_group, solve_integer_system, xgcd,
)
from nf_core import make_field


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def test_xgcd():
    for a, b in [(12, 18), (-7, 5), (0, 9), (35, 0)]:
        x, y, g = xgcd(a, b)
        assert a * x + b * y == g
        assert g >= 0


def test_hnf_basis_spans_same_lattice():
    basis = hnf_basis([[2, 0], [0, 2], [1, 1]], 2)
    assert len(basis) == 2
    assert abs(determinant([[v[i] for v in basis] for i in range(2)])) == 2
    assert hnf_basis([[4, 2], [2, 4], [1, 1]], 2) == hnf_basis([[1, 1], [0, 2], [4, 2]], 2)


def test_hnf_basis_drops_zero_vectors():
    assert hnf_basis([[0, 0]], 2) == []


@pytest.mark.parametrize("A", [
    [[2, 4], [6, 8]],
    [[2, 0, 0], [0, 3, 0], [0, 0, 4]],
    [[6, 4], [4, 6], [2, 2]],
])
def test_smith_form(A):
    diag, U, V = smith_form(A)
    D = _matmul(_matmul(U, A), V)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            expected = diag[i] if i == j and i < len(diag) else 0
            assert v == expected
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0 if a else b == 0
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


def test_smith_diag_values():
    assert smith_form([[2, 0, 0], [0, 3, 0], [0, 0, 4]])[0] == [1, 2, 12]


def test_integer_inverse():
    M = [[2, 1], [1, 1]]
    assert _matmul(M, integer_inverse(M)) == [[1, 0], [0, 1]]


def test_solve_integer_system():
    A = [[2, 4], [6, 8]]
    x = solve_integer_system(A, [2, 2], 2)
    assert mat_vec(A, x) == [2, 2]
    assert solve_integer_system([[2, 0], [0, 2]], [1, 0], 2) is None


def test_solve_in_finite_group():
    # 3 x = 2 in Z/4
    x = solve_in_finite_group([[3]], [2], [4])
    assert (3 * x[0] - 2) % 4 == 0
    # 2 x = 1 in Z/4 has no solution
    assert solve_in_finite_group([[2]], [1], [4]) is None
    assert solve_in_finite_group([[1]], [], []) == [0]


def test_short_vectors_identity_gram():
    found = sorted(v for v, _ in ShortVectorEnumerator(np.eye(2)).vectors(2.0))
    assert found == [(-1, 1), (0, 1), (1, 0), (1, 1)]


def test_short_vectors_limit():
    with pytest.raises(SearchExhausted):
        list(ShortVectorEnumerator(np.eye(3)).vectors(50.0, limit=5))


def test_t2_of_rational_integer():
    K = make_field([1, 0, 5])
    geometry = T2Geometry(K)
    # T2(2) = 2 * |2|^2
    assert geometry.t2([2, 0]) == pytest.approx(8.0)
    assert geometry.approx_norm([1, 1]) == pytest.approx(6.0)
