"""
Integer lattice toolkit: Hermite and Smith normal forms, linear systems over
finite abelian groups, LLL, and Fincke-Pohst short-vector enumeration.

The T2 geometry here is the only floating-point code in the package. It only
steers searches: every element a search returns is checked exactly by the caller.
"""

import math
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple
import logging

import mpmath
import numpy as np
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from errors import SearchExhausted

logger = logging.getLogger(__name__)

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(x, y, g) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def hnf_basis(vectors: Sequence[Sequence[int]], dim: int, modulus: Optional[int] = None) -> List[List[int]]:
    """
    Canonical basis of the Z-span of `vectors` (each of length `dim`).

    Args:
        vectors: generating vectors
        dim: ambient dimension
        modulus: a positive multiple of the lattice determinant (full-rank lattices only)

    Returns:
        Basis vectors in Hermite normal form order
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    k = len(vectors)
    A = DomainMatrix([[ZZ(int(vectors[j][i])) for j in range(k)] for i in range(dim)], (dim, k), ZZ)
    if modulus:
        W = hermite_normal_form(A, D=ZZ(int(modulus)))
    else:
        W = hermite_normal_form(A)
    rows, cols = W.shape
    dense = W.to_Matrix()
    return [[int(dense[i, j]) for i in range(rows)] for j in range(cols)]


def determinant(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    return int(DomainMatrix([[ZZ(int(v)) for v in row] for row in rows], (n, n), ZZ).det())


def smith_form(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Tuple[List[int], Matrix, Matrix]:
    """
    Smith normal form with transforms.

    Returns (diag, U, V) with U*A*V = D, U and V unimodular, D diagonal with
    diag = [d_1, ..., d_r], d_i | d_(i+1), d_i >= 0, r = min(rows, cols).
    """
    D = [list(map(int, row)) for row in A]
    r = len(D)
    c = ncols if ncols is not None else (len(D[0]) if D else 0)
    U = identity(r)
    V = identity(c)

    def add_row(dst: int, src: int, k: int):
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def swap_rows(i: int, j: int):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def add_col(dst: int, src: int, k: int):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def swap_cols(i: int, j: int):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(r, c):
        pivot = None
        for i in range(t, r):
            for j in range(t, c):
                if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            for i in range(t + 1, r):
                while D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(i, t)
            for j in range(t + 1, c):
                while D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(j, t)
            if all(D[i][t] == 0 for i in range(t + 1, r)) and all(D[t][j] == 0 for j in range(t + 1, c)):
                break
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
        t += 1

    size = min(r, c)
    # divisibility fix-up: diag(a, b) -> diag(gcd, lcm)
    changed = True
    while changed:
        changed = False
        for i in range(size):
            for j in range(i + 1, size):
                a, b = D[i][i], D[j][j]
                if a == b:
                    continue
                if a != 0 and b % a == 0:
                    continue
                if a == 0:
                    swap_rows(i, j)
                    swap_cols(i, j)
                    changed = True
                    continue
                s, tt, g = xgcd(a, b)
                # left [[s, t], [-b/g, a/g]], right [[1, -t b/g], [1, s a/g]]
                ri, rj = D[i], D[j]
                ui, uj = U[i], U[j]
                D[i] = [s * x + tt * y for x, y in zip(ri, rj)]
                D[j] = [(-b // g) * x + (a // g) * y for x, y in zip(ri, rj)]
                U[i] = [s * x + tt * y for x, y in zip(ui, uj)]
                U[j] = [(-b // g) * x + (a // g) * y for x, y in zip(ui, uj)]
                for row in D:
                    ci, cj = row[i], row[j]
                    row[i] = ci + cj
                    row[j] = -(tt * b // g) * ci + (s * a // g) * cj
                for row in V:
                    ci, cj = row[i], row[j]
                    row[i] = ci + cj
                    row[j] = -(tt * b // g) * ci + (s * a // g) * cj
                changed = True

    for i in range(size):
        if D[i][i] < 0:
            D[i] = [-v for v in D[i]]
            U[i] = [-v for v in U[i]]

    diag = [D[i][i] for i in range(size)]
    return diag, U, V


def integer_inverse(M: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(M)
    if n == 0:
        return []
    inv = DomainMatrix([[QQ(int(v)) for v in row] for row in M], (n, n), QQ).inv().to_Matrix()
    return [[int(inv[i, j]) for j in range(n)] for i in range(n)]


def mat_vec(M: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def vec_mat(v: Sequence[int], M: Sequence[Sequence[int]]) -> List[int]:
    cols = len(M[0]) if M else 0
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(cols)]


def solve_integer_system(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> Optional[List[int]]:
    """Some integer x with A x = b, or None."""
    diag, U, V = smith_form(A, ncols)
    y = mat_vec(U, b)
    z = [0] * ncols
    for i, yi in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if yi != 0:
                return None
            continue
        if yi % d:
            return None
        z[i] = yi // d
    return mat_vec(V, z)


def solve_in_finite_group(columns: Sequence[Sequence[int]], target: Sequence[int],
                          orders: Sequence[int]) -> Optional[List[int]]:
    """
    Solve sum_j x_j * columns[j] = target in the group (+)_i Z/orders[i].

    Returns:
        Integer coefficients x, or None when target is outside the span
    """
    r = len(orders)
    k = len(columns)
    if r == 0:
        return [0] * k
    A = [[columns[j][i] for j in range(k)] + [orders[i] if t == i else 0 for t in range(r)] for i in range(r)]
    w = solve_integer_system(A, list(target), k + r)
    if w is None:
        return None
    return w[:k]


def lll_transform(rows: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """LLL-reduce integer row vectors; returns (reduced rows, T) with T * rows = reduced."""
    k = len(rows)
    n = len(rows[0])
    A = DomainMatrix([[ZZ(int(v)) for v in row] for row in rows], (k, n), ZZ)
    reduced, T = A.lll_transform(delta=QQ(99, 100))
    R, Tm = reduced.to_Matrix(), T.to_Matrix()
    return ([[int(R[i, j]) for j in range(n)] for i in range(k)],
            [[int(Tm[i, j]) for j in range(k)] for i in range(k)])


class T2Geometry:
    """
    Real coordinates for the T2 form sum |sigma_i(x)|^2 on integral-basis coordinates.

    Rows: real embeddings, then sqrt(2)*Re and sqrt(2)*Im for one embedding per complex pair.
    """

    def __init__(self, field, digits: int = 60):
        self.field = field
        self.digits = digits
        with mpmath.workdps(digits):
            roots = mpmath.polyroots([int(c) for c in field.coefficients], maxsteps=400, extraprec=4 * digits)
            tol = mpmath.mpf(10) ** (-(digits // 2))
            real = sorted([r for r in roots if abs(mpmath.im(r)) < tol], key=lambda r: mpmath.re(r))
            upper = sorted([r for r in roots if mpmath.im(r) >= tol], key=lambda r: (mpmath.re(r), mpmath.im(r)))
            self.real_roots = [mpmath.re(r) for r in real]
            self.complex_roots = upper
            m = field.degree
            columns = [[mpmath.mpf(c) / field.basis_denom for c in col] for col in field.basis_columns]
            rows = []
            for rho in self.real_roots:
                rows.append([sum(col[i] * rho ** i for i in range(m)) for col in columns])
            sqrt2 = mpmath.sqrt(2)
            for rho in self.complex_roots:
                values = [sum(col[i] * rho ** i for i in range(m)) for col in columns]
                rows.append([sqrt2 * mpmath.re(v) for v in values])
                rows.append([sqrt2 * mpmath.im(v) for v in values])
            self._rows_mp = rows
            self.embedding_matrix = np.array([[float(v) for v in row] for row in rows], dtype=float)
            self._complex_values = [
                [sum(col[i] * rho ** i for i in range(m)) for col in columns]
                for rho in list(self.real_roots) + list(self.complex_roots)
            ]

    def coordinates(self, coords: Sequence) -> np.ndarray:
        return self.embedding_matrix @ np.array([float(c) for c in coords], dtype=float)

    def t2(self, coords: Sequence) -> float:
        v = self.coordinates(coords)
        return float(v @ v)

    def gram(self, basis: Sequence[Sequence[int]]) -> np.ndarray:
        B = np.array([[float(c) for c in vec] for vec in basis], dtype=float).T
        EB = self.embedding_matrix @ B
        return EB.T @ EB

    def log_abs(self, coords: Sequence) -> List[float]:
        """log|sigma_j(x)| at each place (real places first), from exact integral-basis coordinates."""
        out = []
        with mpmath.workdps(self.digits):
            for values in self._complex_values:
                s = sum(mpmath.mpf(int(c.numerator)) / int(c.denominator) * v
                        for c, v in zip(map(Fraction, coords), values))
                out.append(float(mpmath.log(abs(s))))
        return out

    def place_weights(self) -> List[int]:
        return [1] * len(self.real_roots) + [2] * len(self.complex_roots)

    def approx_norm(self, coords: Sequence) -> float:
        v = self.coordinates(coords)
        r1 = len(self.real_roots)
        result = 1.0
        for j in range(r1):
            result *= abs(v[j])
        for k in range(len(self.complex_roots)):
            result *= (v[r1 + 2 * k] ** 2 + v[r1 + 2 * k + 1] ** 2) / 2
        return result

    def reduced_basis(self, basis: Sequence[Sequence[int]], scale_bits: int = 40) -> List[List[int]]:
        """LLL-reduce a lattice basis (integral coordinates) for the T2 form."""
        if len(basis) <= 1:
            return [list(b) for b in basis]
        scale = 2 ** scale_bits
        with mpmath.workdps(self.digits):
            real_rows = []
            for vec in basis:
                vals = [sum(row[j] * int(vec[j]) for j in range(len(vec))) for row in self._rows_mp]
                real_rows.append([int(mpmath.nint(v * scale)) for v in vals] + list(map(int, vec)))
        _, T = lll_transform(real_rows)
        return [[sum(T[i][k] * basis[k][j] for k in range(len(basis))) for j in range(len(basis[0]))]
                for i in range(len(basis))]


class ShortVectorEnumerator:
    """Fincke-Pohst enumeration of integer vectors with x^T Q x <= C."""

    def __init__(self, gram: np.ndarray):
        self.n = gram.shape[0]
        q = np.array(gram, dtype=float).copy()
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                q[j][i] = q[i][j]
                q[i][j] = q[i][j] / q[i][i]
            for k in range(i + 1, n):
                for l in range(k, n):
                    q[k][l] -= q[k][i] * q[i][l]
        self.q = q

    def vectors(self, bound: float, limit: Optional[int] = None) -> Iterator[Tuple[Tuple[int, ...], float]]:
        """
        Yield (x, Q(x)) for nonzero x with Q(x) <= bound, one of each +-x pair.

        Args:
            bound: upper bound C
            limit: stop after this many candidate leaves
        """
        n, q = self.n, self.q
        eps = 1e-9 * max(bound, 1.0)
        x = [0] * n
        visited = [0]

        def rec(i: int, remaining: float):
            center = -sum(q[i][j] * x[j] for j in range(i + 1, n))
            radius = math.sqrt(max(remaining, 0.0) / q[i][i])
            lo = math.ceil(center - radius - 1e-9)
            hi = math.floor(center + radius + 1e-9)
            for v in range(lo, hi + 1):
                x[i] = v
                used = q[i][i] * (v - center) ** 2
                if used > remaining + eps:
                    continue
                if i == 0:
                    visited[0] += 1
                    if limit is not None and visited[0] > limit:
                        raise SearchExhausted(f"short-vector enumeration passed {limit} candidates")
                    top = next((k for k in range(n - 1, -1, -1) if x[k]), None)
                    if top is not None and x[top] > 0:
                        yield tuple(x), bound - (remaining - used)
                else:
                    yield from rec(i - 1, remaining - used)
            x[i] = 0

        yield from rec(n - 1, float(bound))

