"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer matrices hold ``int`` entries,
rational ones hold :class:`fractions.Fraction`.  Nothing in here ever touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import ZeroVectorError

Rat = Fraction
Vector = Sequence
Matrix = Sequence[Sequence]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if any(c in x for c in ".eE"):
            raise ValueError(f"non-exact number {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def lcm_list(xs: Iterable[int]) -> int:
    return reduce(lcm, xs, 1)


def gcd_list(xs: Iterable[int]) -> int:
    return reduce(gcd, xs, 0)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd_list(int(x) for x in v)
    if g == 0:
        raise ZeroVectorError("ZeroVector: primitive() of the zero vector")
    return tuple(int(x) // g for x in v)


def integral_direction(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector positively proportional to a rational vector.

    The zero vector is returned unchanged.
    """
    fr = [as_fraction(x) for x in v]
    den = lcm_list(x.denominator for x in fr)
    ints = [int(x * den) for x in fr]
    if not any(ints):
        return tuple(ints)
    return primitive(ints)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def matmul(A: Matrix, B: Matrix) -> list[list]:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)]
            for i in range(len(A))]


def matvec(A: Matrix, v: Sequence) -> list:
    return [dot(row, v) for row in A]


def transpose(A: Matrix, ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Rational elimination

def rref(A: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    M = [[as_fraction(x) for x in row] for row in A]
    if not M:
        return [], []
    n = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(A: Matrix) -> int:
    if not A or not A[0]:
        return 0
    # fraction-free elimination on integer input is much faster than Fractions
    if all(isinstance(x, int) for row in A for x in row):
        return _int_rank([list(r) for r in A])
    return len(rref(A)[1])


def _int_rank(M: list[list[int]]) -> int:
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, rows):
            mi = M[i][c]
            if mi:
                row = [piv * a - mi * b for a, b in zip(M[i], M[r])]
                g = gcd_list(row)
                M[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == rows:
            break
    return r


def nullspace(A: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q (one vector per free column)."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, piv = rref(A, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence, ncols: int | None = None) -> list[Fraction] | None:
    """One rational solution of A x = b, or None when inconsistent."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [Fraction(0)] * n
    aug = [list(row) + [b_i] for row, b_i in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return x


def inverse(A: Matrix) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def det(A: Matrix) -> Fraction:
    n = len(A)
    M = [[as_fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def row_space_basis(A: Matrix) -> list[list[Fraction]]:
    return rref(A)[0] if A else []


# ---------------------------------------------------------------------------
# Integer normal forms

def smith_normal_form(M: Matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form S = U M V with U, V unimodular.

    The diagonal of S is nonnegative and each entry divides the next.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    S = [[int(x) for x in row] for row in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (S, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for R in (S, V):
            for row in R:
                row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        nz = [(abs(S[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pull in any entry the pivot fails to divide
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return S, U, V


def invariant_factors(M: Matrix) -> list[int]:
    S, _, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def hermite_normal_form(rows: Matrix) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by the given integer rows.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into [0, pivot).
    """
    H = [[int(x) for x in r] for r in rows if any(r)]
    if not H:
        return []
    n = len(H[0])
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, len(H)) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            cleared = True
            for i in range(r + 1, len(H)):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    if H[i][c]:
                        cleared = False
            if cleared:
                break
        if r < len(H) and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
            r += 1
        if r == len(H):
            break
    return [row for row in H if any(row)]


def integer_kernel_basis(M: Matrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Lattice basis (in Hermite normal form) of {x in Z^n : M x = 0}."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [tuple(r) for r in identity(n)]
    S, _, V = smith_normal_form(M)
    r = sum(1 for i in range(min(len(S), n)) if S[i][i])
    basis = [[V[i][j] for i in range(n)] for j in range(r, n)]
    return [tuple(row) for row in hermite_normal_form(basis)]


def integer_solution(A: Matrix, b: Sequence, ncols: int | None = None) -> list[int] | None:
    """An integer solution of A x = b (b rational allowed), or None."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [0] * n
    S, U, V = smith_normal_form(A)
    c = matvec(U, [as_fraction(x) for x in b])
    y = [0] * n
    for i, ci in enumerate(c):
        d = S[i][i] if i < n else 0
        if d == 0:
            if ci != 0:
                return None
            continue
        q = ci / d
        if q.denominator != 1:
            return None
        y[i] = int(q)
    return [int(x) for x in matvec(V, y)]


def integrality_index(A: Matrix, b: Sequence, ncols: int | None = None) -> int | None:
    """Least k >= 1 such that A x = k b has an integer solution.

    Returns None when A x = b has no rational solution at all.
    """
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return 1
    S, U, _ = smith_normal_form(A)
    c = matvec(U, [as_fraction(x) for x in b])
    k = 1
    for i, ci in enumerate(c):
        d = S[i][i] if i < n else 0
        if d == 0:
            if ci != 0:
                return None
            continue
        k = lcm(k, (ci / d).denominator)
    return k


# ---------------------------------------------------------------------------
# Exact linear programming

def lp_feasible(A_ge: Matrix, b_ge: Sequence, A_eq: Matrix = (), b_eq: Sequence = (),
                nvars: int | None = None) -> list[Fraction] | None:
    """A point x with A_ge x >= b_ge and A_eq x = b_eq, or None if none exists.

    Two-phase-free formulation: a single phase-one simplex with Bland's rule
    on the split free variables.  Exact Fraction arithmetic throughout.
    """
    rows_ge = [[as_fraction(a) for a in r] for r in A_ge]
    rows_eq = [[as_fraction(a) for a in r] for r in A_eq]
    n = nvars if nvars is not None else len((rows_ge or rows_eq or [[]])[0])
    m_ge, m_eq = len(rows_ge), len(rows_eq)
    m = m_ge + m_eq
    if m == 0:
        return [Fraction(0)] * n
    # columns: x+ (n), x- (n), surplus (m_ge), artificial (m)
    ncol = 2 * n + m_ge + m
    T = []
    for i in range(m):
        if i < m_ge:
            a, rhs = rows_ge[i], as_fraction(b_ge[i])
        else:
            a, rhs = rows_eq[i - m_ge], as_fraction(b_eq[i - m_ge])
        row = [Fraction(0)] * (ncol + 1)
        for j in range(n):
            row[j] = a[j]
            row[n + j] = -a[j]
        if i < m_ge:
            row[2 * n + i] = Fraction(-1)
        row[ncol] = rhs
        if rhs < 0:
            row = [-x for x in row]
        row[2 * n + m_ge + i] = Fraction(1)
        T.append(row)
    basis = [2 * n + m_ge + i for i in range(m)]
    art0 = 2 * n + m_ge
    # reduced costs of phase one objective sum(artificials)
    red = [Fraction(0)] * (ncol + 1)
    for j in range(ncol + 1):
        if j < art0 or j == ncol:
            red[j] = -sum(T[i][j] for i in range(m))
    while True:
        enter = next((j for j in range(ncol) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][ncol] / T[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded direction; cannot happen in phase one
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        f = red[enter]
        red = [a - f * b for a, b in zip(red, T[r])]
        basis[r] = enter
    if red[ncol] != 0:  # -(optimal sum of artificials)
        return None
    val = [Fraction(0)] * ncol
    for i, bcol in enumerate(basis):
        val[bcol] = T[i][ncol]
    return [val[j] - val[n + j] for j in range(n)]
