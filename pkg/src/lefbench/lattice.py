"""Exact integer lattice linear algebra.

Everything here works over arbitrary-precision Python ints (no numpy
integer overflow), exactness being the point: fixed-point counts,
subtorus intersections and congruence solutions are combinatorial data.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def _int_matrix(M) -> list[list[int]]:
    A = np.asarray(M)
    out = []
    for row in A:
        r = []
        for x in row:
            xi = int(round(float(x)))
            if abs(float(x) - xi) > 1e-9:
                raise ValueError("matrix entry %r is not an integer" % (x,))
            r.append(xi)
        out.append(r)
    return out


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M):
    """U, D, V with U @ M @ V = D, U and V unimodular, D diagonal with
    d_1 | d_2 | ... (nonnegative).  Returns numpy object arrays of ints."""
    A = _int_matrix(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        # locate a nonzero pivot in the trailing submatrix
        pr = pc = -1
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pr, pc = i, j
        if pr < 0:
            break
        swap_rows(t, pr)
        swap_cols(t, pc)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
            # clear row t
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            fixed = True
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % A[t][t]:
                        add_row(i, t, 1)
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    D = [[A[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)]
    return (np.array(U, dtype=object), np.array(D, dtype=object),
            np.array(V, dtype=object))


def determinant(M) -> int:
    """Exact determinant of an integer matrix (Bareiss)."""
    A = _int_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def unimodular_inverse(M) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    A = _int_matrix(M)
    n = len(A)
    d = determinant(A)
    if abs(d) != 1:
        raise ValueError("matrix is not unimodular")
    # adjugate via cofactors (n <= 8 in practice)
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            inv[i][j] = d * (-1) ** (i + j) * determinant(minor) // 1
    return np.array(inv, dtype=object)


def row_kernel_basis(M) -> np.ndarray:
    """Basis rows for {x in Z^r : x @ M = 0}."""
    U, D, _ = smith_normal_form(M)
    rows = U.shape[0]
    rank = sum(1 for i in range(min(D.shape)) if D[i][i] != 0)
    return U[rank:rows]


def saturate_rows(rows) -> np.ndarray:
    """Basis (rows) of the saturation span_Q(rows) intersect Z^n."""
    B = np.array(_int_matrix(rows), dtype=object)
    if B.size == 0:
        return B.reshape(0, 0)
    _, D, V = smith_normal_form(B)
    rank = sum(1 for i in range(min(D.shape)) if D[i][i] != 0)
    Vinv = unimodular_inverse(V)
    return Vinv[:rank]


def solve_congruence(M, b):
    """All solutions of M x = b (mod Z^n) with x in [0,1)^n, for integer M
    with det != 0 and rational b.  Returns (count, list of Fraction tuples).
    """
    U, D, V = smith_normal_form(M)
    n = U.shape[0]
    dvals = [int(D[i][i]) for i in range(n)]
    if any(d == 0 for d in dvals):
        raise ValueError("degenerate congruence (det = 0)")
    bfrac = [Fraction(x).limit_denominator(10 ** 12) if not isinstance(x, Fraction) else x
             for x in b]
    Ub = [sum(int(U[i][j]) * bfrac[j] for j in range(n)) for i in range(n)]
    count = 1
    for d in dvals:
        count *= abs(d)
    points = []
    idx = [0] * n
    while True:
        y = [(Ub[i] + idx[i]) / dvals[i] for i in range(n)]
        x = [sum(Fraction(int(V[i][j])) * y[j] for j in range(n)) % 1 for i in range(n)]
        points.append(tuple(x))
        # odometer over residues
        i = 0
        while i < n:
            idx[i] += 1
            if idx[i] < abs(dvals[i]):
                break
            idx[i] = 0
            i += 1
        if i == n:
            break
    assert len(points) == count
    return count, points


def dual_vectors_in_ball(gram_inv, radius: float):
    """Integer vectors k != 0 with k^T gram_inv k <= radius^2, in a
    deterministic order (by squared length, then lexicographically).
    gram_inv is the Gram matrix of the dual lattice basis."""
    G = np.asarray(gram_inv, dtype=float)
    n = G.shape[0]
    # box bound: |k_i| <= radius * sqrt((G^{-1})_{ii}) is awkward; use
    # eigenvalue bound |k| <= radius / sqrt(lambda_min(G))
    lam_min = float(np.linalg.eigvalsh(G)[0])
    if lam_min <= 0:
        raise ValueError("dual Gram matrix must be positive definite")
    bound = int(np.floor(radius / np.sqrt(lam_min))) + 1
    out = []
    rng = range(-bound, bound + 1)
    import itertools
    for k in itertools.product(rng, repeat=n):
        if all(x == 0 for x in k):
            continue
        kv = np.array(k, dtype=float)
        q = float(kv @ G @ kv)
        if q <= radius * radius + 1e-12:
            out.append((q, k))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def compensated_sum(values) -> complex:
    """Neumaier-compensated sum, applied separately to real and imaginary
    parts, over the values in their given (deterministic) order."""
    sr = cr = 0.0
    si = ci = 0.0
    for v in values:
        vc = complex(v)
        for part, acc in ((vc.real, 0), (vc.imag, 1)):
            if acc == 0:
                t = sr + part
                if abs(sr) >= abs(part):
                    cr += (sr - t) + part
                else:
                    cr += (part - t) + sr
                sr = t
            else:
                t = si + part
                if abs(si) >= abs(part):
                    ci += (si - t) + part
                else:
                    ci += (part - t) + si
                si = t
    return complex(sr + cr, si + ci)
