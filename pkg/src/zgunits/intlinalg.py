"""Exact integer matrix and lattice algorithms.

Matrices are plain lists of rows of Python ints ("IntMatrix"); a Lattice
is the row span of such a matrix, always stored in canonical row Hermite
normal form so that equal lattices compare equal structurally.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._backend import hnf_core, lll_reduce, xgcd  # noqa: F401  (re-exported)
from .errors import NotASublattice

IntMatrix = list  # list[list[int]], row major

INFINITE = math.inf


def hnf(mat: IntMatrix) -> IntMatrix:
    """Canonical row Hermite normal form, shape preserved (zero rows last)."""
    H, _ = hnf_core(mat, False)
    return H


def hnf_transform(mat: IntMatrix):
    """(H, U) with H = U*mat, U unimodular."""
    return hnf_core(mat, True)


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    n = len(B)
    return [
        [sum(row[k] * B[k][j] for k in range(n)) for j in range(len(B[0]))]
        for row in A
    ]


def mat_vec(A: IntMatrix, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in A]


def vec_mat(v, A: IntMatrix):
    cols = len(A[0]) if A else 0
    return [sum(v[i] * A[i][j] for i in range(len(A))) for j in range(cols)]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*A)] if A else []


def snf(mat: IntMatrix):
    """Smith normal form: (D, U, V) with D = U*mat*V diagonal, d1 | d2 | ...

    Pivot choice: minimal absolute value, ties broken by lower row then
    column index, so the transforms are deterministic.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    D = [list(row) for row in mat]
    U = identity(m)
    V = identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        for c in range(n):
            D[i][c] -= q * D[j][c]
        for c in range(m):
            U[i][c] -= q * U[j][c]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            D[r][i] -= q * D[r][j]
        for r in range(n):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(m):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while True:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best != (t, t):
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
        while True:
            # clear column t below the pivot, then row t, repeat until stable
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_op(i, t, q)
                    if D[i][t]:  # remainder smaller than pivot: promote it
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_op(j, t, q)
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if D[t][t] < 0:
            for c in range(n):
                D[t][c] = -D[t][c]
            for c in range(m):
                U[t][c] = -U[t][c]
        # divisibility: pivot must divide every remaining entry
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # add offending row, redo this pivot
            continue
        t += 1
    return D, U, V


def diagonal(D: IntMatrix):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def unimodular_inverse(V: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(V)
    H, U = hnf_transform(V)
    if H != identity(n):
        raise ValueError("matrix is not unimodular")
    return U


def bareiss_solve(A: IntMatrix, B: IntMatrix):
    """Solve A*X = B exactly over Q for square nonsingular A.

    Returns (X_num, den): X = X_num / den with integer X_num.  None when
    A is singular.
    """
    n = len(A)
    w = len(B[0])
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if M[i][k]:
                piv = i
                break
        if piv is None:
            return None
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n + w):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    det = sign * M[n - 1][n - 1]
    if det == 0:
        return None
    # back substitution with denominator tracking
    X = [[Fraction(0)] * w for _ in range(n)]
    for j in range(w):
        for i in range(n - 1, -1, -1):
            s = Fraction(M[i][n + j])
            for k in range(i + 1, n):
                s -= M[i][k] * X[k][j]
            X[i][j] = s / M[i][i]
    den = 1
    for row in X:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    Xn = [[int(x * den) for x in row] for row in X]
    return Xn, den


class Lattice:
    """Integer lattice given by its canonical HNF basis inside Z^ambient.

    The zero lattice is an empty basis with an explicit ambient rank.
    Equality is structural.
    """

    __slots__ = ("ambient", "rows")

    def __init__(self, ambient: int, rows):
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_rows(cls, ambient: int, rows) -> "Lattice":
        rows = [r for r in rows if any(r)]
        if not rows:
            return cls(ambient, ())
        H = hnf([list(r) for r in rows])
        return cls(ambient, [r for r in H if any(r)])

    @property
    def rank(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __repr__(self):
        return f"Lattice({self.ambient}, {[list(r) for r in self.rows]})"

    def coordinates(self, v):
        """Integer coordinates of v over the basis, or None if v not in L.

        Fast back-substitution using the HNF pivot structure.
        """
        v = list(v)
        coords = []
        for row in self.rows:
            p = next(i for i, x in enumerate(row) if x)
            if v[p] % row[p]:
                return None
            q = v[p] // row[p]
            coords.append(q)
            if q:
                for i in range(p, self.ambient):
                    v[i] -= q * row[i]
        if any(v):
            return None
        return coords

    def __contains__(self, v):
        return self.coordinates(v) is not None


def zero_lattice(ambient: int) -> Lattice:
    return Lattice(ambient, ())


def full_lattice(ambient: int) -> Lattice:
    return Lattice(ambient, identity(ambient))


def integer_kernel(mat: IntMatrix, rows=None) -> Lattice:
    """Lattice {v : v*mat = 0}; `rows` overrides the row count for empty input."""
    m = len(mat) if rows is None else rows
    if m == 0:
        return zero_lattice(0)
    n = len(mat[0]) if mat and mat[0] else 0
    if n == 0:
        return full_lattice(m)
    H, U = hnf_transform(mat)
    ker = [U[i] for i in range(m) if not any(H[i])]
    return Lattice.from_rows(m, ker)


def solve_over_lattice_rows(rows: IntMatrix, v):
    """Integer x with x*rows = v, or None.  rows need not be independent."""
    if not rows:
        return None if any(v) else []
    H, U = hnf_transform(rows)
    L = Lattice(len(rows[0]), [r for r in H if any(r)])
    c = L.coordinates(v)
    if c is None:
        return None
    nz = [i for i, r in enumerate(H) if any(r)]
    x = [0] * len(rows)
    for ci, i in zip(c, nz):
        if ci:
            for j in range(len(rows)):
                x[j] += ci * U[i][j]
    return x


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Intersection of two lattices in the same ambient Z^m."""
    if L1.ambient != L2.ambient:
        raise ValueError("ambient ranks differ")
    m = L1.ambient
    if not L1.rows or not L2.rows:
        return zero_lattice(m)
    stacked = [list(r) for r in L1.rows] + [[-x for x in r] for r in L2.rows]
    K = integer_kernel(stacked)
    # kernel vectors (u, w) satisfy u*B1 = w*B2; project to u*B1
    out = []
    for k in K.rows:
        u = k[: L1.rank]
        out.append(vec_mat(u, [list(r) for r in L1.rows]))
    return Lattice.from_rows(m, out)


def pure_closure(L: Lattice) -> Lattice:
    """Smallest pure superlattice (saturation): spanQ(L) ∩ Z^m."""
    if not L.rows:
        return L
    B = [list(r) for r in L.rows]
    K = integer_kernel(transpose(B))  # right kernel of B
    if not K.rows:
        return full_lattice(L.ambient)
    return integer_kernel(transpose([list(r) for r in K.rows]))


def sublattice_index(Lsub: Lattice, L: Lattice):
    """[L : Lsub]; INFINITE when ranks differ, NotASublattice when Lsub ⊄ L."""
    if Lsub.ambient != L.ambient:
        raise ValueError("ambient ranks differ")
    coords = []
    for r in Lsub.rows:
        c = L.coordinates(r)
        if c is None:
            raise NotASublattice(f"{list(r)} is not in the target lattice")
        coords.append(c)
    if Lsub.rank < L.rank:
        return INFINITE
    D, _, _ = snf(coords)
    idx = 1
    for d in diagonal(D):
        idx *= d
    return abs(idx)


def congruence_kernel(M: IntMatrix, moduli, rows=None) -> Lattice:
    """Lattice {x : (x*M)[j] ≡ 0 mod moduli[j] for all j}; modulus 0 = exact."""
    r = len(M) if rows is None else rows
    c = len(moduli)
    if r == 0:
        return zero_lattice(0)
    if c == 0:
        return full_lattice(r)
    A = [list(row) for row in M]
    slack = [j for j in range(c) if moduli[j]]
    for j in slack:
        A.append([moduli[j] if jj == j else 0 for jj in range(c)])
    K = integer_kernel(A, rows=r + len(slack))
    return Lattice.from_rows(r, [k[:r] for k in K.rows])


def size_reduced_rows(L: Lattice):
    """A small basis of L (LLL); any basis is as good for generating."""
    if L.rank <= 1:
        return [list(r) for r in L.rows]
    return lll_reduce([list(r) for r in L.rows])


def reduce_vec_mod_lattice(x, L: Lattice):
    """Shrink x by subtracting lattice vectors (pivot-wise Babai round)."""
    x = list(x)
    for row in L.rows:
        p = next(i for i, v in enumerate(row) if v)
        q = (2 * x[p] + row[p]) // (2 * row[p])
        if q:
            for i in range(p, len(x)):
                x[i] -= q * row[i]
    return x


def congruence_solve(M: IntMatrix, moduli, target):
    """Particular x with (x*M)[j] ≡ target[j] mod moduli[j], or None."""
    r = len(M)
    c = len(moduli)
    A = [list(row) for row in M]
    for j in range(c):
        if moduli[j]:
            A.append([moduli[j] if jj == j else 0 for jj in range(c)])
    if not A:
        return None if any(target) else []
    x = solve_over_lattice_rows(A, list(target))
    if x is None:
        return None
    return x[:r]
