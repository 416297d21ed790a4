# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of zgunits._kernels_py.

Same names, same semantics, same arbitrary-precision integer results;
only the interpreter overhead of the inner loops is removed.  Keep the
two files in sync (tests/test_kernels.py cross-checks them).
"""

BACKEND = "cython"


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == a*x + b*y."""
    cdef object x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, r
    while b:
        q = a // b
        r = a - q * b
        a = b
        b = r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def poly_mul(list a, list b):
    """Convolution of two coefficient lists (ascending powers)."""
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef object ai, bj
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                bj = b[j]
                if bj:
                    out[i + j] = out[i + j] + ai * bj
    return out


def poly_rem(list a, list m):
    """Remainder of a modulo the monic integer polynomial m (ascending)."""
    cdef Py_ssize_t d = len(m) - 1, i, j, base
    cdef object c
    cdef list r = list(a)
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            base = i - d
            for j in range(d):
                r[base + j] = r[base + j] - c * m[j]
    del r[d:]
    while len(r) < d:
        r.append(0)
    return r


cdef void _row_sub(list r, list s, object q):
    cdef Py_ssize_t i
    for i in range(len(r)):
        r[i] = r[i] - q * s[i]


cdef list _row_neg(list r):
    cdef Py_ssize_t i
    for i in range(len(r)):
        r[i] = -r[i]
    return r


def hnf_core(mat, bint track):
    """Canonical row Hermite normal form; see the pure twin for the contract."""
    cdef Py_ssize_t m = len(mat)
    cdef Py_ssize_t n = len(mat[0]) if m else 0
    cdef list A = [list(row) for row in mat]
    cdef list U = None
    cdef Py_ssize_t r = 0, c, i, i0
    cdef object p, q
    cdef list nz
    if track:
        U = [[1 if i == c else 0 for c in range(m)] for i in range(m)]
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            i0 = nz[0]
            for i in nz:
                if abs(A[i][c]) < abs(A[i0][c]):
                    i0 = i
            if A[i0][c] < 0:
                _row_neg(A[i0])
                if track:
                    _row_neg(U[i0])
            if len(nz) == 1:
                break
            p = A[i0][c]
            for i in nz:
                if i == i0:
                    continue
                q = A[i][c] // p
                if q:
                    _row_sub(A[i], A[i0], q)
                    if track:
                        _row_sub(U[i], U[i0], q)
        nz = [i for i in range(r, m) if A[i][c]]
        if not nz:
            continue
        i0 = nz[0]
        if i0 != r:
            A[r], A[i0] = A[i0], A[r]
            if track:
                U[r], U[i0] = U[i0], U[r]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                _row_sub(A[i], A[r], q)
                if track:
                    _row_sub(U[i], U[r], q)
        r += 1
    return A, U


def lll_reduce(basis, delta_num=99, delta_den=100):
    """LLL-reduce independent integer rows (all-integer variant)."""
    cdef list b = [list(row) for row in basis]
    cdef Py_ssize_t n = len(b)
    if n <= 1:
        return b
    cdef list lam = [[0] * n for _ in range(n)]
    cdef list d = [0] * (n + 1)
    d[0] = 1
    cdef object dnum = delta_num, dden = delta_den
    cdef Py_ssize_t kmax = 0, k, i, j, l
    cdef object u, t, q, lt, B, dl

    def dot(list u_, list v_):
        cdef Py_ssize_t ii
        cdef object s = 0
        for ii in range(len(u_)):
            s = s + u_[ii] * v_[ii]
        return s

    def compute_row(Py_ssize_t i_):
        cdef Py_ssize_t j_, k_
        cdef object u_
        for j_ in range(i_ + 1):
            u_ = dot(b[i_], b[j_])
            for k_ in range(j_):
                u_ = (d[k_ + 1] * u_ - lam[i_][k_] * lam[j_][k_]) // d[k_]
            if j_ < i_:
                lam[i_][j_] = u_
            else:
                if u_ <= 0:
                    raise ValueError("lll_reduce: rows are linearly dependent")
                d[i_ + 1] = u_

    def red(Py_ssize_t k_, Py_ssize_t l_):
        cdef object t_ = 2 * lam[k_][l_]
        cdef object dl_ = d[l_ + 1]
        cdef object q_
        cdef Py_ssize_t i_
        if t_ > dl_ or t_ < -dl_:
            q_ = (t_ + dl_) // (2 * dl_)
            if q_:
                _row_sub(b[k_], b[l_], q_)
                lam[k_][l_] = lam[k_][l_] - q_ * dl_
                for i_ in range(l_):
                    lam[k_][i_] = lam[k_][i_] - q_ * lam[l_][i_]

    def swap(Py_ssize_t k_, Py_ssize_t kmax_):
        cdef Py_ssize_t j_, i_
        cdef object lt_, B_, t_
        b[k_], b[k_ - 1] = b[k_ - 1], b[k_]
        for j_ in range(k_ - 1):
            lam[k_][j_], lam[k_ - 1][j_] = lam[k_ - 1][j_], lam[k_][j_]
        lt_ = lam[k_][k_ - 1]
        B_ = (d[k_ - 1] * d[k_ + 1] + lt_ * lt_) // d[k_]
        for i_ in range(k_ + 1, kmax_ + 1):
            t_ = lam[i_][k_]
            lam[i_][k_] = (d[k_ + 1] * lam[i_][k_ - 1] - lt_ * t_) // d[k_]
            lam[i_][k_ - 1] = (B_ * t_ + lt_ * lam[i_][k_]) // d[k_ + 1]
        d[k_] = B_

    compute_row(0)
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            compute_row(k)
        red(k, k - 1)
        if dden * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < dnum * d[k] * d[k]:
            swap(k, kmax)
            k = k - 1 if k > 1 else 1
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b
