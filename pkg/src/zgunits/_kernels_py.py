"""Pure-Python implementations of the arithmetic hot loops.

The compiled twin (``zgunits._kernels_c``, built from ``_kernels_c.pyx``)
exports the same names with identical semantics; ``zgunits._backend``
selects whichever is importable.  Everything here works on plain Python
ints (arbitrary precision) and lists, so the two backends are
interchangeable bit for bit.
"""

BACKEND = "python"


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == a*x + b*y."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def poly_mul(a, b):
    """Convolution of two coefficient lists (ascending powers)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out

def poly_rem(a, m):
    """Remainder of a modulo the monic integer polynomial m (ascending).

    Exact over Z because m is monic.  Returns a list of length deg(m).
    """
    d = len(m) - 1
    r = list(a)
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            base = i - d
            for j in range(d):
                r[base + j] -= c * m[j]
    del r[d:]
    while len(r) < d:
        r.append(0)
    return r


def _row_sub(r, s, q):
    for i in range(len(r)):
        r[i] -= q * s[i]


def hnf_core(mat, track):
    """Canonical row Hermite normal form.

    Returns (H, U) with H = U*mat when track is true, else (H, None).
    H keeps the shape of mat: zero rows are collected at the bottom,
    pivots are positive and entries above each pivot lie in [0, pivot).
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [list(row) for row in mat]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if track else None
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclidean reduction of column c below row r to a single pivot.
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(A[i][c]), i))
            if A[i0][c] < 0:
                A[i0] = [-x for x in A[i0]]
                if track:
                    U[i0] = [-x for x in U[i0]]
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
    """LLL-reduce a basis of linearly independent integer rows.

    All-integer variant (Gram determinants d[] and scaled coefficients
    lam[][]); raises ValueError on dependent rows.  delta defaults to
    0.99 for strong reduction.
    """
    b = [list(row) for row in basis]
    n = len(b)
    if n <= 1:
        return b
    lam = [[0] * n for _ in range(n)]
    d = [0] * (n + 1)
    d[0] = 1

    def dot(u, v):
        s = 0
        for x, y in zip(u, v):
            s += x * y
        return s

    def compute_row(i):
        for j in range(i + 1):
            u = dot(b[i], b[j])
            for k in range(j):
                u = (d[k + 1] * u - lam[i][k] * lam[j][k]) // d[k]
            if j < i:
                lam[i][j] = u
            else:
                if u <= 0:
                    raise ValueError("lll_reduce: rows are linearly dependent")
                d[i + 1] = u

    def red(k, l):
        t = 2 * lam[k][l]
        dl = d[l + 1]
        if t > dl or t < -dl:
            q = (t + dl) // (2 * dl)
            if q:
                _row_sub(b[k], b[l], q)
                lam[k][l] -= q * dl
                for i in range(l):
                    lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lt = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lt * lt) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lt * t) // d[k]
            lam[i][k - 1] = (B * t + lt * lam[i][k]) // d[k + 1]
        d[k] = B

    kmax = 0
    compute_row(0)
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            compute_row(k)
        red(k, k - 1)
        if delta_den * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < delta_num * d[k] * d[k]:
            swap(k, kmax)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b
