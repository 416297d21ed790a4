"""Finite quotient rings R = O/J of orders in toral algebras, their unit
groups (two independent strategies), and discrete logs in R^*.

A FiniteRing is an additive group ⊕ Z/n_i with a bilinear multiplication
table; elements are coordinate tuples.  Strategy A enumerates elements
and tests invertibility; strategy B decomposes R into local pieces
(CRT by characteristic, then idempotent splitting via the Frobenius
subalgebra) and assembles each local unit group as (Teichmüller lift) ×
(principal units).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .config import DEFAULT, Config
from .errors import EnumerationBoundExceeded, NotInImage
from .intlinalg import (
    Lattice,
    congruence_solve,
    diagonal,
    snf,
    solve_over_lattice_rows,
    unimodular_inverse,
)
from .relations import FGAbelianPresentation, standard_gens


class FiniteRing:
    """Finite commutative ring with identity, as additive SNF generators
    b_1..b_k of orders n_1 | ... | n_k plus the multiplication table."""

    def __init__(self, orders, basis_lifts, reduce_fn, mul_lift_fn, one_lift):
        self.orders = tuple(orders)
        self.basis_lifts = list(basis_lifts)
        self.ambient_dim = len(one_lift)
        self._reduce_fn = reduce_fn
        self._mul_lift = mul_lift_fn
        self.one = reduce_fn(one_lift)
        self.parent = None  # set for pieces carved out of a bigger ring
        k = len(self.orders)
        self._table = [[None] * k for _ in range(k)]

    @property
    def size(self):
        return math.prod(self.orders)

    def reduce(self, lift):
        return self._reduce_fn(lift)

    def lift(self, x):
        out = None
        for xi, b in zip(x, self.basis_lifts):
            if xi:
                t = [xi * c for c in b]
                out = t if out is None else [a + c for a, c in zip(out, t)]
        if out is None:
            return [0] * self.ambient_dim
        return out

    def _tab(self, i, j):
        t = self._table[i][j]
        if t is None:
            t = self.reduce(self._mul_lift(self.basis_lifts[i], self.basis_lifts[j]))
            self._table[i][j] = t
            self._table[j][i] = t
        return t

    def zero(self):
        return (0,) * len(self.orders)

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def sub(self, x, y):
        return tuple((a - b) % n for a, b, n in zip(x, y, self.orders))

    def smul(self, c, x):
        return tuple((c * a) % n for a, n in zip(x, self.orders))

    def mul(self, x, y):
        k = len(self.orders)
        acc = [0] * k
        for i in range(k):
            xi = x[i]
            if xi:
                for j in range(k):
                    yj = y[j]
                    if yj:
                        t = self._tab(i, j)
                        c = xi * yj
                        for l in range(k):
                            acc[l] += c * t[l]
        return tuple(a % n for a, n in zip(acc, self.orders))

    def power(self, x, e: int):
        out = self.one
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base) if e > 1 else base
            e >>= 1
        return out

    def elements(self):
        return itertools.product(*(range(n) for n in self.orders))

    def _mul_matrix(self, x):
        """Rows: coordinates of x·b_j."""
        k = len(self.orders)
        unit_vecs = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
        return [list(self.mul(x, e)) for e in unit_vecs]

    def try_inverse(self, x):
        """y with x·y = 1, or None."""
        k = len(self.orders)
        if k == 0:
            return ()
        y = congruence_solve(self._mul_matrix(x), list(self.orders), list(self.one))
        if y is None:
            return None
        return tuple(a % n for a, n in zip(y, self.orders))

    def is_unit(self, x):
        return self.try_inverse(x) is not None

    def characteristic(self):
        c = 1
        for a, n in zip(self.one, self.orders):
            if a:
                c = math.lcm(c, n // math.gcd(a, n))
        return c


def quotient_ring(dim: int, sub: Lattice, mul_ambient, one_vec=None) -> FiniteRing:
    """Z^dim / sub with the given ambient bilinear multiplication.

    sub must have full rank (finite quotient); mul_ambient maps two
    integer coordinate vectors to their product vector.  one_vec defaults
    to the first ambient basis vector.
    """
    if sub.rank != dim:
        raise ValueError("quotient is infinite: sublattice is not full rank")
    if one_vec is None:
        one_vec = [1 if i == 0 else 0 for i in range(dim)]
    C = [list(r) for r in sub.rows]
    D, _, V = snf(C)
    Vinv = unimodular_inverse(V)
    diag = diagonal(D)
    keep = [j for j in range(dim) if diag[j] != 1]
    orders = [diag[j] for j in keep]
    basis = [list(Vinv[j]) for j in keep]
    Vcols = [[V[i][j] for i in range(dim)] for j in keep]  # kept columns of V

    def reduce_fn(x):
        return tuple(
            sum(x[i] * col[i] for i in range(dim)) % n
            for col, n in zip(Vcols, orders)
        )

    return FiniteRing(orders, basis, reduce_fn, mul_ambient, list(one_vec))


def subring_piece(R: FiniteRing, add_gens, one_elt) -> "FiniteRing":
    """The (non-unital-in-R) subring ε·R given additive generators and its
    identity ε; elements are re-coordinatized over an SNF basis."""
    k = len(R.orders)
    rows = [list(g) for g in add_gens] + [
        [R.orders[i] if j == i else 0 for j in range(k)] for i in range(k)
    ]
    L = Lattice.from_rows(k, rows)
    C = []
    for i in range(k):
        c = L.coordinates([R.orders[i] if j == i else 0 for j in range(k)])
        C.append(c)
    D, _, V = snf(C)
    Vinv = unimodular_inverse(V)
    diag = diagonal(D)
    Lrows = [list(r) for r in L.rows]
    new_basis = []
    orders = []
    for j in range(len(Lrows)):
        d = diag[j] if j < len(diag) else 0
        assert d != 0, "piece is not finite"
        if d == 1:
            continue
        vec = [sum(Vinv[j][i] * Lrows[i][c] for i in range(len(Lrows))) % R.orders[c]
               for c in range(k)]
        new_basis.append(tuple(vec))
        orders.append(d)

    solve_rows = [list(b) for b in new_basis] + [
        [R.orders[i] if j == i else 0 for j in range(k)] for i in range(k)
    ]

    def reduce_fn(lift):
        x = solve_over_lattice_rows(solve_rows, list(lift))
        assert x is not None, "element not in the piece"
        return tuple(c % n for c, n in zip(x[: len(orders)], orders))

    def mul_lift(a, b):
        return list(R.mul(tuple(v % n for v, n in zip(a, R.orders)),
                          tuple(v % n for v, n in zip(b, R.orders))))

    piece = FiniteRing(orders, [list(b) for b in new_basis], reduce_fn, mul_lift,
                       list(one_elt))
    piece.parent = R
    return piece


def piece_to_parent(piece: FiniteRing, R: FiniteRing, x):
    """Embed a piece element back into the parent's coordinates."""
    lift = piece.lift(x)
    return tuple(v % n for v, n in zip(lift, R.orders))


def piece_to_root(piece: FiniteRing, x):
    """Embed a (possibly nested) piece element into the outermost ring."""
    while piece.parent is not None:
        x = piece_to_parent(piece, piece.parent, x)
        piece = piece.parent
    return x


# --- unit groups -----------------------------------------------------------

@dataclass
class FiniteUnitGroup:
    ring: FiniteRing
    pres: FGAbelianPresentation  # gens are ring element tuples, all finite order
    dlog_table: dict | None
    strategy: str

    @property
    def size(self):
        return self.pres.torsion_order

    def exp(self, vec):
        out = self.ring.one
        for g, d, e in zip(self.pres.gens, self.pres.orders, vec):
            e = e % d if d else e
            if e:
                out = self.ring.mul(out, self.ring.power(g, e))
        return out

    def dlog(self, x):
        if self.dlog_table is not None:
            try:
                return self.dlog_table[x]
            except KeyError:
                raise NotInImage("element is not in the unit group") from None
        return self._dlog_bsgs(x)

    def _dlog_bsgs(self, x):
        """Meet-in-the-middle with a per-factor exponent split: every
        exponent e_i = a_i + m_i·b_i with m_i ≈ √d_i, so both tables have
        about √|group| entries regardless of the factor shapes."""
        R = self.ring
        orders = list(self.pres.orders)
        gens = self.pres.gens
        ms = [math.isqrt(d - 1) + 1 for d in orders]

        def walk(start, steps, counts):
            table = {start: []}
            for g, cnt in zip(steps, counts):
                ext = {}
                for e, vec in table.items():
                    acc = e
                    for j in range(1, cnt):
                        acc = R.mul(acc, g)
                        ext[acc] = vec + [j]
                table = {e: vec + [0] for e, vec in table.items()}
                table.update(ext)
            return table

        baby = walk(R.one, gens, ms)
        giant_steps = [R.power(g, d - m) for g, d, m in zip(gens, orders, ms)]
        giant_counts = [(d - 1) // m + 1 for d, m in zip(orders, ms)]
        giant = walk(x, giant_steps, giant_counts)
        for e, bvec in giant.items():
            hit = baby.get(e)
            if hit is not None:
                return [
                    (a + m * b) % d
                    for a, b, m, d in zip(hit, bvec, ms, orders)
                ]
        raise NotInImage("element is not in the unit group")


class _MulOpsRing:
    def __init__(self, ring):
        self.ring = ring

    def power(self, gens, exps):
        out = self.ring.one
        for g, e in zip(gens, exps):
            if e:
                d = _element_order(self.ring, g)
                out = self.ring.mul(out, self.ring.power(g, e % d))
        return out


def _element_order(R: FiniteRing, x):
    d = 1
    y = x
    while y != R.one:
        y = R.mul(y, x)
        d += 1
    return d


def _finite_group_structure(candidates, mul, one, bound):
    """(gens, relation lattice, exponent table) for the group generated by
    the candidates inside a finite abelian group (black-box mul)."""
    table = {one: []}
    gens = []
    rel_rows = []
    for x in candidates:
        if x in table:
            continue
        p = x
        t = 1
        while p not in table:
            p = mul(p, x)
            t += 1
            if t > bound:
                raise EnumerationBoundExceeded("relative order exceeds bound")
        expr = table[p]
        idx = len(gens)
        rel_rows = [row + [0] for row in rel_rows]
        rel_rows.append([-e for e in expr] + [0] * (idx - len(expr)) + [t])
        if len(table) * t > bound:
            raise EnumerationBoundExceeded("subgroup exceeds enumeration bound")
        ext = {}
        for h, vec in table.items():
            acc = h
            for j in range(1, t):
                acc = mul(acc, x)
                ext[acc] = vec + [0] * (idx - len(vec)) + [j]
        table = {h: vec + [0] * (idx + 1 - len(vec)) for h, vec in table.items()}
        table.update(ext)
        gens.append(x)
    return gens, Lattice.from_rows(len(gens), rel_rows), table


# above this size the local method beats plain enumeration comfortably
_AUTO_LOCAL_THRESHOLD = 3000


def unit_group(R: FiniteRing, cfg: Config = DEFAULT, strategy: str = "auto") -> FiniteUnitGroup:
    """Standard generating set of R^*."""
    if strategy == "auto":
        strategy = "A" if R.size <= _AUTO_LOCAL_THRESHOLD else "B"
    if strategy == "A":
        pres, table = _units_by_enumeration(R, cfg)
        return FiniteUnitGroup(R, pres, table, "A")
    if strategy == "B":
        pres, table = _units_by_local_method(R, cfg)
        return FiniteUnitGroup(R, pres, table, "B")
    raise ValueError(f"unknown strategy {strategy!r}")


def _units_by_enumeration(R: FiniteRing, cfg: Config):
    if R.size > cfg.enum_bound:
        raise EnumerationBoundExceeded(f"|R| = {R.size} exceeds the bound")
    units = [x for x in R.elements() if R.is_unit(x)]
    gens, rel, _ = _finite_group_structure(units, R.mul, R.one, cfg.enum_bound)
    pres = standard_gens(gens, rel, _MulOpsRing(R))
    table = _dlog_table(R, pres, cfg)
    return pres, table


# below this group size a full dlog table is built eagerly; otherwise
# discrete logs fall back to meet-in-the-middle
_DLOG_TABLE_LIMIT = 4096


def _dlog_table(R: FiniteRing, pres: FGAbelianPresentation, cfg: Config):
    size = pres.torsion_order
    if size > min(cfg.enum_bound, _DLOG_TABLE_LIMIT):
        return None
    table = {R.one: []}
    for g, d in zip(pres.gens, pres.orders):
        ext = {}
        for x, vec in table.items():
            acc = x
            for j in range(1, d):
                acc = R.mul(acc, g)
                ext[acc] = vec + [j]
        table = {x: vec + [0] for x, vec in table.items()}
        table.update(ext)
    return table


# --- strategy B: local decomposition --------------------------------------

def _units_by_local_method(R: FiniteRing, cfg: Config):
    if R.size == 1:
        pres = FGAbelianPresentation((), [], [])
        return pres, {R.one: []}
    pieces = _split_by_characteristic(R)
    local_pieces = []
    for piece in pieces:
        local_pieces.extend(_split_to_local(piece))
    gens = []
    orders_rows = []
    for piece in local_pieces:
        pgens, prel = _local_unit_gens(piece, cfg)
        comp = R.sub(R.one, piece_to_root(piece, piece.one))
        for g in pgens:
            gens.append(R.add(piece_to_root(piece, g), comp))
        orders_rows.append(prel)
    # combined relation lattice: block diagonal over the pieces
    total = len(gens)
    rows = []
    off = 0
    for prel in orders_rows:
        for row in prel.rows:
            rows.append([0] * off + list(row) + [0] * (total - off - len(row)))
        off += prel.ambient
    rel = Lattice.from_rows(total, rows)
    pres = standard_gens(gens, rel, _MulOpsRing(R))
    table = _dlog_table(R, pres, cfg)
    return pres, table


def _split_by_characteristic(R: FiniteRing):
    c = R.characteristic()
    fac = _factorize(c)
    if len(fac) == 1:
        return [R]
    out = []
    k = len(R.orders)
    unit_vecs = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    for p, a in fac:
        q = p**a
        rest = c // q
        # m ≡ 1 mod q, 0 mod rest
        inv = pow(rest, -1, q)
        m = rest * inv
        eps = R.smul(m, R.one)
        add_gens = [R.mul(eps, e) for e in unit_vecs]
        out.append(subring_piece(R, add_gens, eps))
    return out


def _fp_matrix_kernel(rows, p):
    """Left kernel over F_p: {x : Σ x_i rows[i] ≡ 0 mod p}."""
    from .cycunits import _fp_right_kernel

    if not rows:
        return []
    ncols = len(rows[0])
    nrows = len(rows)
    transposed = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    return _fp_right_kernel(transposed, nrows, p)


def _frobenius_matrix(S: FiniteRing, p: int, power: int = 1):
    """Rows: coordinates mod p of e_i^(p^power) for the additive basis."""
    k = len(S.orders)
    rows = []
    for i in range(k):
        e = tuple(1 if j == i else 0 for j in range(k))
        f = S.power(e, p**power)
        rows.append([x % p for x in f])
    return rows


def _split_to_local(S: FiniteRing):
    """Split a prime-power-characteristic piece into local pieces by
    lifting idempotents of the Frobenius-fixed subalgebra of S/pS."""
    if S.size == 1:
        return []
    p = _factorize(S.characteristic())[0][0]
    k = len(S.orders)
    frob = _frobenius_matrix(S, p)
    rows = [[(frob[i][j] - (1 if i == j else 0)) % p for j in range(k)]
            for i in range(k)]
    B = _fp_matrix_kernel(rows, p)
    if len(B) <= 1:
        return [S]
    one_modp = [x % p for x in S.one]
    cand = None
    for b in B:
        if not _fp_parallel(b, one_modp, p):
            cand = tuple(x % n for x, n in zip(b, S.orders))
            break
    if cand is None:
        return [S]
    # b satisfies b^p = b in S/pS: Π_{c in F_p} (b - c) ≡ 0; each nonzero
    # e_c = -Π_{c'≠c}(b - c') is idempotent mod p (Wilson: Π_{d≠0} d = -1)
    for c in range(p):
        v = S.one
        for cp in range(p):
            if cp == c:
                continue
            v = S.mul(v, S.sub(cand, S.smul(cp, S.one)))
        e = S.smul(-1, v)
        e = _hensel_idempotent(S, e, p)
        if e is not None and e != S.zero() and e != S.one:
            rest = S.sub(S.one, e)
            k = len(S.orders)
            unit_vecs = [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
            piece1 = subring_piece(S, [S.mul(e, u) for u in unit_vecs], e)
            piece2 = subring_piece(S, [S.mul(rest, u) for u in unit_vecs], rest)
            return _split_to_local(piece1) + _split_to_local(piece2)
    return [S]


def _fp_parallel(b, one, p):
    """Is b a scalar multiple of one mod p?"""
    for c in range(p):
        if all((x - c * y) % p == 0 for x, y in zip(b, one)):
            return True
    return False


def _hensel_idempotent(S: FiniteRing, e, p: int):
    """Lift e with e² ≡ e (mod p) to an exact idempotent of S."""
    for _ in range(64):
        sq = S.mul(e, e)
        if sq == e:
            return e
        e3 = S.mul(sq, e)
        e = S.sub(S.smul(3, sq), S.smul(2, e3))  # e <- 3e² - 2e³
    return None


def _local_unit_gens(T: FiniteRing, cfg: Config):
    """Generators and relation lattice of T^* for a local finite ring T:
    Teichmüller lift of a residue-field generator times principal units."""
    p = _factorize(T.characteristic())[0][0]
    k = len(T.orders)
    # nilradical of T/pT: kernel of a high Frobenius power
    L = 1
    while p**L < k + 1:
        L += 1
    frobL = _frobenius_matrix(T, p, L)
    nil = _fp_matrix_kernel(frobL, p)
    f = k - len(nil)  # residue field F_{p^f}
    # maximal ideal: lifts of the nilradical basis plus p * basis
    m_gens = [tuple(x % n for x, n in zip(v, T.orders)) for v in nil]
    m_gens += [T.smul(p, tuple(1 if j == i else 0 for j in range(k)))
               for i in range(k)]
    gens = []
    rel_rows = []
    qf = p**f
    if qf > 2:
        u0 = _teichmueller_generator(T, qf, cfg)
        gens.append(u0)
        rel_rows.append([qf - 1])
    # principal units 1 + m
    pu_candidates = [T.add(T.one, b) for b in m_gens if any(b)]
    m_elems = _additive_span(T, m_gens, cfg.enum_bound)
    all_pu = (T.add(T.one, b) for b in m_elems)
    pgens, prel, _ = _finite_group_structure(
        itertools.chain(pu_candidates, all_pu), T.mul, T.one, cfg.enum_bound
    )
    base = len(gens)
    total = base + len(pgens)
    rows = [row + [0] * (total - 1) for row in rel_rows]
    for row in prel.rows:
        rows.append([0] * base + list(row))
    gens.extend(pgens)
    return gens, Lattice.from_rows(total, rows)


def _additive_span(T: FiniteRing, gens, bound):
    """All elements of the additive subgroup generated by gens."""
    seen = {T.zero()}
    frontier = [T.zero()]
    for g in gens:
        if not any(g):
            continue
        new = []
        for x in list(seen):
            y = x
            while True:
                y = T.add(y, g)
                if y in seen:
                    break
                seen.add(y)
                new.append(y)
                if len(seen) > bound:
                    raise EnumerationBoundExceeded("ideal exceeds bound")
        frontier.extend(new)
    return seen


def _teichmueller_generator(T: FiniteRing, qf: int, cfg: Config):
    """An element of T^* of order exactly qf - 1 projecting to a generator
    of the residue field's multiplicative group."""
    lfacs = _prime_divisors(qf - 1)
    count = 0
    for x in T.elements():
        count += 1
        if count > cfg.enum_bound:
            break
        if not T.is_unit(x):
            continue
        y = x
        for _ in range(64):
            ynew = T.power(y, qf)
            if ynew == y:
                break
            y = ynew
        if y == T.one:
            continue
        if all(T.power(y, (qf - 1) // l) != T.one for l in lfacs):
            return y
    raise EnumerationBoundExceeded("no residue-field generator found")


def _factorize(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _prime_divisors(n: int):
    return [p for p, _ in _factorize(n)]
