"""Multiplicative relation lattices and finitely generated abelian group
utilities.

The relation lattice of units u_1..u_r is {α ∈ Z^r : Π u_i^{α_i} = 1}.
It is found numerically (LLL on log embeddings with scaled columns) and
then certified exactly: every candidate relation is verified by exact
product evaluation and a root-of-unity test, the verified kernel is
replaced by its pure closure, and completeness follows from the rank
count rank(kernel) + rank(log image) = r, where the log-image rank is
bounded below by interval Gaussian elimination.  The exact torsion
correction is a congruence kernel over the torsion orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from . import numint
from ._backend import lll_reduce
from .config import DEFAULT, Config
from .cyclotomic import (
    CycElt,
    field_inverse,
    log_embedding,
    torsion_dlog,
    torsion_order_bound,
)
from .errors import NotASubgroup, NotInImage, PrecisionExhausted
from .groupring import CompVec, component_tuple, power_product
from .intlinalg import (
    INFINITE,
    Lattice,
    congruence_kernel,
    congruence_solve,
    diagonal,
    hnf,
    identity,
    pure_closure,
    snf,
    solve_over_lattice_rows,
    unimodular_inverse,
    vec_mat,
    zero_lattice,
)


class CycAmbient:
    """Units of Z[ζ_n] as a multiplicative ambient."""

    def __init__(self, n: int):
        self.n = n
        self.torsion_moduli = [torsion_order_bound(n)]

    def power(self, gens, exps):
        return power_product(gens, exps, one=CycElt.one(self.n))

    def torsion_dlog(self, w):
        j = torsion_dlog(w)
        return None if j is None else [j]

    def log_rows(self, gens, prec):
        mids, rads = [], []
        for u in gens:
            lv = log_embedding(u, prec)
            mids.append(lv.entries)
            rads.append(lv.radii)
        return mids, rads


class ToralAmbient:
    """Units of an order in a toral algebra, carried as CompVec tuples.

    The relation lattice over all components is computed in one joint
    reduction over the stacked per-component log columns; this equals the
    intersection of the per-component relation lattices.
    """

    def __init__(self, conductors):
        self.conductors = list(conductors)
        self.torsion_moduli = [torsion_order_bound(n) for n in self.conductors]

    def power(self, gens, exps):
        one = CompVec(CycElt.one(n) for n in self.conductors)
        return power_product(gens, exps, one=one)

    def torsion_dlog(self, w: CompVec):
        out = []
        for c in w.comps:
            j = torsion_dlog(c)
            if j is None:
                return None
            out.append(j)
        return out

    def log_rows(self, gens, prec):
        mids, rads = [], []
        for v in gens:
            row_m, row_r = [], []
            for c in v.comps:
                lv = log_embedding(c, prec)
                row_m.extend(lv.entries)
                row_r.extend(lv.radii)
            mids.append(row_m)
            rads.append(row_r)
        return mids, rads


# accumulated wall-clock seconds spent in the relation engine (diagnostics)
RELATION_SECONDS = [0.0]


def relation_lattice(gens, amb, cfg: Config = DEFAULT) -> Lattice:
    """Exact relation lattice of the given generators in the ambient."""
    import time

    r = len(gens)
    if r == 0:
        return zero_lattice(0)
    t0 = time.perf_counter()
    try:
        prec = cfg.precision
        for _ in range(cfg.max_precision_doublings + 1):
            try:
                lat = _relation_attempt(gens, amb, prec)
            except numint.PrecisionTrouble:
                lat = None
            if lat is not None:
                return lat
            prec *= 2
        raise PrecisionExhausted(
            f"relation lattice not certified after reaching {prec // 2} digits"
        )
    finally:
        RELATION_SECONDS[0] += time.perf_counter() - t0


def _relation_attempt(gens, amb, prec):
    r = len(gens)
    mids, rads = amb.log_rows(gens, prec)
    ncols = len(mids[0])
    with mpmath.workdps(prec + 40):
        rows = []
        for i in range(r):
            row = [1 if j == i else 0 for j in range(r)]
            row += [numint.to_scaled_int(mids[i][j], prec) for j in range(ncols)]
            rows.append(row)
    red = lll_reduce(rows)
    thresh = 10 ** (prec // 2)
    cand = [row[:r] for row in red if max(abs(x) for x in row[r:]) <= thresh] \
        if ncols else [row[:r] for row in red]
    verified = []
    for alpha in cand:
        w = amb.power(gens, alpha)
        if amb.torsion_dlog(w) is None:
            return None  # numeric candidate failed exact check: raise precision
        verified.append(alpha)
    K = pure_closure(Lattice.from_rows(r, verified))
    dlogs = []
    for alpha in K.rows:
        w = amb.power(gens, alpha)
        t = amb.torsion_dlog(w)
        if t is None:
            return None
        dlogs.append(t)
    rho = numint.ball_rank_lower_bound(mids, rads)
    if rho + K.rank != r:
        return None  # completeness not certified at this precision
    if K.rank == 0:
        return zero_lattice(r)
    X = congruence_kernel([list(d) for d in dlogs], amb.torsion_moduli, rows=K.rank)
    final = [vec_mat(x, [list(row) for row in K.rows]) for x in X.rows]
    return Lattice.from_rows(r, final)


def relation_lattice_cyc(units, n: int, cfg: Config = DEFAULT) -> Lattice:
    """Relation lattice of units of Z[ζ_n]."""
    return relation_lattice(list(units), CycAmbient(n), cfg)


def relation_lattice_toral(units, maps, cfg: Config = DEFAULT) -> Lattice:
    """Relation lattice of units of ZG (or of εZG), componentwise."""
    vecs = []
    for u in units:
        vecs.append(u if isinstance(u, CompVec) else CompVec(component_tuple(maps, u)))
    amb = ToralAmbient([cm.conductor for cm in maps])
    return relation_lattice(vecs, amb, cfg)


# --- standard generating sets -------------------------------------------

@dataclass
class FGAbelianPresentation:
    """Standard generators: orders d1 | ... | ds followed by zeros for the
    infinite-order generators, with no other relations."""

    orders: tuple
    gens: list
    transform: list  # std gen j = Π original_i ^ transform[j][i]

    @property
    def num_torsion(self):
        return sum(1 for d in self.orders if d)

    @property
    def rank(self):
        return sum(1 for d in self.orders if d == 0)

    @property
    def torsion_order(self):
        out = 1
        for d in self.orders:
            if d:
                out *= d
        return out

    def relation_rows(self):
        """Relation lattice of the standard generators themselves."""
        rows = []
        for j, d in enumerate(self.orders):
            if d:
                rows.append([d if i == j else 0 for i in range(len(self.orders))])
        return rows


class MulOps:
    """Materialize words in multiplicative generators (CycElt / CompVec)."""

    def __init__(self, one):
        self.one = one

    def power(self, gens, exps):
        return power_product(gens, exps, one=self.one)


class VecOps:
    """Words in exponent-vector generators over a presentation with the
    given moduli (0 = infinite order)."""

    def __init__(self, moduli):
        self.moduli = list(moduli)

    def power(self, gens, exps):
        acc = [0] * len(self.moduli)
        for g, e in zip(gens, exps):
            for i, gi in enumerate(g):
                acc[i] += e * gi
        return tuple(
            a % m if m else a for a, m in zip(acc, self.moduli)
        )


def standard_gens(gens, relations: Lattice, ops) -> FGAbelianPresentation:
    """Standard generating set from a complete relation lattice (SNF).

    Each generator word is reduced modulo the relation lattice before it
    is materialized (this changes the word, not the group element, and
    keeps the exponents small).
    """
    from ._backend import lll_reduce
    from .intlinalg import reduce_vec_mod_lattice

    r = len(gens)
    if relations.ambient != r:
        raise ValueError("relation lattice ambient does not match generators")
    if relations.rank == 0:
        return FGAbelianPresentation((0,) * r, list(gens), identity(r))
    D, _, V = snf([list(row) for row in relations.rows])
    Vinv = unimodular_inverse(V)
    diag = diagonal(D)
    k = len(diag)
    # Torsion words may only be shifted by relation vectors (the element is
    # unchanged); free words may additionally be shifted by torsion words
    # (the element changes by a torsion element, which keeps the system
    # standard) and mixed unimodularly among themselves.
    torsion_rows, orders = [], []
    for j in range(k):
        if diag[j] == 1:
            continue
        torsion_rows.append(reduce_vec_mod_lattice(Vinv[j], relations))
        orders.append(diag[j])
    free_rows = [list(Vinv[j]) for j in range(k, r)]
    if free_rows:
        shift = Lattice.from_rows(
            r, [list(row) for row in relations.rows] + [list(t) for t in torsion_rows]
        )
        free_rows = [reduce_vec_mod_lattice(row, shift) for row in free_rows]
        if len(free_rows) > 1:
            free_rows = lll_reduce(free_rows)
            free_rows = [reduce_vec_mod_lattice(row, shift) for row in free_rows]
    rows = torsion_rows + free_rows
    new_gens = [ops.power(gens, row) for row in rows]
    orders = orders + [0] * len(free_rows)
    return FGAbelianPresentation(tuple(orders), new_gens, rows)


def subgroup_index(sub_gens, full_pres: FGAbelianPresentation, relation_fn):
    """[⟨full⟩ : ⟨sub⟩] via the relation lattice of the concatenated list.

    relation_fn(list) must return the exact relation lattice of a list of
    elements.  Raises NotASubgroup when containment fails.
    """
    full_gens = list(full_pres.gens)
    a, b = len(sub_gens), len(full_gens)
    if a == 0:
        idx = 1
        for d in full_pres.orders:
            idx = idx * d if d else INFINITE
        return idx if full_pres.rank == 0 else INFINITE
    lam = relation_fn(list(sub_gens) + full_gens)
    X = [list(row[:a]) for row in lam.rows]
    Y = [list(row[a:]) for row in lam.rows]
    expr_rows = []
    for i in range(a):
        e = [1 if j == i else 0 for j in range(a)]
        z = solve_over_lattice_rows(X, e)
        if z is None:
            raise NotASubgroup(f"generator {i} is not in the target group")
        y = [-sum(z[l] * Y[l][j] for l in range(len(Y))) for j in range(b)]
        expr_rows.append(y)
    rows = expr_rows + [
        [d if j == i else 0 for j in range(b)]
        for i, d in enumerate(full_pres.orders)
        if d
    ]
    Ls = Lattice.from_rows(b, rows)
    if Ls.rank < b:
        return INFINITE
    idx = 1
    for row in Ls.rows:
        p = next(x for x in row if x)
        idx *= p
    return idx


def hom_kernel_preimage(images, cod_orders, targets=()):
    """Kernel generators and preimages for a homomorphism between groups
    given by standard generators.

    images[i] is the exponent vector of the image of domain generator i
    over the codomain standard generators (orders cod_orders, 0 = free).
    Returns (kernel_rows, preimage_rows); raises NotInImage when a target
    has no preimage.  Both are size-reduced: any kernel basis generates,
    and preimages are adjusted by kernel vectors.
    """
    from .intlinalg import reduce_vec_mod_lattice, size_reduced_rows

    K = congruence_kernel([list(r) for r in images], list(cod_orders),
                          rows=len(images))
    pre = []
    for t in targets:
        x = congruence_solve([list(r) for r in images], list(cod_orders), list(t))
        if x is None:
            raise NotInImage(f"no preimage for {list(t)}")
        pre.append(reduce_vec_mod_lattice(x, K))
    return size_reduced_rows(K), pre


def word_relation_lattice(word_rows, moduli) -> Lattice:
    """Relation lattice of words w_i = Π g_j^{word_rows[i][j]} in a group
    presented by standard generators with the given moduli."""
    return congruence_kernel([list(r) for r in word_rows], list(moduli),
                             rows=len(word_rows))


# --- finite ambient groups (quotient rings) -------------------------------

def relation_lattice_finite(gens, mul, one, bound=10**6):
    """Relation lattice of generators of a finite abelian group given by a
    black-box multiplication, plus the element -> exponent-vector table.

    Incremental: for each new generator find its relative order t over the
    subgroup generated so far, record the relation, extend the table.
    """
    from .errors import EnumerationBoundExceeded

    table = {one: []}
    rel_rows = []
    for idx, g in enumerate(gens):
        p = g
        t = 1
        while p not in table:
            p = mul(p, g)
            t += 1
            if t > bound:
                raise EnumerationBoundExceeded("relative order exceeds bound")
        expr = table[p]
        rel_rows = [row + [0] for row in rel_rows]
        rel_rows.append([-e for e in expr] + [0] * (idx - len(expr)) + [t])
        if t > 1:
            ext = {}
            for h, vec in table.items():
                acc = h
                vec0 = vec + [0] * (idx - len(vec))
                for j in range(1, t):
                    acc = mul(acc, g)
                    ext[acc] = vec0 + [j]
            if len(table) * t > bound:
                raise EnumerationBoundExceeded("subgroup exceeds bound")
            table = {h: vec + [0] * (idx + 1 - len(vec)) for h, vec in table.items()}
            table.update(ext)
        else:
            table = {h: vec + [0] * (idx + 1 - len(vec)) for h, vec in table.items()}
    lat = Lattice.from_rows(len(gens), rel_rows)
    return lat, table
