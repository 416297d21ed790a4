"""Unit group of ZG by merging one simple component at a time.

The order ε(ZG) is carried in component coordinates: an element is the
tuple of its projections into the fields Q(ζ_d) (a CompVec), and the
lattice of ε(ZG) inside ⊕ Z[ζ_d] is spanned by the coordinate rows of
the elements ε·g.  Merging the unit groups U1 of ε1(ZG) and U2 of a new
primitive component e2(ZG) goes through the finite ring R ≅ e2O/(e2O∩O):
images H_i = φ_i(U_i), H = H1 ∩ H2, preimages M_i = φ_i^{-1}(H), and the
congruence lattice Λ of exponent pairs with matching images; the sums
a + b over a basis of Λ generate (ε1+e2)(ZG)^* and their complete
relation lattice follows exactly from the presentations of M1 and M2.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .abgroup import AbelianGroup, ayoub_rank
from .config import DEFAULT, Config
from .cyclotomic import CycElt
from .errors import UnsupportedConductor
from .cyclotomic import euler_phi
from .cycunits import MAX_PHI, full_unit_group
from .groupring import (
    CompVec,
    ComponentMap,
    compvec_to_group_ring,
    power_product,
    primitive_idempotents,
)
from .intlinalg import Lattice, congruence_kernel, congruence_solve, intersect, \
    solve_over_lattice_rows, vec_mat
from .quotring import FiniteRing, quotient_ring, unit_group
from .relations import (
    FGAbelianPresentation,
    MulOps,
    VecOps,
    hom_kernel_preimage,
    standard_gens,
    word_relation_lattice,
)


@dataclass
class MergedUnitGroup:
    """Unit group of ε(ZG) for ε the sum of the active component
    idempotents, with standard generators carried as CompVecs."""

    maps: list               # active ComponentMaps
    pres: FGAbelianPresentation

    @property
    def rank(self):
        return self.pres.rank

    @property
    def torsion_order(self):
        return self.pres.torsion_order

    def identity(self):
        return CompVec(CycElt.one(cm.conductor) for cm in self.maps)

    def generators(self):
        return list(self.pres.gens)


def lambda_from_congruences(mu, nu, orders) -> Lattice:
    """Solutions of Σ μ_ij α_i - Σ ν_kj β_k ≡ 0 mod orders[j] for all j,
    as a lattice in Z^(s+t)."""
    s = len(mu)
    t = len(nu)
    r = len(orders)
    rows = [list(row) for row in mu] + [[-x for x in row] for row in nu]
    if s + t == 0:
        from .intlinalg import zero_lattice

        return zero_lattice(0)
    return congruence_kernel(rows, list(orders), rows=s + t)


def _component_lattice_rows(G: AbelianGroup, maps):
    rows = []
    for g in G.elements():
        row = []
        for cm in maps:
            row.extend(cm.char_value(g).num)
        rows.append(row)
    return rows


def _initial_merged(cm: ComponentMap, cfg: Config) -> MergedUnitGroup:
    desc = full_unit_group(cm.conductor, cfg)
    gens = [CompVec([desc.torsion_gen])] + [CompVec([u]) for u in desc.free_gens]
    orders = (desc.torsion_order,) + (0,) * len(desc.free_gens)
    transform = [[1 if j == i else 0 for j in range(len(gens))] for i in range(len(gens))]
    return MergedUnitGroup([cm], FGAbelianPresentation(orders, gens, transform))


def merge_two(G: AbelianGroup, U1: MergedUnitGroup, cm2: ComponentMap,
              cfg: Config = DEFAULT, report: dict | None = None) -> MergedUnitGroup:
    """One merge step: combine U1 (for ε1) with the unit group of the
    primitive component cm2."""
    maps1 = list(U1.maps)
    maps = maps1 + [cm2]
    dims = [euler_phi(cm.conductor) for cm in maps]
    D1 = sum(dims[:-1])
    d = dims[-1]
    D = D1 + d
    n2 = cm2.conductor

    O = Lattice.from_rows(D, _component_lattice_rows(G, maps))
    block2 = Lattice.from_rows(
        D, [[1 if j == D1 + i else 0 for j in range(D)] for i in range(d)]
    )
    I2_full = intersect(block2, O)
    I2 = Lattice.from_rows(d, [list(r[D1:]) for r in I2_full.rows])

    def mul_ambient(a, b):
        x = CycElt(n2, list(a))
        y = CycElt(n2, list(b))
        z = x * y
        assert z.den == 1
        return list(z.num)

    R = quotient_ring(d, I2, mul_ambient, list(CycElt.one(n2).num))
    if report is not None:
        report.setdefault("ring_sizes", []).append(R.size)
    RU = unit_group(R, cfg)
    rho = len(RU.pres.gens)
    r_orders = list(RU.pres.orders)

    desc2 = full_unit_group(n2, cfg)
    gens2 = [desc2.torsion_gen] + list(desc2.free_gens)
    orders2 = [desc2.torsion_order] + [0] * len(desc2.free_gens)
    gens1 = U1.generators()
    orders1 = list(U1.pres.orders)
    s1, s2 = len(gens1), len(gens2)

    P = [list(row[:D1]) for row in O.rows]

    def phi1(v: CompVec):
        y = v.coords()
        c = solve_over_lattice_rows(P, y)
        assert c is not None, "element does not lie in the projected order"
        a_full = vec_mat(c, [list(row) for row in O.rows])
        return R.reduce(a_full[D1:])

    def phi2(u: CycElt):
        assert u.den == 1
        return R.reduce(list(u.num))

    if rho == 0:
        mwords1 = [[1 if j == i else 0 for j in range(s1)] for i in range(s1)]
        mwords2 = [[1 if j == i else 0 for j in range(s2)] for i in range(s2)]
        lam = lambda_from_congruences(
            [[] for _ in range(s1)], [[] for _ in range(s2)], []
        )
    else:
        A1 = [RU.dlog(phi1(v)) for v in gens1]
        A2 = [RU.dlog(phi2(u)) for u in gens2]
        L1 = Lattice.from_rows(
            rho, A1 + [[o if j == i else 0 for j in range(rho)]
                       for i, o in enumerate(r_orders)]
        )
        L2 = Lattice.from_rows(
            rho, A2 + [[o if j == i else 0 for j in range(rho)]
                       for i, o in enumerate(r_orders)]
        )
        Hraw = [list(r) for r in intersect(L1, L2).rows]
        Hrel = word_relation_lattice(Hraw, r_orders)
        Hpres = standard_gens(Hraw, Hrel, VecOps(r_orders))
        hgens = [list(h) for h in Hpres.gens]
        h_orders = list(Hpres.orders)

        k1, p1 = hom_kernel_preimage(A1, r_orders, targets=hgens)
        k2, p2 = hom_kernel_preimage(A2, r_orders, targets=hgens)
        mwords1 = _reduced_generating_words(k1 + p1, orders1)
        mwords2 = _reduced_generating_words(k2 + p2, orders2)

        mu = [_express_over(hgens, h_orders, r_orders,
                            _word_image(w, A1, r_orders)) for w in mwords1]
        nu = [_express_over(hgens, h_orders, r_orders,
                            _word_image(w, A2, r_orders)) for w in mwords2]
        lam = lambda_from_congruences(mu, nu, h_orders)

    one1 = CompVec(CycElt.one(cm.conductor) for cm in maps1)
    one2 = CycElt.one(n2)
    new_gens = []
    word_rows = []
    from .intlinalg import size_reduced_rows

    for row in size_reduced_rows(lam):
        alpha, beta = row[: len(mwords1)], row[len(mwords1):]
        w1 = _combine_words(alpha, mwords1, s1, orders1)
        w2 = _combine_words(beta, mwords2, s2, orders2)
        a = power_product(gens1, w1, one=one1)
        b = power_product(gens2, w2, one=one2)
        vec = CompVec(tuple(a.comps) + (b,))
        assert vec.coords() in O, "merged generator is not integral"
        new_gens.append(vec)
        word_rows.append(list(w1) + list(w2))
    rel = congruence_kernel(word_rows, orders1 + orders2, rows=len(word_rows))
    one = CompVec(tuple(one1.comps) + (one2,))
    pres = standard_gens(new_gens, rel, MulOps(one))
    return MergedUnitGroup(maps, pres)


def _reduced_generating_words(words, moduli):
    """A small generating set for the subgroup generated by the given
    words inside a group with standard presentation orders `moduli`.

    The word lattice is completed with the presentation relations (which
    map to the identity, so adjoining them does not change the subgroup)
    and an LLL-reduced basis is returned; this keeps the exponents of all
    later products small.
    """
    if not words:
        return []
    width = len(words[0])
    rel_rows = [
        [d if j == i else 0 for j in range(width)]
        for i, d in enumerate(moduli)
        if d
    ]
    from .intlinalg import size_reduced_rows

    lat = Lattice.from_rows(width, [list(w) for w in words] + rel_rows)
    return size_reduced_rows(lat)


def _word_image(word, A, moduli):
    """Image exponent vector of Π g_i^{word_i} over the codomain gens."""
    out = [0] * len(moduli)
    for c, row in zip(word, A):
        if c:
            for j in range(len(moduli)):
                out[j] += c * row[j]
    return [x % m if m else x for x, m in zip(out, moduli)]


def _express_over(hgens, h_orders, r_orders, target):
    """Exponents of target (over the ambient R^* gens) in the H gens."""
    if not hgens:
        return []
    x = congruence_solve(hgens, r_orders, target)
    assert x is not None, "image does not lie in H"
    return [xi % o if o else xi for xi, o in zip(x, h_orders)]


def _combine_words(coeffs, mwords, width, orders=None):
    acc = [0] * width
    for c, w in zip(coeffs, mwords):
        if c:
            for i, wi in enumerate(w):
                acc[i] += c * wi
    if orders is not None:
        acc = [a % o if o else a for a, o in zip(acc, orders)]
    return acc


def assemble(G: AbelianGroup, cfg: Config = DEFAULT, report: dict | None = None) -> MergedUnitGroup:
    """Fold the two-idempotent merge over all components of QG."""
    if euler_phi(G.exponent) >= MAX_PHI:
        raise UnsupportedConductor(
            f"φ(exp(G)) = {euler_phi(G.exponent)} ≥ {MAX_PHI}"
        )
    maps = primitive_idempotents(G)
    U = _initial_merged(maps[0], cfg)
    for cm in maps[1:]:
        t0 = time.perf_counter()
        U = merge_two(G, U, cm, cfg, report=report)
        if report is not None:
            report.setdefault("merge_seconds", []).append(time.perf_counter() - t0)
    return U


def unit_group_zg(G: AbelianGroup, cfg: Config = DEFAULT):
    """Generators of (ZG)^* with a certified rank, plus a diagnostic report."""
    from . import relations as _rel

    report: dict = {}
    t0 = time.perf_counter()
    rel_before = _rel.RELATION_SECONDS[0]
    U = assemble(G, cfg, report=report)
    expected = ayoub_rank(G)
    if U.rank != expected:
        raise AssertionError(
            f"computed rank {U.rank} does not match the rank formula {expected}"
        )
    report["rank"] = U.rank
    report["torsion_order"] = U.torsion_order
    report["total_s"] = time.perf_counter() - t0
    report["relations_s"] = _rel.RELATION_SECONDS[0] - rel_before
    return U, report


def merged_group_ring_generators(G: AbelianGroup, U: MergedUnitGroup):
    """Materialize the merged generators as elements of ZG (ε = 1 only)."""
    out = []
    for v in U.pres.gens:
        w = compvec_to_group_ring(U.maps, v)
        assert w.is_integral
        out.append(w)
    return out
