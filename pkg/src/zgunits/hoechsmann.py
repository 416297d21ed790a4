"""Constructable units of ZG and their index in the full unit group.

For a cyclic subgroup C = <x> of order n and i, j coprime to n the
element s_l(x^i)·s_i(x^j) - k·s_n(x), with s_i(y) = 1 + y + ... + y^(i-1)
and l·i = 1 + k·n, is a unit of ZC.  Together with ±G these generate a
finite-index subgroup; its index is the quantity computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .abgroup import AbelianGroup, ayoub_rank, cyclic_subgroups
from .config import DEFAULT, Config
from .cyclotomic import CycElt, log_embedding
from .errors import BadParameters
from .groupring import (
    CompVec,
    GroupRingElement,
    compvec_of,
    power_product,
    primitive_idempotents,
)
from .intlinalg import solve_over_lattice_rows
from .merge import MergedUnitGroup, unit_group_zg
from .relations import MulOps, ToralAmbient, relation_lattice, standard_gens, subgroup_index


@dataclass(frozen=True)
class ConstructableUnit:
    generator: tuple      # group element generating the cyclic subgroup
    subgroup_order: int
    i: int
    j: int
    l: int
    k: int
    element: GroupRingElement


def _s(G, y, i):
    """s_i(y) = 1 + y + ... + y^(i-1) in ZG."""
    coeffs = [0] * G.order
    acc = G.identity()
    for _ in range(i):
        coeffs[G.element_index(acc)] += 1
        acc = G.mul(acc, y)
    return GroupRingElement(G, coeffs)


def constructable_units_cyclic(G: AbelianGroup, x, n: int):
    """All u_{i,j}(x) over 0 < i, j < n coprime to n, minimal positive l."""
    if n <= 2:
        raise BadParameters("cyclic subgroup must have order > 2")
    out = []
    for i in range(1, n):
        if math.gcd(i, n) != 1:
            continue
        l = pow(i, -1, n)
        k = (l * i - 1) // n
        for j in range(1, n):
            if math.gcd(j, n) != 1:
                continue
            xi = G.pow(x, i)
            xj = G.pow(x, j)
            u = _s(G, xi, l) * _s(G, xj, i) - _s(G, x, n) * GroupRingElement.from_rational(G, k)
            out.append(ConstructableUnit(x, n, i, j, l, k, u))
    return out


def constructable_generators(G: AbelianGroup):
    """±G generators plus all constructable units, as group ring elements."""
    gens = [-GroupRingElement.one(G)]
    for i in range(G.ngens):
        e = tuple(1 if j == i else 0 for j in range(G.ngens))
        gens.append(GroupRingElement.group_element(G, e))
    for n, x in cyclic_subgroups(G):
        if n > 2:
            for cu in constructable_units_cyclic(G, x, n):
                gens.append(cu.element)
    return gens


def _trivial_unit_set(G: AbelianGroup, maps):
    """CompVecs of all trivial units ±g of ZG."""
    out = set()
    for g in G.elements():
        e = compvec_of(maps, GroupRingElement.group_element(G, g))
        out.add(e)
        out.add(compvec_of(maps, -GroupRingElement.group_element(G, g)))
    return out


def _incremental_span(vecs, G, maps, cfg: Config):
    """Reduce a long generator list to a small one generating the same
    group.  A candidate is discarded only when it equals (verified by
    exact arithmetic) a word in the kept free generators times a trivial
    unit ±g; trivial units themselves are generated by the ±G generators
    that head the list.  False keeps are harmless: the certified relation
    lattice over the kept subset is computed afterwards."""
    conductors = [cm.conductor for cm in maps]
    amb = ToralAmbient(conductors)
    trivial = _trivial_unit_set(G, maps)
    kept_torsion = []
    free_kept = []
    free_logs = []
    with mpmath.workdps(60):
        for idx, v in enumerate(vecs):
            if idx < G.ngens + 1:
                kept_torsion.append(v)  # the ±G generators stay
                continue
            if v in trivial:
                continue
            row = []
            for c in v.comps:
                row.extend(log_embedding(c, 40).entries)
            if free_logs:
                sol = _lstsq(free_logs, row)
            else:
                sol = [] if max(abs(e) for e in row) < mpmath.mpf("1e-25") else None
            if sol is not None:
                alpha = [int(mpmath.nint(x)) for x in sol]
                if all(abs(x - a) <= mpmath.mpf("1e-12") for x, a in zip(sol, alpha)):
                    w = amb.power(free_kept, [-a for a in alpha],) * v \
                        if free_kept else v
                    if w in trivial:
                        continue
            free_kept.append(v)
            free_logs.append(row)
    return kept_torsion + free_kept


def _lstsq(rows, target):
    """Least-squares coefficients of target over rows (mpf); None when the
    residual is visibly nonzero."""
    k = len(rows)
    G = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(k)]
         for i in range(k)]
    rhs = [sum(a * b for a, b in zip(rows[i], target)) for i in range(k)]
    sol = _solve_sym(G, rhs)
    if sol is None:
        return None
    resid = [t - sum(sol[i] * rows[i][c] for i in range(k))
             for c, t in enumerate(target)]
    if max(abs(x) for x in resid) > mpmath.mpf("1e-15") * (1 + max(abs(x) for x in target)):
        return None
    return sol


def _solve_sym(G, rhs):
    n = len(G)
    M = [row[:] + [r] for row, r in zip(G, rhs)]
    for c in range(n):
        piv = max(range(c, n), key=lambda i: abs(M[i][c]))
        if abs(M[piv][c]) < mpmath.mpf("1e-30"):
            return None
        M[c], M[piv] = M[piv], M[c]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c] / M[c][c]
                for j in range(c, n + 1):
                    M[i][j] -= f * M[c][j]
    return [M[i][n] / M[i][i] for i in range(n)]


def constructable_group(G: AbelianGroup, cfg: Config = DEFAULT):
    """Standard generators of the group of constructable units."""
    maps = primitive_idempotents(G)
    conductors = [cm.conductor for cm in maps]
    vecs = [compvec_of(maps, u) for u in constructable_generators(G)]
    # cheap exact dedup first (the ±G head of the list is kept as is)
    head = G.ngens + 1
    seen = set()
    uniq = list(vecs[:head])
    for v in vecs[head:]:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    kept = _incremental_span(uniq, G, maps, cfg)
    amb = ToralAmbient(conductors)
    rel = relation_lattice(kept, amb, cfg)
    one = CompVec(CycElt.one(n) for n in conductors)
    return standard_gens(kept, rel, MulOps(one)), maps


def hoechsmann_index(G: AbelianGroup, cfg: Config = DEFAULT) -> int:
    """[ (ZG)^* : constructable units ]."""
    full, _report = unit_group_zg(G, cfg)
    cpres, maps = constructable_group(G, cfg)
    amb = ToralAmbient([cm.conductor for cm in maps])

    def rel_fn(elts):
        return relation_lattice(elts, amb, cfg)

    idx = subgroup_index(cpres.gens, full.pres, rel_fn)
    return idx
