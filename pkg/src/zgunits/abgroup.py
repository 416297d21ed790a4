"""Finite abelian groups, their cyclic subgroups, characters and the
classical rank formula for the free part of the unit group.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

from .errors import ParseError
from .intlinalg import diagonal, snf


def parse_group_spec(spec) -> "AbelianGroup":
    """Accepts "C2xC4", "c2 x c4", "[2,4]" or a list of cyclic orders."""
    if isinstance(spec, AbelianGroup):
        return spec
    if isinstance(spec, (list, tuple)):
        orders = list(spec)
    else:
        s = str(spec).strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise ParseError(f"unbalanced bracket in group spec: {spec!r}")
            body = s[1:-1].strip()
            parts = [p.strip() for p in body.split(",")] if body else []
            orders = []
            for p in parts:
                if not re.fullmatch(r"\d+", p):
                    raise ParseError(f"bad integer {p!r} in group spec: {spec!r}")
                orders.append(int(p))
        else:
            orders = []
            for p in re.split(r"[xX]", s):
                p = p.strip()
                m = re.fullmatch(r"[cC](\d+)", p)
                if not m:
                    raise ParseError(f"bad token {p!r} in group spec: {spec!r}")
                orders.append(int(m.group(1)))
    for d in orders:
        if d < 1:
            raise ParseError(f"cyclic orders must be >= 1 in {spec!r}")
    orders = [d for d in orders if d > 1]
    if not orders:
        return AbelianGroup(())
    # normalize to invariant factors: SNF of the diagonal relation matrix
    D, _, _ = snf([[orders[i] if i == j else 0 for j in range(len(orders))]
                   for i in range(len(orders))])
    inv = [d for d in diagonal(D) if d > 1]
    return AbelianGroup(tuple(inv))


@dataclass(frozen=True)
class AbelianGroup:
    """Invariant factor presentation d1 | d2 | ... | dk (empty = trivial)."""

    invariant_factors: tuple

    def __post_init__(self):
        fs = self.invariant_factors
        for i, d in enumerate(fs):
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if i and fs[i] % fs[i - 1]:
                raise ValueError("invariant factors must divide in sequence")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    def identity(self):
        return (0,) * self.ngens

    def elements(self):
        """All elements in lexicographic exponent order."""
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def element_index(self, g) -> int:
        idx = 0
        for gi, d in zip(g, self.invariant_factors):
            idx = idx * d + gi
        return idx

    def mul(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def inv(self, a):
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def pow(self, a, k: int):
        return tuple((x * k) % d for x, d in zip(a, self.invariant_factors))

    def element_order(self, a) -> int:
        o = 1
        for x, d in zip(a, self.invariant_factors):
            if x:
                o = math.lcm(o, d // math.gcd(x, d))
        return o

    def label(self) -> str:
        if not self.invariant_factors:
            return "C1"
        return "x".join(f"C{d}" for d in self.invariant_factors)

    def __str__(self):
        return self.label()


def cyclic_subgroups(G: AbelianGroup):
    """One (order, canonical generator) pair per cyclic subgroup of G.

    The canonical generator is the lexicographically smallest exponent
    vector among the generators of the subgroup.  Sorted by (order, gen).
    """
    seen = {}
    for g in G.elements():
        d = G.element_order(g)
        sub = frozenset(G.pow(g, k) for k in range(d))
        cur = seen.get(sub)
        if cur is None or g < cur[1]:
            seen[sub] = (d, g)
    return sorted(seen.values())


def subgroup_counts(G: AbelianGroup):
    """{d: number of cyclic subgroups of order d}."""
    counts = {}
    for d, _ in cyclic_subgroups(G):
        counts[d] = counts.get(d, 0) + 1
    return counts


@dataclass(frozen=True)
class Character:
    """Degree-1 character g ↦ ζ_m^(Σ e_i·g_i·(m/d_i) mod m)."""

    group: AbelianGroup
    image_exponents: tuple  # e_i mod d_i
    order: int = field(init=False)

    def __post_init__(self):
        o = 1
        for e, d in zip(self.image_exponents, self.group.invariant_factors):
            if e:
                o = math.lcm(o, d // math.gcd(e, d))
        object.__setattr__(self, "order", o)

    def value_exponent(self, g) -> int:
        """k with χ(g) = ζ_m^k, m the exponent of the group."""
        m = self.group.exponent
        k = 0
        for e, gi, d in zip(self.image_exponents, g, self.group.invariant_factors):
            k += e * gi * (m // d)
        return k % m

    def power(self, a: int) -> "Character":
        return Character(
            self.group,
            tuple((a * e) % d for e, d in
                  zip(self.image_exponents, self.group.invariant_factors)),
        )


def characters(G: AbelianGroup):
    """All |G| irreducible characters, lexicographic in image_exponents."""
    return [
        Character(G, exps)
        for exps in itertools.product(*(range(d) for d in G.invariant_factors))
    ]


def galois_orbits(chars, m: int):
    """Partition of character indices under χ ↦ χ^a, gcd(a, m) = 1."""
    index = {c.image_exponents: i for i, c in enumerate(chars)}
    units = [a for a in range(1, m + 1) if math.gcd(a, m) == 1]
    seen = [False] * len(chars)
    orbits = []
    for i, c in enumerate(chars):
        if seen[i]:
            continue
        orbit = sorted({index[c.power(a).image_exponents] for a in units})
        for j in orbit:
            seen[j] = True
        orbits.append(orbit)
    return orbits


def ayoub_rank(G: AbelianGroup) -> int:
    """Rank of the free part of the unit group of the integral group ring:
    (|G| + 1 + t2 - 2l) / 2 with t2 the number of elements of order 2 and
    l the number of cyclic subgroups.
    """
    t2 = sum(1 for g in G.elements() if G.element_order(g) == 2)
    l = len(cyclic_subgroups(G))
    num = G.order + 1 + t2 - 2 * l
    assert num % 2 == 0
    return num // 2


def abelian_groups_of_order(n: int):
    """All abelian groups of order n, as invariant-factor AbelianGroups."""

    def partitions(k):
        if k == 0:
            yield []
            return
        for first in range(k, 0, -1):
            for rest in partitions(k - first):
                if not rest or first >= rest[0]:
                    yield [first] + rest

    fact = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            fact[p] = fact.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        fact[m] = fact.get(m, 0) + 1

    per_prime = []
    for p, e in sorted(fact.items()):
        per_prime.append([[p**part for part in parts] for parts in partitions(e)])

    groups = []
    for combo in itertools.product(*per_prime) if per_prime else [()]:
        # zip prime-power chains (largest first) into invariant factors
        width = max((len(c) for c in combo), default=0)
        inv = []
        for i in range(width):
            f = 1
            for chain in combo:
                if i < len(chain):
                    f *= chain[i]
            inv.append(f)
        inv.reverse()
        groups.append(AbelianGroup(tuple(inv)))
    return sorted(groups, key=lambda g: g.invariant_factors)
