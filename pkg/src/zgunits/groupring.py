"""Arithmetic in QG/ZG for finite abelian G, primitive idempotents from
Galois orbits of characters, and the component isomorphisms
e_i(QG) ≅ Q(ζ_d), e_i(ZG) ≅ Z[ζ_d].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .abgroup import AbelianGroup, Character, characters, galois_orbits
from .cyclotomic import (
    CycElt,
    canonical_conductor,
    euler_phi,
    field_inverse,
    unit_inverse,
)
from .errors import ConductorMismatch, GroupMismatch, NotAUnit


def mobius(n: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


@lru_cache(maxsize=None)
def ramanujan_sum(d: int, k: int) -> int:
    """c_d(k) = Σ_{a in (Z/d)*} ζ_d^{ak}; also the trace of ζ_d^k."""
    g = math.gcd(k, d)
    m = d // g
    mu = mobius(m)
    if mu == 0:
        return 0
    return mu * (euler_phi(d) // euler_phi(m))


def cyc_trace(u: CycElt) -> Fraction:
    """Trace from Q(ζ_n) down to Q, via Tr(ζ^k) = c_n(k)."""
    s = sum(c * ramanujan_sum(u.n, k) for k, c in enumerate(u.num))
    return Fraction(s, u.den)


class GroupRingElement:
    """Element of QG: rational coefficients indexed by the group elements
    in lexicographic exponent order, stored as integer vector / denominator."""

    __slots__ = ("group", "num", "den")

    def __init__(self, group, num, den=1, _reduce=True):
        self.group = group
        if _reduce:
            if den < 0:
                den = -den
                num = [-c for c in num]
            g = den
            for c in num:
                if c:
                    g = math.gcd(g, c)
                    if g == 1:
                        break
            if g > 1:
                den //= g
                num = [c // g for c in num]
            num = tuple(num)
        self.num = num
        self.den = den

    @staticmethod
    def zero(G):
        return GroupRingElement(G, (0,) * G.order, 1, _reduce=False)

    @staticmethod
    def from_rational(G, p, q=1):
        v = [0] * G.order
        v[0] = p
        return GroupRingElement(G, v, q)

    @staticmethod
    def one(G):
        return GroupRingElement.from_rational(G, 1)

    @staticmethod
    def group_element(G, g):
        v = [0] * G.order
        v[G.element_index(g)] = 1
        return GroupRingElement(G, v, 1, _reduce=False)

    @staticmethod
    def from_fractions(G, fracs):
        fracs = [Fraction(f) for f in fracs]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return GroupRingElement(G, [int(f * den) for f in fracs], den)

    @property
    def is_integral(self):
        return self.den == 1

    def coefficients(self):
        return [Fraction(c, self.den) for c in self.num]

    def augmentation(self) -> Fraction:
        return Fraction(sum(self.num), self.den)

    def is_one(self):
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.group == other.group
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash((self.group, self.num, self.den))

    def __repr__(self):
        return f"GroupRingElement({self.group}, {list(self.num)}, {self.den})"

    def _check(self, other):
        if self.group != other.group:
            raise GroupMismatch("elements live in different group rings")

    def __add__(self, other):
        self._check(other)
        d = math.gcd(self.den, other.den)
        sa, sb = other.den // d, self.den // d
        return GroupRingElement(
            self.group,
            [sa * a + sb * b for a, b in zip(self.num, other.num)],
            self.den * sa,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GroupRingElement(self.group, tuple(-c for c in self.num), self.den, _reduce=False)

    def __mul__(self, other):
        self._check(other)
        table = _mul_index_table(self.group)
        out = [0] * self.group.order
        for i, a in enumerate(self.num):
            if a:
                row = table[i]
                for j, b in enumerate(other.num):
                    if b:
                        out[row[j]] += a * b
        return GroupRingElement(self.group, out, self.den * other.den)

    def __pow__(self, k: int):
        if k < 0:
            return inverse_in_zg(self) ** (-k)
        out = GroupRingElement.one(self.group)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out


@lru_cache(maxsize=None)
def _mul_index_table(G: AbelianGroup):
    els = G.elements()
    idx = {g: i for i, g in enumerate(els)}
    return [[idx[G.mul(a, b)] for b in els] for a in els]


@dataclass(frozen=True)
class ComponentMap:
    """One simple component of QG: a Galois orbit of characters, its
    primitive idempotent, the representative character and the conductor
    of the component field (canonicalized; the character order is kept
    separately because d ≡ 2 (mod 4) is rewritten to d/2)."""

    group: AbelianGroup
    char: Character
    order: int           # order of the character = unnormalized conductor
    conductor: int       # canonical conductor of the component field
    idempotent: GroupRingElement

    @property
    def degree(self):
        return euler_phi(self.conductor)

    def char_value(self, g) -> CycElt:
        """χ(g) as an element of the component field."""
        d = self.order
        k = self.char.value_exponent(g)  # χ(g) = ζ_m^k
        m = self.group.exponent
        return CycElt.zeta(d, k * d // m) if d > 1 else CycElt.from_rational(1, 1)


@lru_cache(maxsize=None)
def primitive_idempotents(G: AbelianGroup):
    """The primitive orthogonal idempotents of QG, one per Galois orbit of
    characters, sorted by (character order, representative exponents)."""
    chars = characters(G)
    orbits = galois_orbits(chars, G.exponent)
    out = []
    N = G.order
    els = G.elements()
    for orbit in orbits:
        rep = min((chars[i] for i in orbit), key=lambda c: c.image_exponents)
        d = rep.order
        m = G.exponent
        coeffs = []
        for g in els:
            k = rep.value_exponent(G.inv(g))  # χ(g^{-1}) = ζ_m^k
            coeffs.append(ramanujan_sum(d, k * d // m) if d > 1 else 1)
        e = GroupRingElement(G, coeffs, N)
        out.append(
            ComponentMap(
                group=G,
                char=rep,
                order=d,
                conductor=canonical_conductor(d),
                idempotent=e,
            )
        )
    out.sort(key=lambda cm: (cm.order, cm.char.image_exponents))
    return out


def decomposition(G: AbelianGroup):
    """Multiset of component conductors: [(d, t_d)] with Σ t_d φ(d) = |G|."""
    counts = {}
    for cm in primitive_idempotents(G):
        counts[cm.order] = counts.get(cm.order, 0) + 1
    return sorted(counts.items())


def component_project(cm: ComponentMap, a: GroupRingElement) -> CycElt:
    """χ(a) = Σ a_g χ(g) in the component field Q(ζ_d)."""
    if a.group != cm.group:
        raise GroupMismatch("element and component map disagree on the group")
    G = a.group
    d = cm.order
    m = G.exponent
    nc = cm.conductor
    phi = euler_phi(nc)
    if d <= 2:
        s = 0
        for g, c in zip(G.elements(), a.num):
            if c:
                k = cm.char.value_exponent(g)
                s += c if k == 0 else -c
        return CycElt(1, (s,), a.den)
    acc = [0] * phi
    den_extra = 1
    for g, c in zip(G.elements(), a.num):
        if c:
            z = _zeta_power_cached(d, cm.char.value_exponent(g) * d // m)
            if z.den != 1:  # cannot happen: roots of unity are integral
                den_extra *= z.den
            for i, zc in enumerate(z.num):
                if zc:
                    acc[i] += c * zc
    return CycElt(nc, acc, a.den * den_extra)


@lru_cache(maxsize=None)
def _zeta_power_cached(d: int, k: int) -> CycElt:
    return CycElt.zeta(d, k)


def component_tuple(maps, a: GroupRingElement):
    return tuple(component_project(cm, a) for cm in maps)


def component_lift(maps, comps) -> GroupRingElement:
    """The unique element of QG with the given component projections
    (Fourier inversion: a_g = (1/|G|) Σ_i Tr(comp_i · χ_i(g^{-1})))."""
    G = maps[0].group
    for cm, x in zip(maps, comps):
        if x.n != cm.conductor:
            raise ConductorMismatch(
                f"component expects conductor {cm.conductor}, got {x.n}"
            )
    N = G.order
    coeffs = []
    for g in G.elements():
        ginv = G.inv(g)
        s = Fraction(0)
        for cm, x in zip(maps, comps):
            s += cyc_trace(x * cm.char_value(ginv))
        coeffs.append(s / N)
    return GroupRingElement.from_fractions(G, coeffs)


def inverse_in_zg(u: GroupRingElement) -> GroupRingElement:
    """Inverse of a unit of ZG; NotAUnit when u is not a unit."""
    if not u.is_integral:
        raise NotAUnit("element is not integral")
    maps = primitive_idempotents(u.group)
    comps = []
    for cm in maps:
        x = component_project(cm, u)
        try:
            comps.append(unit_inverse(x))
        except (NotAUnit, ZeroDivisionError) as exc:
            raise NotAUnit("a component projection is not a unit") from exc
    v = component_lift(maps, comps)
    if not v.is_integral:
        raise NotAUnit("componentwise inverse does not lift integrally")
    return v


# --- component vectors ---------------------------------------------------
#
# During the unit-group assembly all elements are carried componentwise:
# a CompVec over a list of ComponentMaps is the tuple of projections.
# Multiplication is componentwise, which is much cheaper than group-ring
# convolution, and exactness is preserved by the Wedderburn isomorphism.

class CompVec:
    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = tuple(comps)

    def __mul__(self, other):
        return CompVec(a * b for a, b in zip(self.comps, other.comps))

    def inverse(self):
        return CompVec(field_inverse(c) for c in self.comps)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return CompVec(c ** k for c in self.comps)

    def is_one(self):
        return all(c.is_one() for c in self.comps)

    def __eq__(self, other):
        return isinstance(other, CompVec) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"CompVec({list(self.comps)})"

    def __len__(self):
        return len(self.comps)

    def coords(self):
        """Concatenated integer coordinate vector (requires integral parts)."""
        out = []
        for c in self.comps:
            assert c.den == 1
            out.extend(c.num)
        return out


def compvec_of(maps, a: GroupRingElement) -> CompVec:
    return CompVec(component_tuple(maps, a))


def compvec_to_group_ring(maps, v: CompVec) -> GroupRingElement:
    return component_lift(maps, list(v.comps))


def power_product(gens, exponents, one=None):
    """Π gens[i]^exponents[i] for CompVec/CycElt generators."""
    out = None
    for g, e in zip(gens, exponents):
        if e == 0:
            continue
        t = g ** e
        out = t if out is None else out * t
    if out is None:
        if one is not None:
            return one
        return gens[0] ** 0
    return out
