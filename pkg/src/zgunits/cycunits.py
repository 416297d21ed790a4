"""Explicit generators of Z[ζ_n]^*: circular units for prime-power
conductors, the twisted circular units for composite conductors, the
known index of the constructed subgroup, and p-saturation up to the full
unit group.

For every supported conductor (φ(n) < 66) the real class number is 1, so
the constructed subgroup has known index 1 (prime powers) respectively
2·i(n) (composite n, with i(n) the ramification-data product); after
saturating at the primes dividing that index the construction is
complete, and completeness is certified exactly by the accumulated
enlargement index together with the relation lattice of the final
generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .config import DEFAULT, Config
from .cyclotomic import (
    CycElt,
    canonical_conductor,
    complex_embedding,
    cyclotomic_polynomial,
    euler_phi,
    field_inverse,
    galois_apply,
    torsion_generator,
    torsion_order_bound,
    unit_inverse,
    zeta_half_power,
)
from .errors import (
    BadParameters,
    EnumerationBoundExceeded,
    PrecisionExhausted,
    UnsupportedConductor,
)
from ._backend import lll_reduce
from .intlinalg import Lattice, hnf, identity
from . import numint
from .relations import relation_lattice_cyc

MAX_PHI = 66  # unit groups are unconditional only below this degree


def factorize(n: int):
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


def prime_divisors(n: int):
    return [p for p, _ in factorize(n)]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond the sizes used here)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# --- explicit units -------------------------------------------------------

def prime_power_cyclotomic_unit(n: int, a: int) -> CycElt:
    """ζ^((1-a)/2)·(1-ζ^a)/(1-ζ) for prime-power conductor n, a real unit."""
    fac = factorize(n)
    if len(fac) != 1:
        raise BadParameters(f"{n} is not a prime power")
    p = fac[0][0]
    if not (1 < a < n / 2) or math.gcd(a, p) != 1:
        raise BadParameters(f"need 1 < a < {n}/2 with gcd(a, {p}) = 1")
    geom = CycElt(n, [1] * a)  # (1 - ζ^a)/(1 - ζ)
    return zeta_half_power(n, 1 - a, 2) * geom


@dataclass(frozen=True)
class FrobeniusLifts:
    """For each prime factor p_i of n, a lift to Z[(Z/n)*] of the norm
    element 1 + F + ... + F^(f-1) of the Frobenius F of p_i in the real
    subfield of conductor n/p_i^{e_i}.  Stored as multisets {a: mult}."""

    n: int
    prime_powers: tuple
    lifts: tuple  # tuple of tuple((a, mult), ...)

    def lift(self, i: int) -> dict:
        return dict(self.lifts[i])


def frobenius_lifts(n: int, variant: int = 0) -> FrobeniusLifts:
    fac = factorize(n)
    if len(fac) < 2:
        raise BadParameters(f"{n} is not composite with several prime factors")
    lifts = []
    for i, (p, e) in enumerate(fac):
        q = p**e
        mprime = n // q
        # order of the Frobenius in Gal(Q(ζ_m')+/Q): least f with p^f ≡ ±1
        f = 1
        pk = p % mprime
        while pk != 1 % mprime and pk != (-1) % mprime:
            pk = pk * p % mprime
            f += 1
        beta = {}
        for k in range(f):
            target = pow(p, k, mprime)
            if variant and k % 2 == 1:
                target = (-target) % mprime  # the other representative mod ±1
            resid_q = 1
            if variant:
                resid_q = next(u for u in range(2, q + 2) if math.gcd(u, q) == 1) \
                    if q > 2 else 1
            c = _crt(target, mprime, resid_q % q, q)
            beta[c] = beta.get(c, 0) + 1
        lifts.append(tuple(sorted(beta.items())))
    return FrobeniusLifts(n, tuple(fac), tuple(lifts))


def _crt(a1, m1, a2, m2):
    g, x, _ = _xgcd(m1, m2)
    assert g == 1
    return (a1 + (a2 - a1) * x % m2 * m1) % (m1 * m2)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _convolve(alpha: dict, beta: dict, n: int) -> dict:
    out = {}
    for a, ma in alpha.items():
        for b, mb in beta.items():
            c = a * b % n
            out[c] = out.get(c, 0) + ma * mb
    return out


def group_ring_power(x: CycElt, alpha: dict) -> CycElt:
    """x^α = Π σ_a(x)^{m_a} for α = Σ m_a σ_a with m_a ≥ 0."""
    out = CycElt.one(x.n)
    for a, m in sorted(alpha.items()):
        if m < 0:
            raise ValueError("negative multiplicities not supported")
        if m:
            out = out * galois_apply(a, x) ** m
    return out


def composite_cyclotomic_unit(n: int, a: int, lifts: FrobeniusLifts | None = None) -> CycElt:
    """The twisted circular unit ζ^{d_a}·σ_a(z(β))/z(β) for composite n.

    z(β) = Π_{I ⊊ S} (1 - ζ^{n_I})^{β(I)} over proper subsets of the set
    of prime factors, β multiplicative on disjoint unions, β(∅) = 1.
    """
    if n % 4 == 2:
        raise BadParameters("conductor must be canonical (n ≢ 2 mod 4)")
    fac = factorize(n)
    if len(fac) < 2:
        raise BadParameters(f"{n} is not composite with several prime factors")
    if not (1 < a < n / 2) or math.gcd(a, n) != 1:
        raise BadParameters(f"need 1 < a < {n}/2 coprime to {n}")
    if lifts is None:
        lifts = cached_frobenius_lifts(n)
    s = len(fac)
    betas = {(): {1: 1}}
    for r in range(1, s):
        for I in itertools.combinations(range(s), r):
            acc = {1: 1}
            for i in I:
                acc = _convolve(acc, lifts.lift(i), n)
            betas[I] = acc
    zbeta = CycElt.one(n)
    weight = 0
    for I, beta in betas.items():
        nI = math.prod(fac[i][0] ** fac[i][1] for i in I)
        zI = CycElt.one(n) - CycElt.zeta(n, nI)
        zbeta = zbeta * group_ring_power(zI, beta)
        weight -= nI * sum(aa * m for aa, m in beta.items())
    head = zeta_half_power(n, (1 - a) * weight, 2)
    xi = head * galois_apply(a, zbeta) * field_inverse(zbeta)
    if not xi.is_integral:
        raise ArithmeticError("constructed element is not integral")
    return xi


@lru_cache(maxsize=None)
def cached_frobenius_lifts(n: int) -> FrobeniusLifts:
    return frobenius_lifts(n)


# --- ramification in the real subfield ------------------------------------

@dataclass(frozen=True)
class RamData:
    p: int
    e: int  # ramification index in Q(ζ_n)+
    f: int  # inertia degree
    g: int  # number of primes above p


def ramification_data(n: int, p: int) -> RamData:
    """Splitting data of p in the real subfield of Q(ζ_n), n composite.

    In Q(ζ_n) the data is classical: e = φ(p^e_p), f = ord of p modulo
    n/p^e_p.  Descent to the real subfield divides f by 2 exactly when
    complex conjugation lies in the decomposition group, i.e. when
    -1 ∈ ⟨p⟩ modulo n/p^e_p (inertia is unaffected since n/p^e_p > 2).
    """
    if n % 4 == 2:
        raise BadParameters("conductor must be canonical (n ≢ 2 mod 4)")
    fac = factorize(n)
    if len(fac) < 2:
        raise BadParameters(f"{n} must have at least two prime factors")
    ep = dict(fac).get(p)
    if ep is None:
        raise BadParameters(f"{p} does not divide {n}")
    mprime = n // p**ep
    e = euler_phi(p**ep)
    f = 0
    pk = 1
    minus_seen = False
    while True:
        pk = pk * p % mprime
        f += 1
        if pk == mprime - 1:
            minus_seen = True
        if pk == 1:
            break
    f_plus = f // 2 if minus_seen else f
    g_plus = (euler_phi(n) // 2) // (e * f_plus)
    assert e * f_plus * g_plus == euler_phi(n) // 2
    return RamData(p, e, f_plus, g_plus)


def composite_unit_index(n: int) -> int:
    """Π e^(g-1)·f^(2g-1) over the primes dividing composite n: the index
    of the constructed circular-unit subgroup inside the real units."""
    fac = factorize(n)
    if len(fac) < 2:
        raise BadParameters(f"{n} is not composite with several prime factors")
    out = 1
    for p, _ in fac:
        rd = ramification_data(n, p)
        out *= rd.e ** (rd.g - 1) * rd.f ** (2 * rd.g - 1)
    return out


# --- the full unit group --------------------------------------------------

@dataclass
class UnitGroupDesc:
    """Torsion generator plus independent infinite-order generators."""

    conductor: int
    torsion_gen: CycElt
    torsion_order: int
    free_gens: list

    @property
    def rank(self):
        return len(self.free_gens)


def known_index_bound(n: int) -> int:
    """[Z[ζ_n]^* : constructed subgroup]: 1 for prime powers, 2·i(n) else
    (real class number is 1 throughout the supported range)."""
    if n <= 4 or len(factorize(n)) == 1:
        return 1
    return 2 * composite_unit_index(n)


_FULL_CACHE: dict = {}


def full_unit_group(n: int, cfg: Config = DEFAULT) -> UnitGroupDesc:
    """Complete description of Z[ζ_n]^* for φ(n) < 66."""
    n = canonical_conductor(n)
    if euler_phi(n) >= MAX_PHI:
        raise UnsupportedConductor(f"φ({n}) = {euler_phi(n)} ≥ {MAX_PHI}")
    key = (n, cfg.precision, cfg.max_precision_doublings, cfg.no_saturation, cfg.seed)
    hit = _FULL_CACHE.get(key)
    if hit is not None:
        return hit
    tau = torsion_generator(n)
    M = torsion_order_bound(n)
    fac = factorize(n)
    if n == 1 or euler_phi(n) == 1:
        desc = UnitGroupDesc(n, tau, M, [])
        _FULL_CACHE[key] = desc
        return desc
    coprime_as = [a for a in range(2, (n + 1) // 2) if math.gcd(a, n) == 1 and 2 * a != n]
    if len(fac) == 1:
        free = [prime_power_cyclotomic_unit(n, a) for a in coprime_as]
        target = 1
    else:
        lifts = cached_frobenius_lifts(n)
        free = [composite_cyclotomic_unit(n, a, lifts) for a in coprime_as]
        target = known_index_bound(n)
    desc = UnitGroupDesc(n, tau, M, free)
    if not cfg.no_saturation and target > 1:
        gained = 1
        for _round in range(64):
            if gained == target:
                break
            before = len(desc.free_gens)
            progressed = False
            for p in prime_divisors(target):
                while target % (gained * p) == 0:
                    desc2, adjoined = saturate_at_prime(desc, p, cfg)
                    if adjoined == 0:
                        break
                    desc = desc2
                    gained *= p**adjoined
                    progressed = True
            if not progressed:
                break
        if gained != target:
            raise PrecisionExhausted(
                f"saturation for conductor {n} reached index gain {gained}, "
                f"expected {target}"
            )
    _certify_description(desc, cfg)
    _FULL_CACHE[key] = desc
    return desc


def _certify_description(desc: UnitGroupDesc, cfg: Config):
    n = desc.conductor
    r = euler_phi(n) // 2 - 1 if n > 2 else 0
    if len(desc.free_gens) != r:
        raise PrecisionExhausted(
            f"conductor {n}: got {len(desc.free_gens)} generators, expected rank {r}"
        )
    for u in desc.free_gens:
        unit_inverse(u)  # raises NotAUnit if anything went wrong
    rel = relation_lattice_cyc([desc.torsion_gen] + list(desc.free_gens), n, cfg)
    expect = Lattice.from_rows(r + 1, [[desc.torsion_order] + [0] * r])
    if rel != expect:
        raise PrecisionExhausted(
            f"conductor {n}: generators are not independent modulo torsion"
        )


# --- p-saturation ----------------------------------------------------------

def saturate_at_prime(V: UnitGroupDesc, p: int, cfg: Config = DEFAULT,
                      max_primes: int = 60):
    """Enlarge V inside Z[ζ_n]^* until its index is prime to p (one pass:
    returns (V', number of adjoined p-th roots); call again for idempotence).

    Candidate p-th powers are cut down by characters into (O/q)^*/(p-th
    powers) for auxiliary split primes q ≡ 1 mod lcm(M, p); surviving
    candidates are verified exactly by reconstructing a p-th root from an
    embedding and checking root^p == w in exact arithmetic.
    """
    n = V.conductor
    r = len(V.free_gens)
    if r == 0:
        return V, 0
    gens = [V.torsion_gen] + list(V.free_gens)
    L = math.lcm(V.torsion_order, p)
    rows = []
    kernel = None
    stable = 0
    count = 0
    q = 1
    order = _aux_prime_order(cfg.seed)
    while count < max_primes:
        q = _next_aux_prime(q, L, order)
        count += 1
        rows.extend(_char_rows(q, gens, p, n))
        newk = _fp_right_kernel(rows, r + 1, p)
        if kernel is not None and newk == kernel:
            stable += 1
        else:
            stable = 0
        kernel = newk
        if not kernel:
            return V, 0
        if stable >= 5:
            break
    dim = len(kernel)
    nclasses = (p**dim - 1) // (p - 1)
    if nclasses > cfg.enum_bound:
        raise EnumerationBoundExceeded(
            f"{nclasses} candidate classes exceed the enumeration bound"
        )
    for coeffs in _projective_classes(dim, p):
        alpha = [sum(c * k[i] for c, k in zip(coeffs, kernel)) % p
                 for i in range(r + 1)]
        if not any(alpha[1:]):
            continue  # pure torsion candidates never yield new units
        w = gens[0] ** alpha[0]
        for u, e in zip(V.free_gens, alpha[1:]):
            if e:
                w = w * u**e
        v = _pth_root_exact(w, p, cfg)
        if v is not None:
            enlarged = _adjoin_root(V, v, alpha[1:], p)
            more, k = saturate_at_prime(enlarged, p, cfg, max_primes)
            return more, k + 1
    return V, 0


def _aux_prime_order(seed: int):
    if not seed:
        return None
    import random

    return random.Random(seed)


def _next_aux_prime(q, L, rng):
    """Next prime ≡ 1 (mod L) strictly above q."""
    k = q // L + 1
    if rng is not None:
        k += rng.randint(0, 4)
    while True:
        cand = k * L + 1
        if cand > q and is_prime(cand):
            return cand
        k += 1


def _char_rows(q, gens, p, n, max_roots=4):
    """Character rows into μ_p ⊂ F_q^* for the split prime q."""
    g0 = _primitive_root(q)
    omega = pow(g0, (q - 1) // p, q)
    dlog = {pow(omega, j, q): j for j in range(p)}
    root0 = pow(g0, (q - 1) // n, q) if n > 1 else 1
    rows = []
    exps = [a for a in range(1, n + 1) if math.gcd(a, n) == 1][:max_roots] if n > 1 else [1]
    for a in exps:
        root = pow(root0, a, q)
        row = []
        for u in gens:
            val = 0
            for c in reversed(u.num):
                val = (val * root + c) % q
            val = val * pow(u.den, q - 2, q) % q
            if val == 0:
                raise ArithmeticError("unit vanishes modulo auxiliary prime")
            row.append(dlog[pow(val, (q - 1) // p, q)])
        rows.append(row)
    return rows


def _primitive_root(q):
    fac = prime_divisors(q - 1)
    g = 2
    while True:
        if all(pow(g, (q - 1) // f, q) != 1 for f in fac):
            return g
        g += 1


def _fp_right_kernel(rows, ncols, p):
    """Basis of {x ∈ F_p^ncols : row·x ≡ 0 for all rows} (RREF-based)."""
    pivots = {}
    for row in rows:
        row = [x % p for x in row]
        for c, pr in pivots.items():
            if row[c]:
                f = row[c]
                row = [(x - f * y) % p for x, y in zip(row, pr)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is not None:
            inv = pow(row[lead], p - 2, p)
            row = [x * inv % p for x in row]
            for c, pr in pivots.items():
                if pr[lead]:
                    f = pr[lead]
                    pivots[c] = [(x - f * y) % p for x, y in zip(pr, row)]
            pivots[lead] = row
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [0] * ncols
        v[fc] = 1
        for c, pr in pivots.items():
            v[c] = (-pr[fc]) % p
        basis.append(v)
    return basis


def _projective_classes(dim, p):
    """Nonzero vectors of F_p^dim up to scalars (first nonzero coord = 1)."""
    for lead in range(dim):
        for tail in itertools.product(range(p), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


def _pth_root_exact(w: CycElt, p: int, cfg: Config):
    """Exact p-th root of w in Z[ζ_n], or None (certified at the final
    precision of the ladder, with one extra doubling as a double-check)."""
    n = w.n
    prec = cfg.precision
    for _ in range(cfg.max_precision_doublings + 1):
        size = sum(abs(c) for c in w.num)
        guard = 24 + len(str(size))
        with mpmath.workdps(prec + guard):
            y0, _rad = complex_embedding(w, 1, prec)
            base = y0 ** (mpmath.mpf(1) / p)
            for c in range(p):
                y = base * mpmath.expjpi(mpmath.mpf(2 * c) / p)
                coeffs = _reconstruct_from_embedding(y, n, prec)
                if coeffs is not None:
                    v = CycElt(n, coeffs)
                    if v**p == w:
                        return v
        prec *= 2
    return None


def _reconstruct_from_embedding(y, n, prec):
    """Integer coefficients b with Σ b_k ζ^k ≈ y at the first embedding,
    via an integer-relation lattice; None when no small relation exists."""
    phi = euler_phi(n)
    C = 10 ** (prec - 10)
    rows = []
    for k in range(phi):
        z = mpmath.expjpi(mpmath.mpf(2 * k) / n) if n > 1 else mpmath.mpc(1)
        row = [1 if j == k else 0 for j in range(phi)] + [0]
        row += [numint.to_scaled_int(mpmath.re(z), prec - 10),
                numint.to_scaled_int(mpmath.im(z), prec - 10)]
        rows.append(row)
    rows.append([0] * phi + [1,
                numint.to_scaled_int(mpmath.re(y), prec - 10),
                numint.to_scaled_int(mpmath.im(y), prec - 10)])
    red = lll_reduce(rows)
    thresh = 10 ** (prec // 2)
    for row in red:
        if abs(row[phi]) == 1 and abs(row[phi + 1]) <= thresh and abs(row[phi + 2]) <= thresh:
            sign = -row[phi]
            return [sign * x for x in row[:phi]]
    return None


def _adjoin_root(V: UnitGroupDesc, v: CycElt, alpha_free, p: int) -> UnitGroupDesc:
    """Replace the free generators by a basis of ⟨free gens, v⟩ mod torsion,
    using the exact relation v^p = τ^j · Π u^alpha_free."""
    r = len(V.free_gens)
    lattice_rows = [list(alpha_free)] + [[p if j == i else 0 for j in range(r)]
                                         for i in range(r)]
    H = [row for row in hnf(lattice_rows) if any(row)]
    assert len(H) == r
    new_gens = []
    for h in H:
        c = None
        for j in range(r):
            if alpha_free[j] % p:
                c = h[j] * pow(alpha_free[j], -1, p) % p
                break
        assert c is not None
        m = [(hj - c * aj) // p for hj, aj in zip(h, alpha_free)]
        assert all((hj - c * aj) % p == 0 for hj, aj in zip(h, alpha_free))
        g = v**c if c else CycElt.one(V.conductor)
        for u, e in zip(V.free_gens, m):
            if e > 0:
                g = g * u**e
            elif e < 0:
                g = g * unit_inverse(u) ** (-e)
        new_gens.append(g)
    return UnitGroupDesc(V.conductor, V.torsion_gen, V.torsion_order, new_gens)
