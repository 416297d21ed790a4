"""Exact arithmetic in Q(ζ_n) on the power basis modulo the n-th
cyclotomic polynomial, Galois action, complex log embeddings and
root-of-unity tests.

Conductors are canonical: n ≡ 2 (mod 4) never occurs, such inputs are
rewritten to conductor n/2 via ζ_{2m} = -ζ_m^{(m+1)/2} (m odd).
Coefficients are stored as an integer vector plus one positive
denominator, so the hot path (unit arithmetic) is pure integer work.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from ._backend import poly_mul, poly_rem
from .errors import ConductorMismatch, HalfPowerUndefined, NotAUnit, NotCoprime
from . import numint


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int):
    """Monic integer coefficient list of Φ_n, ascending powers."""
    if n == 1:
        return (-1, 1)
    # divide x^n - 1 by the product of Φ_d over proper divisors d of n
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_div_exact(a, b):
    """Exact quotient of integer polynomials, b monic."""
    a = list(a)
    db = len(b) - 1
    out = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            out[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert not any(a), "non-exact polynomial division"
    return out


def canonical_conductor(n: int) -> int:
    return n // 2 if n % 4 == 2 else n


@lru_cache(maxsize=None)
def _zeta_reduction(n_raw: int):
    """(n_canonical, exponent map) expressing ζ_{n_raw}^k in the canonical
    conductor: ζ_{2m} = -ζ_m^{(m+1)/2} for odd m gives (sign, exponent)."""
    n = canonical_conductor(n_raw)
    if n == n_raw:
        return n, None
    m = n
    e = (m + 1) // 2
    table = [(1 if k % 2 == 0 else -1, (k * e) % m) for k in range(n_raw)]
    return n, table


class CycElt:
    """Element of Q(ζ_n): integer coefficient vector of length φ(n) on the
    power basis, with a common positive denominator."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n, num, den=1, _reduce=True):
        self.n = n
        if _reduce:
            phi = euler_phi(n)
            if len(num) >= phi + 1:
                num = poly_rem(list(num), list(cyclotomic_polynomial(n)))
            else:
                num = list(num) + [0] * (phi - len(num))
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

    # --- constructors -------------------------------------------------
    @staticmethod
    def zero(n):
        n = canonical_conductor(n)
        return CycElt(n, (0,) * euler_phi(n), 1, _reduce=False)

    @staticmethod
    def one(n):
        return CycElt.from_rational(n, 1)

    @staticmethod
    def from_rational(n, p, q=1):
        n = canonical_conductor(n)
        v = [0] * euler_phi(n)
        v[0] = p
        return CycElt(n, v, q)

    @staticmethod
    def zeta(n, k=1):
        """ζ_n^k in the canonical conductor."""
        nc, table = _zeta_reduction(n)
        if table is None:
            v = [0] * n
            v[k % n] = 1
            return CycElt(n, v)
        sign, e = table[k % n]
        v = [0] * nc
        v[e] = sign
        return CycElt(nc, v)

    @staticmethod
    def from_fractions(n, fracs):
        n2 = canonical_conductor(n)
        if n2 != n:
            out = CycElt.zero(n2)
            for k, f in enumerate(fracs):
                f = Fraction(f)
                if f:
                    out = out + CycElt.zeta(n, k) * CycElt.from_rational(n2, f.numerator, f.denominator)
            return out
        den = 1
        fracs = [Fraction(f) for f in fracs]
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return CycElt(n, [int(f * den) for f in fracs], den)

    # --- basic structure ----------------------------------------------
    @property
    def phi(self):
        return len(self.num)

    @property
    def is_integral(self):
        return self.den == 1

    def coefficients(self):
        return [Fraction(c, self.den) for c in self.num]

    def is_zero(self):
        return not any(self.num)

    def is_one(self):
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self):
        return not any(self.num[1:])

    def __eq__(self, other):
        return (
            isinstance(other, CycElt)
            and self.n == other.n
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash((self.n, self.num, self.den))

    def __repr__(self):
        return f"CycElt({self.n}, {list(self.num)}, {self.den})"

    def _check(self, other):
        if self.n != other.n:
            raise ConductorMismatch(f"conductors {self.n} and {other.n}")

    # --- ring operations ------------------------------------------------
    def __add__(self, other):
        self._check(other)
        d = math.gcd(self.den, other.den)
        sa, sb = other.den // d, self.den // d
        return CycElt(
            self.n,
            [sa * a + sb * b for a, b in zip(self.num, other.num)],
            self.den * sa,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CycElt(self.n, tuple(-c for c in self.num), self.den, _reduce=False)

    def __mul__(self, other):
        self._check(other)
        return CycElt(
            self.n,
            poly_mul(list(self.num), list(other.num)),
            self.den * other.den,
        )

    def __pow__(self, k: int):
        if k < 0:
            return unit_inverse(self) ** (-k)
        out = CycElt.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scale(self, p, q=1):
        return self * CycElt.from_rational(self.n, p, q)


def galois_apply(a: int, u: CycElt) -> CycElt:
    """σ_a(u) for gcd(a, n) = 1, acting by ζ ↦ ζ^a."""
    n = u.n
    if math.gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) != 1")
    a %= n
    if a == 1 or n == 1:
        return u
    v = [0] * n
    for k, c in enumerate(u.num):
        if c:
            v[(a * k) % n] += c
    return CycElt(n, v, u.den)


def conjugate(u: CycElt) -> CycElt:
    return galois_apply(u.n - 1 if u.n > 1 else 1, u)


def field_inverse(u: CycElt) -> CycElt:
    """1/u in Q(ζ_n), by the extended Euclidean algorithm against Φ_n."""
    if u.is_zero():
        raise ZeroDivisionError("inverse of zero")
    if u.is_rational():
        return CycElt.from_rational(u.n, u.den, u.num[0])
    phi = list(cyclotomic_polynomial(u.n))
    a = [Fraction(c) for c in phi]
    b = [Fraction(c, u.den) for c in u.num]
    # invariants: s*a0 + t*b0 = r  (only t tracked; s never needed)
    t0, t1 = [Fraction(0)], [Fraction(1)]
    r0, r1 = a, b
    while True:
        while r1 and not r1[-1]:
            r1.pop()
        if len(r1) == 1:
            inv = [t / r1[0] for t in t1]
            return CycElt.from_fractions(u.n, inv)
        if not r1:
            raise ZeroDivisionError("element not invertible modulo Φ_n")
        q, r = _frac_poly_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _frac_poly_sub(t0, _frac_poly_mul(q, t1))


def _frac_poly_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i]:
            c = a[i] / lead
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    while a and not a[-1]:
        a.pop()
    return q, a


def _frac_poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    for j, y in enumerate(b):
        a[j] -= y
    return a


def unit_inverse(u: CycElt) -> CycElt:
    """Inverse of a unit of Z[ζ_n]; NotAUnit if u or 1/u is not integral."""
    if not u.is_integral:
        raise NotAUnit("element is not integral")
    v = field_inverse(u)
    if not v.is_integral:
        raise NotAUnit("inverse is not integral")
    return v


def is_unit(u: CycElt) -> bool:
    try:
        unit_inverse(u)
        return True
    except (NotAUnit, ZeroDivisionError):
        return False


def torsion_order_bound(n: int) -> int:
    """Order of the group of roots of unity in Q(ζ_n): lcm(2, n)."""
    return math.lcm(2, n)


def is_root_of_unity(u: CycElt):
    """(True, order) when u is a root of unity, else (False, None)."""
    if not u.is_integral:
        return False, None
    M = torsion_order_bound(u.n)
    if not (u ** M).is_one():
        return False, None
    order = M
    for p in _prime_divisors(M):
        while order % p == 0 and (u ** (order // p)).is_one():
            order //= p
    return True, order


def _prime_divisors(m: int):
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def torsion_generator(n: int) -> CycElt:
    """Canonical generator of the roots of unity: ζ_n (n even), -ζ_n (n odd)."""
    if n == 1:
        return CycElt.from_rational(1, -1)
    z = CycElt.zeta(n)
    return z if n % 2 == 0 else -z


@lru_cache(maxsize=None)
def _torsion_table(n: int):
    """element -> discrete log with respect to torsion_generator(n)."""
    tau = torsion_generator(n)
    M = torsion_order_bound(n)
    table = {}
    w = CycElt.one(n)
    for j in range(M):
        table[w] = j
        w = w * tau
    return table


def torsion_dlog(u: CycElt):
    """j with u = τ^j for the canonical torsion generator, or None."""
    return _torsion_table(u.n).get(u)


def zeta_half_power(n: int, knum: int, kden: int = 1) -> CycElt:
    """ζ_n^(knum/kden) for kden in {1, 2}; half powers need n odd, where
    ζ^(1/2) := ζ^((n+1)/2)."""
    if kden == 1:
        return CycElt.zeta(n, knum)
    if kden != 2:
        raise ValueError("denominator must be 1 or 2")
    if knum % 2 == 0:
        return CycElt.zeta(n, knum // 2)
    if n % 2 == 0:
        raise HalfPowerUndefined(f"ζ_{n}^({knum}/2) with even conductor")
    return CycElt.zeta(n, (knum * ((n + 1) // 2)) % n)


# --- embeddings ---------------------------------------------------------

def embedding_exponents(n: int):
    """One representative a per conjugate pair of embeddings ζ ↦ ζ^a."""
    if n == 1:
        return [0]  # the single real embedding, ζ_1 = 1
    return [a for a in range(1, n // 2 + 1) if math.gcd(a, n) == 1]


class LogVector:
    """log|σ(u)| per conjugate pair, with certified entry radii."""

    __slots__ = ("precision", "entries", "radii")

    def __init__(self, precision, entries, radii):
        self.precision = precision
        self.entries = entries
        self.radii = radii

    def __len__(self):
        return len(self.entries)


def log_embedding(u: CycElt, precision: int = 128) -> LogVector:
    """Certified log|σ(u)| for one embedding per conjugate pair."""
    if u.is_zero():
        raise ZeroDivisionError("log of zero")
    size = sum(abs(c) for c in u.num)
    guard = 20 + len(str(size))
    with mpmath.workdps(precision + guard):
        entries, radii = [], []
        logden = mpmath.log(u.den) if u.den != 1 else mpmath.mpf(0)
        for a in embedding_exponents(u.n):
            z = numint.root_of_unity_ball(u.n, a) if u.n > 1 else (mpmath.mpc(1), mpmath.mpf(0))
            val = numint.eval_poly_ball(u.num, z)
            mid, rad = numint.log_abs_ball(val)
            entries.append(mid - logden)
            radii.append(rad + numint._ulp(mid))
    return LogVector(precision, entries, radii)


def complex_embedding(u: CycElt, a: int, precision: int = 128):
    """σ_a(u) as a complex ball at the given working precision."""
    size = sum(abs(c) for c in u.num)
    guard = 20 + len(str(size))
    with mpmath.workdps(precision + guard):
        z = numint.root_of_unity_ball(u.n, a) if u.n > 1 else (mpmath.mpc(1), mpmath.mpf(0))
        mid, rad = numint.eval_poly_ball(u.num, z)
        return mid / u.den, rad / u.den


# --- text form ----------------------------------------------------------

def format_cyc(u: CycElt) -> str:
    """Text form [c0,c1,...]@n used by the command-line interface."""
    cs = []
    for c in u.num:
        if u.den == 1:
            cs.append(str(c))
        else:
            f = Fraction(c, u.den)
            cs.append(str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}")
    return "[" + ",".join(cs) + "]@" + str(u.n)


def parse_cyc(text: str) -> CycElt:
    from .errors import ParseError

    s = text.strip()
    if "@" not in s or not s.startswith("["):
        raise ParseError(f"bad element syntax: {text!r}")
    body, nstr = s.rsplit("@", 1)
    body = body.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"bad element syntax: {text!r}")
    try:
        n = int(nstr)
        inner = body[1:-1].strip()
        fracs = [Fraction(p.strip()) for p in inner.split(",")] if inner else []
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad element syntax: {text!r}") from exc
    if n < 1:
        raise ParseError(f"bad conductor in {text!r}")
    if not 1 <= len(fracs) <= n:
        raise ParseError(
            f"expected between 1 and {n} coefficients for conductor {n}, got {len(fracs)}"
        )
    return CycElt.from_fractions(n, fracs)
