"""Certified floating-point helpers on top of mpmath.

Values are carried as (midpoint, radius) balls with conservative error
propagation; every numeric quantity that feeds a rounding or rank
decision comes with an explicit radius, and all final answers are
verified exactly elsewhere, so these bounds only need to be safe, not
tight.
"""

from __future__ import annotations

import mpmath
from mpmath import mpf

# global safety inflation for rounding errors of individual mpf operations
_EPS_SHIFT = 6  # assume each op is accurate to dps - _EPS_SHIFT digits


def ball_add(a, b):
    return (a[0] + b[0], a[1] + b[1] + _ulp(a[0] + b[0]))


def ball_mul(a, b):
    m = a[0] * b[0]
    r = abs(a[0]) * b[1] + abs(b[0]) * a[1] + a[1] * b[1] + _ulp(m)
    return (m, r)


def _ulp(x):
    return (abs(x) + mpf(1)) * mpf(10) ** (-mpmath.mp.dps + _EPS_SHIFT)


def cball_add(a, b):
    m = a[0] + b[0]
    return (m, a[1] + b[1] + _ulp(abs(m)))


def cball_mul(a, b):
    m = a[0] * b[0]
    r = abs(a[0]) * b[1] + abs(b[0]) * a[1] + a[1] * b[1] + _ulp(abs(m))
    return (m, r)


def root_of_unity_ball(n: int, a: int):
    """exp(2*pi*i*a/n) as a complex ball."""
    m = mpmath.expjpi(mpmath.mpf(2 * a) / n)
    return (m, _ulp(mpf(1)) * 4)


def eval_poly_ball(coeffs, z_ball):
    """Horner evaluation of an exact integer/rational polynomial at a ball."""
    acc = (mpmath.mpc(0), mpf(0))
    for c in reversed(coeffs):
        acc = cball_mul(acc, z_ball)
        acc = cball_add(acc, (mpmath.mpc(c), mpf(0)))
    return acc


class PrecisionTrouble(Exception):
    """Internal: the current working precision cannot separate a value from 0."""


def log_abs_ball(z_ball):
    """(log|z|, radius); raises PrecisionTrouble when the ball touches 0."""
    m, r = z_ball
    am = abs(m)
    if am <= 2 * r:
        raise PrecisionTrouble("value not separated from zero")
    mid = mpmath.log(am)
    rad = r / (am - r) + _ulp(mid)
    return (mid, rad)


def ball_rank_lower_bound(mids, rads):
    """Certified lower bound for the rank of a real matrix given entrywise
    error radii, by interval Gaussian elimination.  Pivots are only taken
    on entries whose interval excludes zero by a comfortable margin.
    """
    R = len(mids)
    C = len(mids[0]) if R else 0
    M = [[(mids[i][j], rads[i][j]) for j in range(C)] for i in range(R)]
    live_rows = list(range(R))
    live_cols = list(range(C))
    rank = 0
    while live_rows and live_cols:
        best = None
        best_score = None
        for i in live_rows:
            for j in live_cols:
                m, r = M[i][j]
                if abs(m) > 8 * r:
                    score = abs(m)
                    if best_score is None or score > best_score:
                        best, best_score = (i, j), score
        if best is None:
            break
        pi, pj = best
        pm, pr = M[pi][pj]
        for i in live_rows:
            if i == pi:
                continue
            em, er = M[i][pj]
            # factor f = e / p as a ball
            fm = em / pm
            fr = (abs(em) * pr + abs(pm) * er) / (abs(pm) * (abs(pm) - pr)) + _ulp(fm)
            for j in live_cols:
                if j == pj:
                    continue
                t = ball_mul((fm, fr), M[pi][j])
                M[i][j] = (M[i][j][0] - t[0], M[i][j][1] + t[1] + _ulp(M[i][j][0] - t[0]))
            M[i][pj] = (mpf(0), mpf(0))
        live_rows.remove(pi)
        live_cols.remove(pj)
        rank += 1
    return rank


def to_scaled_int(mid, prec: int) -> int:
    """round(mid * 10^prec) as an exact integer."""
    with mpmath.workdps(mpmath.mp.dps + 10):
        return int(mpmath.nint(mid * mpmath.mpf(10) ** prec))
