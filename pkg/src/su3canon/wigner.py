"""Exact SO(3) coupling coefficients: Clebsch-Gordan and unitary Racah U.

All values are evaluated from the closed-form factorial sums in exact
big-integer/rational arithmetic and converted to float at the very end, so
results are reproducible bit-for-bit and accurate to roundoff. Only integer
angular momenta are supported.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = ["clebsch_gordan", "racah_U", "six_j"]

_fact = lru_cache(maxsize=None)(math.factorial)


def _check_angmom(*js):
    for j in js:
        if not isinstance(j, int) or j < 0:
            raise ValueError(f"angular momentum must be a nonnegative integer, got {j!r}")


def _triangle_ok(a, b, c):
    return abs(a - b) <= c <= a + b


def _tri_fraction(a, b, c):
    # squared triangle coefficient Delta^2(abc)
    return Fraction(_fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c),
                    _fact(a + b + c + 1))


def _signed_sqrt(s, pref):
    """float of sign(s) * sqrt(s^2 * pref) for exact Fractions s, pref."""
    if s == 0:
        return 0.0
    val2 = s * s * pref
    return math.copysign(math.sqrt(float(val2)), s)


@lru_cache(maxsize=None)
def clebsch_gordan(j1, m1, j2, m2, J, M):
    """Condon-Shortley Clebsch-Gordan coefficient (j1 m1, j2 m2 | J M).

    Returns 0 when m1 + m2 != M or the triangle rule fails. Magnetic quantum
    numbers out of range raise ValueError.
    """
    _check_angmom(j1, j2, J)
    if abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        raise ValueError(f"magnetic quantum number out of range: "
                         f"({j1},{m1},{j2},{m2},{J},{M})")
    if m1 + m2 != M or not _triangle_ok(j1, j2, J):
        return 0.0
    pref = Fraction(2 * J + 1) * _tri_fraction(j1, j2, J)
    pref *= (_fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
             * _fact(J + M) * _fact(J - M))
    s = Fraction(0)
    kmin = max(0, -(J - j2 + m1), -(J - j1 - m2))
    kmax = min(j1 + j2 - J, j1 - m1, j2 + m2)
    for k in range(kmin, kmax + 1):
        s += Fraction((-1) ** k,
                      _fact(k) * _fact(j1 + j2 - J - k) * _fact(j1 - m1 - k)
                      * _fact(j2 + m2 - k) * _fact(J - j2 + m1 + k)
                      * _fact(J - j1 - m2 + k))
    return _signed_sqrt(s, pref)


@lru_cache(maxsize=None)
def _racah_W(a, b, c, d, e, f):
    # Racah W(abcd;ef) by the single-sum formula, exact arithmetic.
    for tri in ((a, b, e), (c, d, e), (a, c, f), (b, d, f)):
        if not _triangle_ok(*tri):
            return 0.0
    pref = (_tri_fraction(a, b, e) * _tri_fraction(c, d, e)
            * _tri_fraction(a, c, f) * _tri_fraction(b, d, f))
    a1, a2, a3, a4 = a + b + e, c + d + e, a + c + f, b + d + f
    b1, b2, b3 = a + b + c + d, a + d + e + f, b + c + e + f
    s = Fraction(0)
    for z in range(max(a1, a2, a3, a4), min(b1, b2, b3) + 1):
        s += Fraction((-1) ** (z + b1) * _fact(z + 1),
                      _fact(z - a1) * _fact(z - a2) * _fact(z - a3) * _fact(z - a4)
                      * _fact(b1 - z) * _fact(b2 - z) * _fact(b3 - z))
    return _signed_sqrt(s, pref)


def racah_U(a, b, c, d, e, f):
    """Unitary Racah coefficient U(abcd;ef) = sqrt((2e+1)(2f+1)) W(abcd;ef).

    Zero when any triangle condition fails.
    """
    _check_angmom(a, b, c, d, e, f)
    return math.sqrt((2 * e + 1) * (2 * f + 1)) * _racah_W(a, b, c, d, e, f)


def six_j(j1, j2, j3, j4, j5, j6):
    """6j symbol {j1 j2 j3; j4 j5 j6} (integer arguments)."""
    _check_angmom(j1, j2, j3, j4, j5, j6)
    return (-1) ** (j1 + j2 + j4 + j5) * _racah_W(j1, j2, j5, j4, j3, j6)
