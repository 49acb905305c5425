"""Closed-form model matrix elements: large-lambda asymptotics and the
rigid-rotor algebra, plus the rotor ratio and Z-bar diagnostics that single
out the canonical linear combination of SO(3) invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List

import numpy as np

from .irreps import IrrepLabel, KLState, angular_momenta, k_values_at, so3_content
from .tables import BasisChoice, ReducedMatrixTable
from .wigner import clebsch_gordan, racah_U

__all__ = [
    "RotorParams", "sigma", "asymptotic_rme", "rotor_rme", "rotor_qq2_rme",
    "rotor_ratio", "rotor_zbar_diag", "rotor_zbar_check", "asymptotic_table",
    "rotor_table", "ZBAR_COEFF",
]

# coefficient of the canonical combination Z = X4 - sqrt(8/7) q0 X3
ZBAR_COEFF = math.sqrt(8.0 / 7.0)


@dataclass(frozen=True)
class RotorParams:
    """Intrinsic quadrupole moments of the contracted rotor irrep."""
    qbar0: float
    qbar2: float

    @classmethod
    def of(cls, irrep: IrrepLabel) -> "RotorParams":
        return cls(float(2 * irrep.lam + irrep.mu + 3),
                   math.sqrt(1.5) * irrep.mu)


def _require_lam_ge_mu(irrep: IrrepLabel):
    if irrep.lam < irrep.mu:
        raise ValueError(f"model formulas require lambda >= mu, got {irrep}")


def sigma(irrep: IrrepLabel, Lp: int, L: int) -> float:
    """Staggering amplitude for K = 1 bands, 0.5 (mu+1) (-1)^(lam+L) x shape."""
    if abs(Lp - L) > 2:
        raise ValueError("sigma defined for |Lp - L| <= 2")
    base = 0.5 * (irrep.mu + 1) * (-1) ** (irrep.lam + L)
    if Lp == L:
        return base * (-3 * L * (L + 1) / (3 - L * (L + 1)))
    if Lp == L + 1:
        return base * (L + 1)
    if Lp == L - 1:
        return base * (-L)
    return base * (-1)


def asymptotic_rme(irrep: IrrepLabel, f: KLState, i: KLState) -> float:
    """Large-lambda closed form for <f||Q||i>, lambda >= mu.

    Covers dK = 0 with dL in {0, 1, 2} and dK = +2 with |dL| <= 2; transposes
    follow the symmetry rule, anything else is zero.
    """
    _require_lam_ge_mu(irrep)
    content = set(so3_content(irrep))
    if f not in content or i not in content:
        raise ValueError(f"states {f}, {i} outside {irrep}")
    Lam = 2 * irrep.lam + irrep.mu + 3
    if f.K == i.K:
        if f.L < i.L:
            return (-1) ** (i.L - f.L) * asymptotic_rme(irrep, i, f)
        K, L, Lp = i.K, i.L, f.L
        d = sigma(irrep, Lp, L) if K == 1 else 0.0
        pref = math.sqrt(2 * L + 1) * clebsch_gordan(L, K, 2, 0, Lp, K)
        if Lp == L:
            return pref * (Lam + d)
        if Lp == L + 1:
            return pref * math.sqrt(max((Lam - L - 1 + d) * (Lam + L + 1 + d), 0.0))
        if Lp == L + 2:
            return pref * math.sqrt(max((Lam - 2 * L - 3 + d) * (Lam + 2 * L + 3 + d), 0.0))
        return 0.0
    if f.K == i.K + 2:
        K, L = i.K, i.L
        if abs(f.L - L) > 2:
            return 0.0
        amp = math.sqrt(1.5 * (irrep.mu - K) * (irrep.mu + K + 2))
        return (math.sqrt((2 * L + 1) * (2.0 if K == 0 else 1.0))
                * clebsch_gordan(L, K, 2, 2, f.L, K + 2) * amp)
    if f.K == i.K - 2:
        return (-1) ** (i.L - f.L) * asymptotic_rme(irrep, i, f)
    return 0.0


def _rotor_rme(lam: int, mu: int, f: KLState, i: KLState) -> float:
    # closed form, no membership restriction (callers police the content)
    q = RotorParams.of(IrrepLabel(lam, mu))
    if f.K == i.K:
        if f.L < i.L:
            return (-1) ** (i.L - f.L) * _rotor_rme(lam, mu, i, f)
        K, L, Lp = i.K, i.L, f.L
        if Lp - L > 2:
            return 0.0
        val = math.sqrt(2 * L + 1) * clebsch_gordan(L, K, 2, 0, Lp, K) * q.qbar0
        if K == 1:
            val += (math.sqrt(2 * L + 1) * (-1) ** (lam + L + 1)
                    * clebsch_gordan(L, -1, 2, 2, Lp, 1) * q.qbar2)
        return val
    if f.K == i.K + 2:
        K, L = i.K, i.L
        if abs(f.L - L) > 2:
            return 0.0
        return (math.sqrt((2 * L + 1) * (2.0 if K == 0 else 1.0))
                * clebsch_gordan(L, K, 2, 2, f.L, K + 2) * q.qbar2)
    if f.K == i.K - 2:
        return (-1) ** (i.L - f.L) * _rotor_rme(lam, mu, i, f)
    return 0.0


def rotor_rme(irrep: IrrepLabel, f: KLState, i: KLState) -> float:
    """Rigid-rotor reduced element <f||Q||i> with the irrep's intrinsic moments."""
    content = set(so3_content(irrep))
    if f not in content or i not in content:
        raise ValueError(f"states {f}, {i} outside {irrep}")
    return _rotor_rme(irrep.lam, irrep.mu, f, i)


@lru_cache(maxsize=None)
def _rotor_band_states(lam: int, mu: int, Lmax: int) -> tuple:
    # rotor bands are infinite; extend the su(3) content upward in L so
    # intermediate sums are never truncated at a band edge
    out = []
    K = mu
    while K >= 0:
        if K == 0:
            out.extend(KLState(0, L) for L in range(lam % 2, Lmax + 1, 2))
        else:
            out.extend(KLState(K, L) for L in range(K, Lmax + 1))
        K -= 2
    return tuple(out)


def rotor_qq2_rme(irrep: IrrepLabel, f: KLState, i: KLState) -> float:
    """<f||[QxQ]_2||i> in the rotor model, summed over untruncated bands."""
    lam, mu = irrep.lam, irrep.mu
    acc = 0.0
    for m in _rotor_band_states(lam, mu, max(f.L, i.L) + 2):
        if abs(m.L - f.L) > 2 or abs(m.L - i.L) > 2:
            continue
        a = _rotor_rme(lam, mu, f, m)
        b = _rotor_rme(lam, mu, m, i)
        if a and b:
            acc += racah_U(f.L, 2, i.L, 2, m.L, 2) * a * b / math.sqrt(2 * m.L + 1)
    return acc


def rotor_ratio(irrep: IrrepLabel, K: int, L: int) -> float:
    """Ratio <K+2,L||[QxQ]_2||K,L> / <K+2,L||Q||K,L>; equals sqrt(8/7) qbar0."""
    content = set(so3_content(irrep))
    if KLState(K, L) not in content or KLState(K + 2, L) not in content:
        raise ValueError(f"(K,L)=({K},{L}) and ({K+2},{L}) must both lie in {irrep}")
    den = rotor_rme(irrep, KLState(K + 2, L), KLState(K, L))
    if abs(den) < 1e-14:
        raise ZeroDivisionError(f"vanishing <K+2,L||Q||K,L> at (K,L)=({K},{L})")
    return rotor_qq2_rme(irrep, KLState(K + 2, L), KLState(K, L)) / den


def rotor_zbar_diag(irrep: IrrepLabel, L: int) -> Dict[int, float]:
    """Per-K diagonal of Zbar = X4bar - sqrt(8/7) qbar0 X3bar at L (reduced form)."""
    q0 = RotorParams.of(irrep).qbar0
    out = {}
    for K in k_values_at(irrep, L):
        s = KLState(K, L)
        out[K] = rotor_qq2_rme(irrep, s, s) - ZBAR_COEFF * q0 * _rotor_rme(irrep.lam, irrep.mu, s, s)
    return out


@dataclass
class ZbarReport:
    irrep: IrrepLabel
    max_offdiag: float
    diag: Dict[int, Dict[int, float]]  # L -> {K: value}


def rotor_zbar_check(irrep: IrrepLabel) -> ZbarReport:
    """Verify the rotor Zbar matrix is diagonal in K at every multiplicity L."""
    q0 = RotorParams.of(irrep).qbar0
    worst = 0.0
    diag = {}
    for L in angular_momenta(irrep):
        Ks = k_values_at(irrep, L)
        diag[L] = rotor_zbar_diag(irrep, L)
        for Ka in Ks:
            for Kb in Ks:
                if Ka == Kb:
                    continue
                z = (rotor_qq2_rme(irrep, KLState(Kb, L), KLState(Ka, L))
                     - ZBAR_COEFF * q0 * _rotor_rme(irrep.lam, irrep.mu,
                                                    KLState(Kb, L), KLState(Ka, L)))
                worst = max(worst, abs(z))
    return ZbarReport(irrep, worst, diag)


def _model_table(irrep: IrrepLabel, rme, tag: str) -> ReducedMatrixTable:
    values = {}
    content = so3_content(irrep)
    for i in content:
        for f in content:
            if abs(f.L - i.L) > 2:
                continue
            if (f.L, f.K) < (i.L, i.K):
                continue
            values[(tuple(f), tuple(i))] = rme(irrep, f, i)
    return ReducedMatrixTable.from_entries(irrep, tag, values)


def asymptotic_table(irrep: IrrepLabel) -> ReducedMatrixTable:
    return _model_table(irrep, asymptotic_rme, BasisChoice.ASYMPTOTIC)


def rotor_table(irrep: IrrepLabel) -> ReducedMatrixTable:
    return _model_table(irrep, rotor_rme, BasisChoice.ROTOR)
