"""SU(3) irrep labels, SO(3) branching content and bookkeeping.

Includes the analytic reduced quadrupole matrix elements of the
multiplicity-free (lambda,0) irreps, which seed the coupled-product
construction of generic irreps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple

from .wigner import clebsch_gordan

__all__ = [
    "IrrepLabel", "KLState", "so3_content", "dimension", "casimir2",
    "epsilon", "symmetric_irrep_rme",
]


@dataclass(frozen=True, order=True)
class IrrepLabel:
    """Highest-weight labels (lambda, mu) of an SU(3) irrep."""
    lam: int
    mu: int

    def __post_init__(self):
        if self.lam < 0 or self.mu < 0:
            raise ValueError(f"invalid irrep label ({self.lam},{self.mu})")

    @property
    def conjugate(self):
        return IrrepLabel(self.mu, self.lam)

    def __str__(self):
        return f"({self.lam},{self.mu})"


class KLState(NamedTuple):
    """Basis state label (K, L) within an irrep; M is never carried."""
    K: int
    L: int


@lru_cache(maxsize=None)
def so3_content(irrep: IrrepLabel) -> tuple:
    """All (K, L) labels of the irrep, sorted by (L, K).

    For K = 0 the band runs L = lambda, lambda-2, ..., 0 or 1; otherwise
    L = K, K+1, ..., lambda+K.  Labels of (lam, mu) with lam < mu are those
    of the conjugate (mu, lam): conjugation preserves the SO(3) content.
    """
    lam, mu = irrep.lam, irrep.mu
    if lam < mu:
        lam, mu = mu, lam
    out: List[KLState] = []
    K = mu
    while K >= 0:
        if K == 0:
            out.extend(KLState(0, L) for L in range(lam, -1, -2))
        else:
            out.extend(KLState(K, L) for L in range(K, lam + K + 1))
        K -= 2
    return tuple(sorted(out, key=lambda s: (s.L, s.K)))


def angular_momenta(irrep: IrrepLabel) -> list:
    """Distinct L values of the irrep, ascending."""
    return sorted({s.L for s in so3_content(irrep)})


def k_values_at(irrep: IrrepLabel, L: int) -> list:
    """Allowed K labels at angular momentum L, ascending (the multiplicity)."""
    return sorted(s.K for s in so3_content(irrep) if s.L == L)


def dimension(irrep: IrrepLabel) -> int:
    return (irrep.lam + 1) * (irrep.mu + 1) * (irrep.lam + irrep.mu + 2) // 2


def casimir2(irrep: IrrepLabel) -> float:
    """Eigenvalue of C2 = Q.Q + 3 L.L on the irrep.

    The overall constant 4 is validated against the (lambda,0) quadrupole
    sum rule by the oracle test suite.
    """
    lam, mu = irrep.lam, irrep.mu
    return float(4 * (lam * lam + mu * mu + lam * mu + 3 * lam + 3 * mu))


def epsilon(irrep: IrrepLabel) -> float:
    """Contraction scale: half the inverse square root of c2(irrep)/4."""
    lam, mu = irrep.lam, irrep.mu
    s = lam * lam + mu * mu + lam * mu + 3 * lam + 3 * mu
    if s == 0:
        raise ValueError("epsilon undefined for the trivial irrep (0,0)")
    return 0.5 / math.sqrt(s)


@lru_cache(maxsize=None)
def symmetric_irrep_rme(lam: int, Lf: int, Li: int) -> float:
    """Reduced quadrupole matrix element <Lf||Q||Li> in the irrep (lam, 0).

    Closed forms exist because (lam,0) is multiplicity free: the diagonal
    element is sqrt(2L+1) (L0,20|L0) (2 lam + 3), the L -> L+2 element is
    sqrt(2L+1) (L0,20|L+2,0) sqrt(4 (lam-L)(lam+L+3)).  L -> L-2 follows
    from the transpose symmetry <f||Q||i> = (-1)^(Li-Lf) <i||Q||f>.
    """
    allowed = {s.L for s in so3_content(IrrepLabel(lam, 0))}
    if Lf not in allowed or Li not in allowed:
        raise ValueError(f"L values ({Lf},{Li}) outside the ({lam},0) irrep")
    if Lf == Li:
        return math.sqrt(2 * Li + 1) * clebsch_gordan(Li, 0, 2, 0, Li, 0) * (2 * lam + 3)
    if Lf == Li + 2:
        return (math.sqrt(2 * Li + 1) * clebsch_gordan(Li, 0, 2, 0, Lf, 0)
                * math.sqrt(4 * (lam - Li) * (lam + Li + 3)))
    if Lf == Li - 2:
        return symmetric_irrep_rme(lam, Li, Lf)  # even dL: transpose sign is +1
    return 0.0
