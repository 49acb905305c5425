"""Independent M-scheme cross-check of the reduced-element machinery.

Everything here is built the slow, explicit way: full magnetic substates,
dense operator matrices, commutators checked numerically, reduced elements
recovered by dividing out a single Clebsch-Gordan coefficient.  None of the
recoupling shortcuts of the main pipeline are used, so agreement between the
two is a genuine consistency test.  Sizes are capped; this module exists for
small irreps only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .irreps import IrrepLabel, casimir2, dimension, k_values_at, so3_content
from .models import ZBAR_COEFF, RotorParams
from .tables import BasisChoice, ReducedMatrixTable
from .wigner import clebsch_gordan
from .irreps import symmetric_irrep_rme

__all__ = [
    "MSchemeRep", "build_symmetric_mscheme", "build_product_mscheme",
    "algebra_residuals", "couple", "extract_rme_mscheme", "oracle_table",
    "x3_restriction", "x4_restriction",
]

_SYM_CAP = 12
_PRODUCT_CAP = 2_000


@dataclass
class MSchemeRep:
    """Dense su(3) generator matrices over explicit |L M> (or product) states."""
    states: List[tuple]
    Q: Dict[int, np.ndarray]     # nu -> matrix, nu in -2..2
    L: Dict[int, np.ndarray]     # k -> matrix, k in -1..1

    @property
    def size(self) -> int:
        return len(self.states)


def build_symmetric_mscheme(lam: int) -> MSchemeRep:
    """Explicit (lam,0) generator matrices over all |L M> states.

    Q acts by un-reducing the closed-form reduced elements,
    <L' M'|Q_nu|L M> = (L M, 2 nu|L' M') <L'||Q||L> / sqrt(2L'+1); the
    spherical L components come from <L||L||L> = sqrt(L(L+1)(2L+1)).
    """
    if lam > _SYM_CAP:
        raise ValueError(f"M-scheme oracle capped at lambda <= {_SYM_CAP}")
    Ls = sorted(s.L for s in so3_content(IrrepLabel(lam, 0)))
    states = [(L, M) for L in Ls for M in range(-L, L + 1)]
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    Q = {nu: np.zeros((n, n)) for nu in range(-2, 3)}
    Lop = {k: np.zeros((n, n)) for k in range(-1, 2)}
    for (L, M) in states:
        i = idx[(L, M)]
        for nu in range(-2, 3):
            for Lf in (L - 2, L, L + 2):
                if (Lf, M + nu) in idx:
                    Q[nu][idx[(Lf, M + nu)], i] = (
                        clebsch_gordan(L, M, 2, nu, Lf, M + nu)
                        * symmetric_irrep_rme(lam, Lf, L) / math.sqrt(2 * Lf + 1))
        for k in range(-1, 2):
            if (L, M + k) in idx:
                Lop[k][idx[(L, M + k)], i] = (
                    clebsch_gordan(L, M, 1, k, L, M + k) * math.sqrt(L * (L + 1)))
    return MSchemeRep(states, Q, Lop)


def build_product_mscheme(lam1: int, lam2: int) -> MSchemeRep:
    """Generators on the tensor product of two symmetric M-scheme reps."""
    r1 = build_symmetric_mscheme(lam1)
    r2 = build_symmetric_mscheme(lam2)
    if r1.size * r2.size > _PRODUCT_CAP:
        raise ValueError(f"product M-scheme dimension {r1.size * r2.size} "
                         f"exceeds cap {_PRODUCT_CAP}")
    I1, I2 = np.eye(r1.size), np.eye(r2.size)
    Q = {nu: np.kron(r1.Q[nu], I2) + np.kron(I1, r2.Q[nu]) for nu in range(-2, 3)}
    Lop = {k: np.kron(r1.L[k], I2) + np.kron(I1, r2.L[k]) for k in range(-1, 2)}
    states = [(a, b) for a in r1.states for b in r2.states]
    return MSchemeRep(states, Q, Lop)


def algebra_residuals(rep: MSchemeRep) -> Dict[str, float]:
    """Max deviation of [L,L], [L,Q], [Q,Q] from the su(3) structure constants."""
    com = lambda A, B: A @ B - B @ A
    ll = 0.0
    for k in (-1, 0, 1):
        for kp in (-1, 0, 1):
            rhs = np.zeros_like(rep.L[0])
            if abs(k + kp) <= 1:
                rhs = -math.sqrt(2) * clebsch_gordan(1, k, 1, kp, 1, k + kp) * rep.L[k + kp]
            ll = max(ll, float(np.abs(com(rep.L[k], rep.L[kp]) - rhs).max()))
    lq = 0.0
    for k in (-1, 0, 1):
        for nu in range(-2, 3):
            rhs = np.zeros_like(rep.Q[0])
            if abs(nu + k) <= 2:
                rhs = -math.sqrt(6) * clebsch_gordan(1, k, 2, nu, 2, nu + k) * rep.Q[nu + k]
            lq = max(lq, float(np.abs(com(rep.L[k], rep.Q[nu]) - rhs).max()))
    qq = 0.0
    for nu in range(-2, 3):
        for mu in range(-2, 3):
            rhs = np.zeros_like(rep.Q[0])
            if abs(mu + nu) <= 1:
                rhs = 3 * math.sqrt(10) * clebsch_gordan(2, nu, 2, mu, 1, mu + nu) * rep.L[mu + nu]
            qq = max(qq, float(np.abs(com(rep.Q[nu], rep.Q[mu]) - rhs).max()))
    return {"LL": ll, "LQ": lq, "QQ": qq}


def couple(A: Dict[int, np.ndarray], B: Dict[int, np.ndarray],
           ja: int, jb: int, J: int) -> Dict[int, np.ndarray]:
    """Spherical-tensor coupling [A x B]_J of two operator component sets."""
    shape = next(iter(A.values())).shape
    out = {}
    for M in range(-J, J + 1):
        acc = np.zeros(shape)
        for ma in range(-ja, ja + 1):
            mb = M - ma
            if abs(mb) > jb:
                continue
            c = clebsch_gordan(ja, ma, jb, mb, J, M)
            if c:
                acc = acc + c * (A[ma] @ B[mb])
        out[M] = acc
    return out


class _IrrepBasis:
    """Orthonormal |L M alpha> columns of one irrep inside a product rep.

    The top-M vectors at each L come from simultaneous L.L / Lz
    diagonalization; lower M are generated by the lowering operator so the
    relative phases across M are fixed by one consistent convention.
    """

    def __init__(self, rep: MSchemeRep, irrep: IrrepLabel, tol: float = 1e-6):
        self.rep = rep
        self.irrep = irrep
        QQ = sum(((-1) ** nu) * (rep.Q[nu] @ rep.Q[-nu]) for nu in range(-2, 3))
        LL = sum(((-1) ** k) * (rep.L[k] @ rep.L[-k]) for k in range(-1, 2))
        C2 = QQ + 3 * LL
        ev, V = np.linalg.eigh((C2 + C2.T) / 2)
        sel = np.abs(ev - casimir2(irrep)) < tol * max(casimir2(irrep), 1.0)
        P = V[:, sel]
        if P.shape[1] != dimension(irrep):
            raise RuntimeError(f"Casimir eigenspace dimension {P.shape[1]} != "
                               f"dim {irrep} = {dimension(irrep)}")
        L2r = P.T @ LL @ P
        ev2, W = np.linalg.eigh((L2r + L2r.T) / 2)
        self.at: Dict[Tuple[int, int], np.ndarray] = {}
        for L in sorted({s.L for s in so3_content(irrep)}):
            selL = np.abs(ev2 - L * (L + 1)) < tol
            cols = P @ W[:, selL]
            Lzr = cols.T @ rep.L[0] @ cols
            ev3, W3 = np.linalg.eigh((Lzr + Lzr.T) / 2)
            top = cols @ W3[:, np.abs(ev3 - L) < tol]
            mult = len(k_values_at(irrep, L))
            if top.shape[1] != mult:
                raise RuntimeError(f"multiplicity mismatch at L={L}")
            self.at[(L, L)] = top
            cur = top
            for M in range(L, -L, -1):
                # |L,M-1> = L_{-1}|L,M> / sqrt((L+M)(L-M+1)/2)
                cur = (rep.L[-1] @ cur) / math.sqrt((L + M) * (L - M + 1) / 2)
                self.at[(L, M - 1)] = cur


def extract_rme_mscheme(rep: MSchemeRep, irrep: IrrepLabel) -> Dict[Tuple[int, int], np.ndarray]:
    """Reduced Q blocks of one irrep, recovered by dividing out a single CG.

    The multiplicity basis is whatever the eigensolver produced (phase-locked
    across M by the lowering construction) — compare basis-independent
    quantities only, or match eigenvectors explicitly.
    """
    basis = _IrrepBasis(rep, irrep)
    Ls = sorted({s.L for s in so3_content(irrep)})
    blocks = {}
    for Lf in Ls:
        for Li in Ls:
            if abs(Lf - Li) > 2:
                continue
            blocks[(Lf, Li)] = _rme_block(rep, basis, Lf, Li)
    return blocks


def _rme_block(rep: MSchemeRep, basis: _IrrepBasis, Lf: int, Li: int) -> np.ndarray:
    nf = basis.at[(Lf, Lf)].shape[1]
    ni = basis.at[(Li, Li)].shape[1]
    if not (abs(Lf - Li) <= 2 <= Lf + Li):
        return np.zeros((nf, ni))  # triangle (Li, 2, Lf) fails: block vanishes
    for M in range(Li, -Li - 1, -1):
        for nu in range(-2, 3):
            Mf = M + nu
            if abs(Mf) > Lf:
                continue
            c = clebsch_gordan(Li, M, 2, nu, Lf, Mf)
            if abs(c) > 0.1:
                raw = basis.at[(Lf, Mf)].T @ rep.Q[nu] @ basis.at[(Li, M)]
                return raw * math.sqrt(2 * Lf + 1) / c
    raise RuntimeError(f"no usable CG witness for (Lf, Li) = ({Lf}, {Li})")


def oracle_table(irrep: IrrepLabel, parents: Tuple[int, int]) -> ReducedMatrixTable:
    """Unlabeled reduced-Q table extracted entirely from the M-scheme."""
    rep = build_product_mscheme(*parents)
    blocks = extract_rme_mscheme(rep, irrep)
    return ReducedMatrixTable(irrep, BasisChoice.RAW, blocks, labeled=False)


def _invariant_restriction(rep: MSchemeRep, irrep: IrrepLabel, full: np.ndarray,
                           L: int) -> np.ndarray:
    B = _IrrepBasis(rep, irrep).at[(L, L)]
    return B.T @ full @ B


def x3_restriction(rep: MSchemeRep, irrep: IrrepLabel, L: int) -> np.ndarray:
    """((L x Q)_1 x L)_0 on the |L, M=L> multiplicity space of the irrep."""
    X3 = couple(couple(rep.L, rep.Q, 1, 2, 1), rep.L, 1, 1, 0)[0]
    return _invariant_restriction(rep, irrep, X3, L)


def x4_restriction(rep: MSchemeRep, irrep: IrrepLabel, L: int) -> np.ndarray:
    """((L x [QxQ]_2)_1 x L)_0 on the |L, M=L> multiplicity space."""
    QQ2 = couple(rep.Q, rep.Q, 2, 2, 2)
    X4 = couple(couple(rep.L, QQ2, 1, 2, 1), rep.L, 1, 1, 0)[0]
    return _invariant_restriction(rep, irrep, X4, L)
