"""Coupled-product construction of generic SU(3) irreps.

Starting from two multiplicity-free parents (lam1,0) and (lam2,0), the
SO(3)-coupled product basis is built per total-L block, the SO(3)-invariant
Q.Q is diagonalized to project out a target (lam,mu) irrep, and diagonalizing
Q(1).Q(2) within that subspace lifts the remaining degeneracy (the GTW
basis).  Everything is reduced: no magnetic quantum numbers appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from .irreps import (IrrepLabel, angular_momenta, casimir2, dimension,
                     k_values_at, so3_content, symmetric_irrep_rme)
from .tables import BasisChoice, ReducedMatrixTable
from .wigner import six_j

__all__ = [
    "CoupledState", "LBlock", "IrrepSubspace", "coupled_basis",
    "rme_q_single", "rme_q_total", "build_block", "decompose_product",
    "extract_irrep", "gtw_basis", "reduced_q_table", "default_parents",
    "DegenerateClusterError",
]


class DegenerateClusterError(RuntimeError):
    """Casimir eigenvalue clusters of two irreps collide at the tolerance."""


class CoupledState(NamedTuple):
    L1: int
    L2: int
    L: int


@dataclass
class LBlock:
    """Dense SO(3)-invariant matrices over the coupled states of one L."""
    L: int
    states: List[CoupledState]
    qq: np.ndarray      # Q.Q
    q1q2: np.ndarray    # Q(1).Q(2)
    l1l2: np.ndarray    # L1.L2


@dataclass
class IrrepSubspace:
    """Orthonormal columns spanning the target Casimir eigenspace per L."""
    lam1: int
    lam2: int
    irrep: IrrepLabel
    per_L: Dict[int, Tuple[List[CoupledState], np.ndarray]]


@lru_cache(maxsize=None)
def _sym_Ls(lam: int) -> tuple:
    return tuple(s.L for s in so3_content(IrrepLabel(lam, 0)))


@lru_cache(maxsize=None)
def coupled_basis(lam1: int, lam2: int, L: int) -> tuple:
    """All |(L1 L2) L> states, in ascending (L1, L2) order."""
    if lam1 < lam2:
        raise ValueError("parents must satisfy lam1 >= lam2")
    out = []
    for L1 in sorted(_sym_Ls(lam1)):
        for L2 in sorted(_sym_Ls(lam2)):
            if abs(L1 - L2) <= L <= L1 + L2:
                out.append(CoupledState(L1, L2, L))
    return tuple(out)


@lru_cache(maxsize=None)
def rme_q_single(side: int, bra: CoupledState, ket: CoupledState,
                 lam1: int, lam2: int) -> float:
    """Reduced element of the one-sided quadrupole between coupled states.

    Standard single-system recoupling; zero unless the spectator L is
    unchanged.  The phase/normalization is pinned by agreement with the
    un-reduced M-scheme matrices (see the oracle tests).
    """
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    if side == 1:
        if bra.L2 != ket.L2:
            return 0.0
        return ((-1) ** (bra.L1 + ket.L2 + ket.L + 2)
                * math.sqrt((2 * ket.L + 1) * (2 * bra.L + 1))
                * six_j(bra.L1, bra.L, ket.L2, ket.L, ket.L1, 2)
                * symmetric_irrep_rme(lam1, bra.L1, ket.L1))
    if bra.L1 != ket.L1:
        return 0.0
    return ((-1) ** (ket.L1 + ket.L2 + bra.L + 2)
            * math.sqrt((2 * ket.L + 1) * (2 * bra.L + 1))
            * six_j(bra.L2, bra.L, ket.L1, ket.L, ket.L2, 2)
            * symmetric_irrep_rme(lam2, bra.L2, ket.L2))


def rme_q_total(bra: CoupledState, ket: CoupledState, lam1: int, lam2: int) -> float:
    return (rme_q_single(1, bra, ket, lam1, lam2)
            + rme_q_single(2, bra, ket, lam1, lam2))


def _scalar_contract(lam1, lam2, L, rme_a, rme_b):
    """<f|(A.B)|i> over the L block: sum_L1 (-1)^(L-L1)/(2L+1) A_f,m B_m,i."""
    basis = coupled_basis(lam1, lam2, L)
    n = len(basis)
    out = np.zeros((n, n))
    for L1 in range(max(0, L - 2), L + 3):
        mid = coupled_basis(lam1, lam2, L1)
        if not mid:
            continue
        A = np.array([[rme_a(f, m) for m in mid] for f in basis])
        B = np.array([[rme_b(m, i) for i in basis] for m in mid])
        out += ((-1) ** (L - L1) / (2 * L + 1)) * (A @ B)
    return basis, out


def build_block(lam1: int, lam2: int, L: int) -> LBlock:
    """Q.Q, Q(1).Q(2) and L1.L2 matrices over the coupled states at L."""
    ra = lambda a, b: rme_q_single(1, a, b, lam1, lam2)
    rb = lambda a, b: rme_q_single(2, a, b, lam1, lam2)
    rt = lambda a, b: rme_q_total(a, b, lam1, lam2)
    basis, qq = _scalar_contract(lam1, lam2, L, rt, rt)
    _, q1q2 = _scalar_contract(lam1, lam2, L, ra, rb)
    l1l2 = np.diag([0.5 * (s.L * (s.L + 1) - s.L1 * (s.L1 + 1) - s.L2 * (s.L2 + 1))
                    for s in basis])
    return LBlock(L, list(basis), (qq + qq.T) / 2, (q1q2 + q1q2.T) / 2, l1l2)


def decompose_product(lam1: int, lam2: int) -> List[IrrepLabel]:
    """(lam1,0) x (lam2,0) = sum_k (lam1+lam2-2k, k), k = 0..lam2."""
    if lam1 < lam2:
        raise ValueError("parents must satisfy lam1 >= lam2")
    return [IrrepLabel(lam1 + lam2 - 2 * k, k) for k in range(lam2 + 1)]


def default_parents(irrep: IrrepLabel) -> Tuple[int, int]:
    """Smallest symmetric product containing the irrep exactly once."""
    return irrep.lam + irrep.mu, irrep.mu


def extract_irrep(lam1: int, lam2: int, target: IrrepLabel,
                  cluster_tol: float = 1e-6, max_L: int = None) -> IrrepSubspace:
    """Per-L eigenspaces of Q.Q at the target Casimir eigenvalue.

    Raises DegenerateClusterError when another irrep of the decomposition has
    a Casimir value within the cluster tolerance (cannot happen for these
    symmetric products, where distinct c2 values are integers well apart).
    """
    members = decompose_product(lam1, lam2)
    if target not in members:
        raise ValueError(f"{target} not contained in ({lam1},0) x ({lam2},0)")
    c2t = casimir2(target)
    for other in members:
        if other != target and abs(casimir2(other) - c2t) <= cluster_tol * max(c2t, 1.0):
            raise DegenerateClusterError(
                f"Casimir values of {target} and {other} collide at tol {cluster_tol}")
    per_L = {}
    for L in angular_momenta(target):
        if max_L is not None and L > max_L:
            continue
        block = build_block(lam1, lam2, L)
        ev, V = np.linalg.eigh(block.qq)
        want = c2t - 3 * L * (L + 1)
        tol = max(cluster_tol * max(abs(want), 1.0), 1e-8 * np.abs(ev).max())
        sel = np.abs(ev - want) < tol
        cols = V[:, sel]
        mult = len(k_values_at(target, L))
        if cols.shape[1] != mult:
            raise DegenerateClusterError(
                f"eigenspace of {target} at L={L} has dimension {cols.shape[1]}, "
                f"expected multiplicity {mult}")
        per_L[L] = (block.states, cols)
    return IrrepSubspace(lam1, lam2, target, per_L)


def _fix_column_signs(B: np.ndarray) -> np.ndarray:
    # deterministic sign rule: largest-magnitude component positive
    B = B.copy()
    for j in range(B.shape[1]):
        i = int(np.argmax(np.abs(B[:, j])))
        if B[i, j] < 0:
            B[:, j] *= -1
    return B


def gtw_basis(sub: IrrepSubspace) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """Eigenbasis of Q(1).Q(2) restricted to each L eigenspace.

    Returns {L: (eigenvalues ascending, columns in the coupled basis)}.
    """
    out = {}
    for L, (states, cols) in sub.per_L.items():
        block = build_block(sub.lam1, sub.lam2, L)
        R = cols.T @ block.q1q2 @ cols
        ev, W = np.linalg.eigh((R + R.T) / 2)
        out[L] = (ev, _fix_column_signs(cols @ W))
    return out


def reduced_q_table(sub: IrrepSubspace, basis: Dict[int, Tuple[np.ndarray, np.ndarray]],
                    tag: str = BasisChoice.RAW) -> ReducedMatrixTable:
    """Reduced-Q table of the target irrep over the given per-L columns."""
    lam1, lam2 = sub.lam1, sub.lam2
    Ls = sorted(basis)
    blocks = {}
    for Lf in Ls:
        Bf = basis[Lf][1]
        bf = sub.per_L[Lf][0]
        for Li in Ls:
            if abs(Lf - Li) > 2:
                continue
            Bi = basis[Li][1]
            bi = sub.per_L[Li][0]
            R = np.array([[rme_q_total(f, i, lam1, lam2) for i in bi] for f in bf])
            blocks[(Lf, Li)] = Bf.T @ R @ Bi
    return ReducedMatrixTable(sub.irrep, tag, blocks, labeled=False)
