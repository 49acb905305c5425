import math

import numpy as np
import pytest

from su3canon import BasisChoice, IrrepLabel, build_table
from su3canon.irreps import casimir2, dimension
from su3canon.kbasis import alt3_basis, qq2_blocks
from su3canon.models import ZBAR_COEFF, RotorParams
from su3canon.oracle import (algebra_residuals, build_product_mscheme,
                             build_symmetric_mscheme, couple,
                             extract_rme_mscheme, oracle_table,
                             x3_restriction, x4_restriction)


@pytest.mark.parametrize("lam", [2, 4])
def test_symmetric_commutators(lam):
    res = algebra_residuals(build_symmetric_mscheme(lam))
    assert max(res.values()) < 1e-10


def test_product_commutators():
    res = algebra_residuals(build_product_mscheme(2, 2))
    assert max(res.values()) < 1e-10


def test_perturbed_generators_fail_commutators():
    # deliberate fault injection: flipping one quadrupole component's sign
    # must break the [Q, Q] structure constants
    rep = build_symmetric_mscheme(2)
    rep.Q[2] = -rep.Q[2]
    res = algebra_residuals(rep)
    assert res["QQ"] > 1.0


@pytest.mark.parametrize("lam", [2, 3, 4])
def test_casimir_sum_rule(lam):
    rep = build_symmetric_mscheme(lam)
    QQ = sum(((-1) ** nu) * (rep.Q[nu] @ rep.Q[-nu]) for nu in range(-2, 3))
    LL = sum(((-1) ** k) * (rep.L[k] @ rep.L[-k]) for k in range(-1, 2))
    C2 = QQ + 3 * LL
    assert np.allclose(np.diag(C2), 4 * lam * (lam + 3), atol=1e-9)
    assert np.abs(C2 - np.diag(np.diag(C2))).max() < 1e-9


def test_size_caps():
    with pytest.raises(ValueError):
        build_symmetric_mscheme(40)
    with pytest.raises(ValueError):
        build_product_mscheme(12, 12)


def test_oracle_blocks_transpose_symmetry():
    t = oracle_table(IrrepLabel(2, 2), (4, 2))
    assert t.transpose_residual() < 1e-9
    assert t.sum_rule_residual() < 1e-8


def test_cross_pipeline_agreement_2_2():
    # canonical Alt III tables from the M-scheme oracle and from the
    # recoupling pipeline must agree entry by entry
    irrep = IrrepLabel(2, 2)
    oracle = alt3_basis(oracle_table(irrep, (4, 2)))[1]
    pipeline = build_table(irrep, BasisChoice.ALT3)
    for k in pipeline.blocks:
        assert np.allclose(oracle.blocks[k], pipeline.blocks[k], atol=1e-9), k


def test_x3_proportional_to_m_matrix():
    # the cubic invariant restricted to fixed L is a multiple of M^L
    irrep = IrrepLabel(2, 2)
    rep = build_product_mscheme(4, 2)
    blocks = extract_rme_mscheme(rep, irrep)
    for L in (2, 3, 4):
        X3 = x3_restriction(rep, irrep, L)
        M = (blocks[(L, L)] + blocks[(L, L)].T) / 2
        c = (X3 * M).sum() / (M * M).sum()
        assert np.abs(X3 - c * M).max() < 1e-8


def test_z_eigenvectors_match_explicit_invariant():
    # eigenvectors of the reduced Z combination equal those of the explicit
    # X4 - sqrt(8/7)(2 lam + mu + 3) X3 restriction (same c_L on both terms)
    irrep = IrrepLabel(2, 2)
    rep = build_product_mscheme(4, 2)
    blocks = extract_rme_mscheme(rep, irrep)
    from su3canon.tables import ReducedMatrixTable
    table = ReducedMatrixTable(irrep, BasisChoice.RAW, blocks, labeled=False)
    qq2b = qq2_blocks(table)
    q0 = RotorParams.of(irrep).qbar0
    L = 2  # the only multiplicity-2 angular momentum of (2,2)
    Zred = qq2b[(L, L)] - ZBAR_COEFF * q0 * (blocks[(L, L)] + blocks[(L, L)].T) / 2
    Zfull = x4_restriction(rep, irrep, L) - ZBAR_COEFF * q0 * x3_restriction(rep, irrep, L)
    _, Vr = np.linalg.eigh((Zred + Zred.T) / 2)
    _, Vf = np.linalg.eigh((Zfull + Zfull.T) / 2)
    overlap = np.abs(Vr.T @ Vf)
    # a signed permutation of the identity
    assert np.allclose(np.sort(overlap, axis=0)[-1], 1.0, atol=1e-8)
    assert np.allclose(overlap @ overlap.T, np.eye(len(overlap)), atol=1e-8)


def test_couple_scalar_reproduces_casimir_piece():
    rep = build_symmetric_mscheme(2)
    qq0 = couple(rep.Q, rep.Q, 2, 2, 0)[0]
    QQ = sum(((-1) ** nu) * (rep.Q[nu] @ rep.Q[-nu]) for nu in range(-2, 3))
    # [Q x Q]_0 = QQ / sqrt(5) up to the CG normalization of the scalar
    assert np.allclose(math.sqrt(5) * qq0, QQ, atol=1e-10)
