import numpy as np
import pytest

from su3canon import IrrepLabel
from su3canon.coupled import (CoupledState, DegenerateClusterError,
                              build_block, coupled_basis, decompose_product,
                              default_parents, extract_irrep, gtw_basis,
                              reduced_q_table, rme_q_total)
from su3canon.irreps import casimir2, dimension, k_values_at


def test_decompose():
    assert decompose_product(2, 2) == [IrrepLabel(4, 0), IrrepLabel(2, 1),
                                       IrrepLabel(0, 2)]
    assert decompose_product(1, 0) == [IrrepLabel(1, 0)]
    assert IrrepLabel(10, 4) in decompose_product(14, 4)
    with pytest.raises(ValueError):
        decompose_product(1, 2)


def test_decompose_dimensions_add_up():
    for l1, l2 in [(2, 2), (4, 3), (6, 2)]:
        total = sum(dimension(r) for r in decompose_product(l1, l2))
        assert total == dimension(IrrepLabel(l1, 0)) * dimension(IrrepLabel(l2, 0))


def test_default_parents():
    assert default_parents(IrrepLabel(10, 4)) == (14, 4)
    assert default_parents(IrrepLabel(32, 5)) == (37, 5)


def test_coupled_basis_ordering():
    basis = coupled_basis(2, 2, 2)
    assert basis == tuple(sorted(basis))
    assert CoupledState(2, 2, 2) in basis
    with pytest.raises(ValueError):
        coupled_basis(1, 2, 0)


def test_build_block_qq_spectrum():
    # (1,0) x (1,0): the only L=0 coupled state is (1,1,0); the (0,1) member
    # has no L=0 state, so it belongs to (2,0) and Q.Q = c2(2,0) = 40
    block = build_block(1, 1, 0)
    assert [s for s in block.states] == [CoupledState(1, 1, 0)]
    assert np.allclose(np.linalg.eigvalsh(block.qq), [casimir2(IrrepLabel(2, 0))])


def test_qq_block_spectra_match_casimirs():
    # every Q.Q eigenvalue at L equals c2(member) - 3L(L+1) for some member
    # containing L, with the right multiplicities
    for L in (0, 2, 3):
        block = build_block(2, 2, L)
        ev = np.sort(np.linalg.eigvalsh(block.qq))
        want = sorted(
            casimir2(m) - 3 * L * (L + 1)
            for m in decompose_product(2, 2)
            for _ in k_values_at(m, L))
        assert np.allclose(ev, want, atol=1e-8)


def test_extract_irrep_dimensions():
    sub = extract_irrep(4, 2, IrrepLabel(2, 2))
    for L, (states, cols) in sub.per_L.items():
        assert cols.shape[1] == len(k_values_at(IrrepLabel(2, 2), L))
        assert np.allclose(cols.T @ cols, np.eye(cols.shape[1]), atol=1e-10)


def test_extract_irrep_errors():
    with pytest.raises(ValueError):
        extract_irrep(2, 2, IrrepLabel(3, 3))
    with pytest.raises(DegenerateClusterError):
        # absurd tolerance makes every Casimir cluster collide
        extract_irrep(4, 2, IrrepLabel(2, 2), cluster_tol=10.0)


def test_rme_q_total_spectator_rule():
    a = CoupledState(2, 2, 2)
    b = CoupledState(4, 0, 4)
    assert rme_q_total(b, a, 4, 2) == 0.0  # both sides change


def test_gtw_basis_orthonormal_and_table():
    sub = extract_irrep(4, 2, IrrepLabel(2, 2))
    bases = gtw_basis(sub)
    for L, (ev, cols) in bases.items():
        assert np.allclose(cols.T @ cols, np.eye(cols.shape[1]), atol=1e-10)
        assert list(ev) == sorted(ev)
    table = reduced_q_table(sub, bases)
    assert table.transpose_residual() < 1e-9
    assert table.sum_rule_residual() < 1e-8
