import math

import pytest

from su3canon.wigner import clebsch_gordan, racah_U, six_j


def test_known_values():
    assert clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
    assert clebsch_gordan(1, 0, 1, 0, 0, 0) == pytest.approx(-math.sqrt(1 / 3), abs=1e-15)
    assert clebsch_gordan(2, 0, 2, 0, 0, 0) == pytest.approx(1 / math.sqrt(5), abs=1e-15)
    assert clebsch_gordan(2, 2, 2, -2, 0, 0) == pytest.approx(1 / math.sqrt(5), abs=1e-15)
    assert six_j(2, 2, 2, 2, 2, 2) == pytest.approx(-3 / 70, abs=1e-15)
    assert six_j(1, 1, 2, 1, 1, 2) == pytest.approx(1 / 30, abs=1e-15)


def test_selection_rules():
    assert clebsch_gordan(1, 1, 1, 1, 1, 1) == 0.0  # M mismatch
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0  # triangle
    assert racah_U(0, 2, 5, 2, 2, 2) == 0.0


def test_invalid_arguments():
    with pytest.raises(ValueError):
        clebsch_gordan(-1, 0, 1, 0, 1, 0)
    with pytest.raises(ValueError):
        clebsch_gordan(1, 2, 1, 0, 2, 2)  # |m| > j
    with pytest.raises(ValueError):
        racah_U(1, 1, 1, 1, 1, -2)


@pytest.mark.parametrize("j1,j2", [(1, 1), (2, 2), (3, 2), (5, 4), (8, 6)])
def test_cg_orthogonality(j1, j2):
    for J in range(abs(j1 - j2), j1 + j2 + 1):
        for Jp in range(abs(j1 - j2), j1 + j2 + 1):
            for M in range(-min(J, Jp), min(J, Jp) + 1):
                s = sum(clebsch_gordan(j1, m1, j2, M - m1, J, M)
                        * clebsch_gordan(j1, m1, j2, M - m1, Jp, M)
                        for m1 in range(-j1, j1 + 1) if abs(M - m1) <= j2)
                assert s == pytest.approx(1.0 if J == Jp else 0.0, abs=1e-13)


def test_racah_orthogonality():
    # sum_e U(abcd;ef) U(abcd;ef') = delta_ff'
    a, b, c, d = 3, 2, 4, 2
    for f in range(0, 7):
        for fp in range(0, 7):
            s = sum(racah_U(a, b, c, d, e, f) * racah_U(a, b, c, d, e, fp)
                    for e in range(0, 10))
            valid = abs(a - c) <= f <= a + c and abs(b - d) <= f <= b + d
            want = 1.0 if (f == fp and valid) else 0.0
            assert s == pytest.approx(want, abs=1e-12)


def test_six_j_symmetry():
    # column permutation invariance
    assert six_j(3, 2, 4, 2, 3, 2) == pytest.approx(six_j(2, 3, 4, 3, 2, 2), abs=1e-15)
    assert six_j(3, 2, 4, 2, 3, 2) == pytest.approx(six_j(4, 2, 3, 2, 3, 2), abs=1e-15)
