"""SU(3) quadrupole reduced matrix elements in canonical SO(3)-coupled bases.

Builds generic (lambda, mu) irreps from coupled products of symmetric
irreps, resolves the K multiplicity by three canonical prescriptions, and
cross-checks everything against closed-form rotor/asymptotic limits and an
independent M-scheme oracle.
"""

from .irreps import (IrrepLabel, KLState, angular_momenta, casimir2,
                     dimension, epsilon, k_values_at, so3_content,
                     symmetric_irrep_rme)
from .wigner import clebsch_gordan, racah_U, six_j
from .tables import BasisChoice, ReducedMatrixTable
from .coupled import (CoupledState, DegenerateClusterError, IrrepSubspace,
                      build_block, coupled_basis, decompose_product,
                      default_parents, extract_irrep, gtw_basis,
                      reduced_q_table, rme_q_single, rme_q_total)
from .models import (RotorParams, asymptotic_rme, asymptotic_table,
                     rotor_qq2_rme, rotor_ratio, rotor_rme, rotor_table,
                     rotor_zbar_check, rotor_zbar_diag, sigma)
from .kbasis import (alt1_basis, alt2_from_cg, alt3_basis, assign_K,
                     build_table, fix_phases, m_matrix, qq2_blocks, qq2_rme,
                     write_cg_file, z_matrix)

__version__ = "0.1.0"

__all__ = [
    "IrrepLabel", "KLState", "angular_momenta", "casimir2", "dimension",
    "epsilon", "k_values_at", "so3_content", "symmetric_irrep_rme",
    "clebsch_gordan", "racah_U", "six_j",
    "BasisChoice", "ReducedMatrixTable",
    "CoupledState", "DegenerateClusterError", "IrrepSubspace", "build_block",
    "coupled_basis", "decompose_product", "default_parents", "extract_irrep",
    "gtw_basis", "reduced_q_table", "rme_q_single", "rme_q_total",
    "RotorParams", "asymptotic_rme", "asymptotic_table", "rotor_qq2_rme",
    "rotor_ratio", "rotor_rme", "rotor_table", "rotor_zbar_check",
    "rotor_zbar_diag", "sigma",
    "alt1_basis", "alt2_from_cg", "alt3_basis", "assign_K", "build_table",
    "fix_phases", "m_matrix", "qq2_blocks", "qq2_rme", "write_cg_file",
    "z_matrix",
    "__version__",
]
