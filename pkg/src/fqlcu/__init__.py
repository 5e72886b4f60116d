"""Sparse Pauli LCU decompositions of first-quantized Hamiltonians and their QPE cost."""

__version__ = "0.1.0"

from .diagonal_lcu import DiagonalLcu, count_diagonal_L, decompose_diagonal, norm_breakdown
from .hamiltonians import (CellSpec, DiagonalHamiltonian, GeneralHamiltonian, gen_random_dense,
                           gen_ueg_dpw, load_fcidump, write_fcidump)
from .pauli_lcu import (CanonicalLcu, canonicalize, decompose, decompose_one_body,
                        decompose_two_body, inverse_one_body, inverse_two_body, one_norm)
from .resources import CostParams, ResourceEstimate, estimate, split_error_budget
from .sparse_assembly import SparseLcu, assemble_diagonal, assemble_general, truncate

__all__ = [
    "CanonicalLcu", "CellSpec", "CostParams", "DiagonalHamiltonian", "DiagonalLcu",
    "GeneralHamiltonian", "ResourceEstimate", "SparseLcu", "assemble_diagonal", "assemble_general",
    "canonicalize", "count_diagonal_L", "decompose", "decompose_diagonal", "decompose_one_body",
    "decompose_two_body", "estimate", "gen_random_dense", "gen_ueg_dpw", "inverse_one_body",
    "inverse_two_body", "load_fcidump", "norm_breakdown", "one_norm", "split_error_budget",
    "truncate", "write_fcidump",
]
