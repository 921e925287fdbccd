"""Exact homological algebra over Z, Z/2 and Q."""
from ._backend import BACKEND
from .complexes import (ChainComplex, ChainMap, CokerResult, GradedFreeModule, HomologyReport,
                        coker_presentation, cone, homology, tensor_complexes)
from .exact import ExactnessReport, cone_maps, homology_dim, induced_rank, long_exact_sequence
from .matrix import IntMatrix, block_matrix
from .snf import RINGS, invariant_factors, rank, right_inverse, smith_normal_form

__all__ = [
    "BACKEND", "ChainComplex", "ChainMap", "CokerResult", "ExactnessReport", "GradedFreeModule", "HomologyReport",
    "IntMatrix", "RINGS", "block_matrix", "coker_presentation", "cone", "cone_maps", "homology", "homology_dim", "induced_rank",
    "long_exact_sequence",
    "invariant_factors", "rank", "right_inverse", "smith_normal_form", "tensor_complexes",
]
