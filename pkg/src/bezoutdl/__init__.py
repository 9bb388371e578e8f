"""Exact DL(P, v) pencils for singular and rectangular matrix polynomials."""

from .kernels import BACKEND
from .exactalg import NEG_INF, SPoly, rat, rational_roots, spoly_gcd
from .polymat import PolyMat, PolyMatFormatError, eval_at, normal_rank, polymat_from_json
from .eigenstructure import (Eigenstructure, IndexSumViolation, MinimalBasis, SmithForm,
                             full_eigenstructure, is_minimal_basis, minimal_basis, smith_form)
from .dlpencil import (Ansatz, DLPencil, arrowhead_pencil, block_evaluation, build_dl,
                       exclusion_holds, structured_minimal_basis)
from .mobius import MobiusMap, commuting_diagram_check, mobius_transform, remove_infinity
from .rootpoly import RootPoly, check_root_poly, maximal_set
from .recovery import OmegaMap, recover_eigenvector, recover_minimal_basis, recover_root_polys
from .genstruct import KroneckerSpec, generate, random_spec

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "NEG_INF", "SPoly", "rat", "rational_roots", "spoly_gcd",
    "PolyMat", "PolyMatFormatError", "eval_at", "normal_rank", "polymat_from_json",
    "Eigenstructure", "IndexSumViolation", "MinimalBasis", "SmithForm", "full_eigenstructure",
    "is_minimal_basis", "minimal_basis", "smith_form",
    "Ansatz", "DLPencil", "arrowhead_pencil", "block_evaluation", "build_dl",
    "exclusion_holds", "structured_minimal_basis",
    "MobiusMap", "commuting_diagram_check", "mobius_transform", "remove_infinity",
    "RootPoly", "check_root_poly", "maximal_set",
    "OmegaMap", "recover_eigenvector", "recover_minimal_basis", "recover_root_polys",
    "KroneckerSpec", "generate", "random_spec",
]
