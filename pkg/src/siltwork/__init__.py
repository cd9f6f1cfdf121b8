"""Exact computations with silting complexes over finite-dimensional quiver algebras
and their truncations along a nilpotent central element."""

from .algebra import (Algebra, AlgebraPresentation, PathExpr, Quiver, Term, build_algebra,
                      quotient_by_central_power, tensor_trivial_extension)
from .complexes import ChainMap, ProjComplex, cone, direct_sum, minimal, minimize, shift, stalk
from .decomposition import basic, decompose, iso_test
from .homspaces import EndAlgebra, HomComplex, hom_dim, hom_table, relation
from .lifting import lift_full, lift_module, lift_step
from .linalg import QQ, Field
from .reduction import kunneth_check, reduction_context
from .silting import certify_silting, explore, mutate, poset_compare

__version__ = "0.1.0"

__all__ = [
    "Algebra", "AlgebraPresentation", "PathExpr", "Quiver", "Term", "build_algebra",
    "quotient_by_central_power", "tensor_trivial_extension", "ChainMap", "ProjComplex", "cone",
    "direct_sum", "minimal", "minimize", "shift", "stalk", "basic", "decompose", "iso_test",
    "EndAlgebra", "HomComplex", "hom_dim", "hom_table", "relation", "lift_full", "lift_module",
    "lift_step", "QQ", "Field", "kunneth_check", "reduction_context", "certify_silting",
    "explore", "mutate", "poset_compare",
]
