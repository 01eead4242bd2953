"""Exact deformations of bound quiver algebras.

Finite-dimensional algebras are presented by a quiver with relations
over an exact field (rationals or a prime field).  The package computes
monomial bases by rewriting, Hochschild 2-cocycles and their
coboundaries, the doubled algebra twisted by a cocycle together with a
quiver presentation of it, and transfers of cocycles across a Morita
context, verifying every identity it claims by direct computation.
"""

from .deform import (DeformedAlgebra, Equivalence, Presentation,
                     build_presentation, check_image_condition,
                     deformation_equivalence, deformed_multiply, hat_f,
                     interreduce_presentation, normalize_cocycle,
                     verify_presentation)
from .errors import (CharTwoUnsupported, ComputationError, EpsilonUnresolvable,
                     InputError, NormalizationFailed, NotFiniteDimensional,
                     NotFullIdempotent, SignResolutionFailed)
from .fields import Field
from .fileio import (AlgebraFile, emit_algebra_text, emit_dot,
                     parse_algebra_file, parse_algebra_text, parse_expression,
                     parse_module_file)
from .hochschild import (Cochain, FullCochain, cochain_from_pairs,
                         differential, extend_to_full, full_differential,
                         hh_dimension, hh_summary, is_cocycle, is_full_cocycle)
from .modcat import (LeftModule, MorphismTriple, UpleModule, functor_F,
                     module_from_file, module_homs, reconstruct,
                     regular_module, regular_uple, roundtrip_triple,
                     uple_from_module)
from .morita import (FinDimAlgebra, MoritaContext, algebra_of_basis,
                     homotopy_h, idempotent_context, identity_context,
                     matrix_context, transfer_phi, transfer_psi,
                     verify_morita_deformed)
from .quiver import (AlgebraBasis, AlgebraElement, FreeElement, Quiver,
                     compute_basis, decompose_unit, multiply, normal_form,
                     validate_admissible_relations)

__all__ = [
    "AlgebraBasis", "AlgebraElement", "AlgebraFile", "CharTwoUnsupported",
    "Cochain", "ComputationError", "DeformedAlgebra", "EpsilonUnresolvable",
    "Equivalence", "Field", "FinDimAlgebra", "FreeElement", "FullCochain",
    "InputError", "LeftModule", "MoritaContext", "MorphismTriple",
    "NormalizationFailed", "NotFiniteDimensional", "NotFullIdempotent",
    "Presentation", "Quiver", "SignResolutionFailed", "UpleModule",
    "algebra_of_basis", "build_presentation", "check_image_condition",
    "cochain_from_pairs", "compute_basis", "decompose_unit",
    "deformation_equivalence", "deformed_multiply", "differential",
    "emit_algebra_text", "emit_dot", "extend_to_full", "full_differential",
    "functor_F", "hat_f", "hh_dimension", "hh_summary", "homotopy_h",
    "idempotent_context", "identity_context", "interreduce_presentation",
    "is_cocycle", "is_full_cocycle", "matrix_context", "module_from_file",
    "module_homs", "multiply", "normal_form", "normalize_cocycle",
    "parse_algebra_file", "parse_algebra_text", "parse_expression",
    "parse_module_file", "reconstruct", "regular_module", "regular_uple",
    "roundtrip_triple", "transfer_phi", "transfer_psi", "uple_from_module",
    "validate_admissible_relations", "verify_morita_deformed",
    "verify_presentation",
]
