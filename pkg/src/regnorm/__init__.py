"""Regular operator norms on finite-dimensional lattices: interpolation
certificates, dual pairings, and norm-minimal extensions."""

from .calderon import (DualWitness, Factorization, calderon_norm, dual_pairing,
                       dual_witness_from_norm_witness, sample_dual_witness,
                       verify_factorization, verify_theorem1)
from .errors import (BudgetError, DomainError, ParseError, RefusalError,
                     RegnormError, StructuralError)
from .extension import (ExtensionProblem, ExtensionReport, extension_min_norm,
                        subspace_regular_lowerbound, verify_theorem3)
from .generate import random_extension_problem, random_matrix
from .hardy import (AnalyticSubspace, TorusGrid, build_analytic_subspace,
                    hardy_experiment, with_images)
from .model import (ExponentSpec, FamilyWitness, MatrixOperator, NonnegVector,
                    entrywise_abs, transpose)
from .norms import (NormWitness, a0_norm, a1_norm, b0_norm, b1_norm,
                    family_ratio, family_sup_norm, nonneg_operator_p_norm,
                    regular_norm, vector_p_norm)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
