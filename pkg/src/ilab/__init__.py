"""Exact-arithmetic incidence geometry over F_p and Q."""
from .errors import InputError, NoSeparationError, SizeLimitError, VerificationError
from .exactfield import FieldSpec, Matrix, Scalar, kernel_basis, rank, rref, solve_rank_compare
from .geom import AffineObject, GeneratorConfig, VarietySet, contains, generate, restrict_to
from .mpoly import MultiPoly, evaluate, restrict_to_flat, restrict_to_line
from .vanish import min_vanishing_degree, relative_degree, vanishing_poly
from .incidence import (bezout_line_check, greedy_k_free, incidence_degree, k_free_check,
                        rich_points, trivial_bound)
from .concentrate import brute_force_reference, concentration, concentration_profile
from .partition import cii_step, good_partition_search, partition_iterate

__version__ = "0.1.0"
