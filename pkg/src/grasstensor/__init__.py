"""Trifocal Grassmann tensors: exact construction, multilinear rank and cores."""

__version__ = "0.1.0"

from .errors import DimensionError, GenericityError, GrassTensorError, ParseError, ProfileError
from .exact_linalg import RationalMatrix
from .geometry import (
    DimensionInvariants,
    ProjectionSetup,
    canonical_setup,
    canonicalize,
    check_genericity,
    generate_generic_setup,
)
from .grassmann import GrassmannTensor, build
from .kernels import backend
from .mlrank import multilinear_rank, oracle_frank, zero_rows
from .core import hosvd_core, pullback_core, verify_core_axioms
from .tensor3 import Tensor3

__all__ = [
    "DimensionError",
    "DimensionInvariants",
    "GenericityError",
    "GrassTensorError",
    "GrassmannTensor",
    "ParseError",
    "ProfileError",
    "ProjectionSetup",
    "RationalMatrix",
    "Tensor3",
    "backend",
    "build",
    "canonical_setup",
    "canonicalize",
    "check_genericity",
    "generate_generic_setup",
    "hosvd_core",
    "multilinear_rank",
    "oracle_frank",
    "pullback_core",
    "verify_core_axioms",
    "zero_rows",
]
