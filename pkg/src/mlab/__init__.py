"""Numerical toolkit for the Möbius and Liouville summatory functions and the zeta function."""

from .arith import CheckpointPolicy, Kind, SummatoryTrace, sieve_segment, summatory_trace
from .characters import DirichletCharacter, character_group, twisted_summatory
from .errors import CapacityError, DomainError, SingularityError
from .explicit import ZeroTable, chebyshev_psi, explicit_psi, find_zeros
from .zeta import ComplexPoint, EvalResult, Method, zeta_eta

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "CheckpointPolicy", "ComplexPoint", "DirichletCharacter", "DomainError",
    "EvalResult", "Kind", "Method", "SingularityError", "SummatoryTrace", "ZeroTable",
    "character_group", "chebyshev_psi", "explicit_psi", "find_zeros", "sieve_segment",
    "summatory_trace", "twisted_summatory", "zeta_eta",
]
