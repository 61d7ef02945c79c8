"""Orthogonal polynomials on domains of revolution."""

from .catalog import FamilyBasis
from .domains import DomainSpec, Family, WeightSpec
from .errors import CapabilityError, DomainError, IndexRangeError, ParameterDomainError
from .kernels import KernelSpec, cone_kernel, doublecone_even_kernel, mapped_kernel
from .quad import domain_rule, gram
from .revolve import BasisIndex, EvalFn, enumerate_indices, project
from .spectral import OperatorSpec, eigenbasis, spectral_residual

__all__ = [
    "BasisIndex",
    "CapabilityError",
    "DomainError",
    "DomainSpec",
    "EvalFn",
    "Family",
    "FamilyBasis",
    "IndexRangeError",
    "KernelSpec",
    "OperatorSpec",
    "ParameterDomainError",
    "WeightSpec",
    "cone_kernel",
    "domain_rule",
    "doublecone_even_kernel",
    "eigenbasis",
    "enumerate_indices",
    "gram",
    "mapped_kernel",
    "project",
    "spectral_residual",
]
