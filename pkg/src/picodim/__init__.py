"""Finite-dimensional algebras, their polynomial identities and codimension growth."""

__version__ = "0.1.0"

from .algebra import (
    StructureAlgebra,
    build_associated_algebra,
    build_matrix_algebra,
    build_ut_algebra,
    direct_product,
    multiply_elements,
)
from .codim import CodimRecord, codim_sequence, codimension_exact_oracle, codimension_modular
from .errors import BudgetExceeded, ContractError, NonSplitError, PicodimError, PrimeExhaustion
from .structure import ParValue, Subspace, nilpotency_degree, par, radical, subspace_product, wedderburn_data

__all__ = [
    "StructureAlgebra",
    "build_associated_algebra",
    "build_matrix_algebra",
    "build_ut_algebra",
    "direct_product",
    "multiply_elements",
    "CodimRecord",
    "codim_sequence",
    "codimension_exact_oracle",
    "codimension_modular",
    "BudgetExceeded",
    "ContractError",
    "NonSplitError",
    "PicodimError",
    "PrimeExhaustion",
    "ParValue",
    "Subspace",
    "nilpotency_degree",
    "par",
    "radical",
    "subspace_product",
    "wedderburn_data",
]
