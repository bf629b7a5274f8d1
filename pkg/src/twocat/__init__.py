"""Computing with finite 2-categories and 2-pro-objects."""

from .core import (Congruence, Decision, FinCat, Functor, NatTrans, TwoCat, ValidationReport,
                   equivalence_of_categories, hom_category, quotient, validate_fincat,
                   validate_twocat)
from .kernels import BACKEND

__all__ = [
    "BACKEND", "Congruence", "Decision", "FinCat", "Functor", "NatTrans", "TwoCat",
    "ValidationReport", "equivalence_of_categories", "hom_category", "quotient",
    "validate_fincat", "validate_twocat",
]
