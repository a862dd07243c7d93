"""Exact Engel expansions, pattern-bearing digit constructions and detectors."""

__version__ = "0.1.0"

from .engel import (  # noqa: E402
    AdmissibilityError,
    Cylinder,
    DigitSeq,
    EngelDomainError,
    cylinder,
    digits,
    engel_map,
    first_digit,
    is_admissible,
    partial_sum,
)
from .family import FamilySpec, PatternFunction, PatternSeq, build_b, parse_family  # noqa: E402

__all__ = [
    "AdmissibilityError",
    "Cylinder",
    "DigitSeq",
    "EngelDomainError",
    "FamilySpec",
    "PatternFunction",
    "PatternSeq",
    "build_b",
    "cylinder",
    "digits",
    "engel_map",
    "first_digit",
    "is_admissible",
    "parse_family",
    "partial_sum",
]
