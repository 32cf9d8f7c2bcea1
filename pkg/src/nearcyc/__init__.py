"""Dickson near-fields, cyclotomic association schemes over them, and the
group machinery needed to compute their automorphisms and isomorphisms."""

from .finite_field import FiniteField, make_field
from .nearfield import (
    DicksonNearField,
    DicksonPair,
    construct_nearfield,
    count_dickson_nearfields,
    validate_dickson_pair,
)
from .perm_group import MatrixGroup, PermGroup
from .scheme import AssociationScheme, CyclotomicScheme, build_cyclotomic

__all__ = [
    "AssociationScheme",
    "CyclotomicScheme",
    "DicksonNearField",
    "DicksonPair",
    "FiniteField",
    "MatrixGroup",
    "PermGroup",
    "build_cyclotomic",
    "construct_nearfield",
    "count_dickson_nearfields",
    "make_field",
    "validate_dickson_pair",
]

__version__ = "0.1.0"
