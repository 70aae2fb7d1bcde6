"""Combinatorics of Hubbard forests: angled trees, abstract coverings,
mapping schemata and external-argument dynamics, in exact arithmetic."""

from .angles import Angle, parse_fraction
from .tree import AngledTree, PseudoAccess, Violation
from .covering import Covering, ExtensionResult
from .schema import MappingSchema
from .forest import HubbardForest


__all__ = [
    "Angle",
    "AngledTree",
    "Covering",
    "ExtensionResult",
    "HubbardForest",
    "MappingSchema",
    "PseudoAccess",
    "Violation",
    "parse_fraction",
]

__version__ = "0.1.0"
