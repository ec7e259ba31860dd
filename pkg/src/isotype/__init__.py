"""Decision procedures and desk-scale checks for elementary and isotypic
equivalence of periodic Abelian groups."""

from .cardinal import INF, ZERO, Cardinal, fin
from .multiplicity import MultiplicitySeq
from .groupspec import PGroupSpec, PeriodicGroupSpec, SzmielewInvariants, spec_invariants
from .deciders import ee, ee_p, isotypic, isotypic_p, isotypic_separable

__all__ = [
    "INF",
    "ZERO",
    "Cardinal",
    "fin",
    "MultiplicitySeq",
    "PGroupSpec",
    "PeriodicGroupSpec",
    "SzmielewInvariants",
    "spec_invariants",
    "ee",
    "ee_p",
    "isotypic",
    "isotypic_p",
    "isotypic_separable",
]
