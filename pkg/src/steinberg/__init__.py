"""Exact desk-scale computations in Steinberg groups over tiny rings."""

from .rings import (
    Elem,
    FGIdeal,
    RingMorphism,
    SplitData,
    lin_solve,
    localization,
    make_ring,
    quotient_ring,
    semidirect_ring,
    split_data,
    splitting_section,
    substitute,
    unique_divide,
)
from .roots import RootDatum, a3_subsystems, build_system, structure_constant

__all__ = [
    "Elem",
    "FGIdeal",
    "RingMorphism",
    "SplitData",
    "lin_solve",
    "localization",
    "make_ring",
    "quotient_ring",
    "semidirect_ring",
    "split_data",
    "splitting_section",
    "substitute",
    "unique_divide",
    "RootDatum",
    "a3_subsystems",
    "build_system",
    "structure_constant",
]
