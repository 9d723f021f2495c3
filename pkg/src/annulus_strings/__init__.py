"""Z/2 string chain complexes on marked annuli, computed in finite windows."""

from .diagrams import (
    ClosedMonomial,
    Complex,
    Element,
    Generator,
    HalfInt,
    add,
    gen,
    mul_closed,
    weight,
    winding,
)
from .complex_open import diff
from .homology import HomologyReport, TruncationSpec, homology_dim
from .parsing import ParseError, parse_element

__all__ = [
    "ClosedMonomial",
    "Complex",
    "Element",
    "Generator",
    "HalfInt",
    "HomologyReport",
    "ParseError",
    "TruncationSpec",
    "add",
    "diff",
    "gen",
    "homology_dim",
    "mul_closed",
    "parse_element",
    "weight",
    "winding",
]
