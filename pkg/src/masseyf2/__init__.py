"""Massey products, coindeterminacy and fourfold bracket definedness for F2 DGAs."""

from .dga import ChainElement, DgaPresentation, GeneratorDecl, parse_presentation, validate
from .examples import fixture
from .homology import HomologyClass, HomologyStructure, build_homology
from .massey import (coindeterminacy, fourfold_bracket, half_strict_defined, is_fourfold_defined,
                     left_div_subgroup, right_div_subgroup, triple_bracket)

__all__ = [
    "ChainElement", "DgaPresentation", "GeneratorDecl", "HomologyClass", "HomologyStructure",
    "build_homology", "coindeterminacy", "fixture", "fourfold_bracket", "half_strict_defined",
    "is_fourfold_defined", "left_div_subgroup", "parse_presentation", "right_div_subgroup",
    "triple_bracket", "validate",
]
