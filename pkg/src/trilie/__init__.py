"""Exact computations with 3-Lie algebras, their derivations, cohomology,
deformations, abelian extensions and 3-Lie 2-algebras."""

from .qarray import QArray
from .report import Report
from .threelie import (
    LieDerPair,
    ThreeLieAlgebra,
    check_derivation,
    check_fundamental_identity,
    check_pair,
    derivation_space,
    example_algebra,
)
from .representations import PairRepresentation, Representation, adjoint, semidirect_pair, trivial_representation
from .cochains import CochainComplex, PairCochain, PlainCochain
from .graded import bracket_pair, circ, is_maurer_cartan
from .deformations import TruncatedDeformation, check_deformation, extend, obstruction
from .extensions import ExtensionCocycle, ExtensionData, build_extension, extensions_equivalent, extract_cocycle
from .lie2 import (
    CrossedModule,
    Lie2DerPair,
    SkeletalTriple,
    ThreeLie2Algebra,
    TwoDerivation,
    crossed_to_strict,
    skeletal_to_triple,
    strict_to_crossed,
    triple_to_skeletal,
)

__version__ = "0.1.0"

__all__ = [
    "QArray", "Report",
    "ThreeLieAlgebra", "LieDerPair", "check_fundamental_identity", "check_derivation", "check_pair",
    "derivation_space", "example_algebra",
    "Representation", "PairRepresentation", "adjoint", "trivial_representation", "semidirect_pair",
    "CochainComplex", "PlainCochain", "PairCochain",
    "circ", "bracket_pair", "is_maurer_cartan",
    "TruncatedDeformation", "check_deformation", "obstruction", "extend",
    "ExtensionCocycle", "ExtensionData", "build_extension", "extract_cocycle", "extensions_equivalent",
    "ThreeLie2Algebra", "TwoDerivation", "Lie2DerPair", "SkeletalTriple", "CrossedModule",
    "skeletal_to_triple", "triple_to_skeletal", "strict_to_crossed", "crossed_to_strict",
]
