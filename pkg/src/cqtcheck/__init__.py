"""Exact verification of exchange structures on presented bialgebras.

The package decides, in exact arithmetic over Q(i)(t), whether a candidate
family of exchange blocks defines a coquasitriangular structure on a
bialgebra presented by generators and intertwiner relations, whether the
structure is star-compatible or cotriangular, and classifies finite
candidate families.  Built-in data cover the standard two-dimensional
quantum group, its Lorentz-type double, and the translation-extended
(inhomogeneous) groups with their enveloping-algebra functionals.
"""

from .scalars import ConjMode, Gaussian, Scalar, parse_scalar
from .tensor import Tensor, flip, kron, pad_with_identity, tauconj
from .presentation import (CandidateR, FunctionalHom, GeneratorSpec,
                           Presentation, Relation, mor_saturate, saturate)
from .cqt import CheckReport, check_condition2, check_ct, check_star, classify
from .dsl import dumps, parse_presentation

__all__ = [
    "CandidateR", "CheckReport", "ConjMode", "FunctionalHom", "Gaussian",
    "GeneratorSpec", "Presentation", "Relation", "Scalar", "Tensor",
    "check_condition2", "check_ct", "check_star", "classify", "dumps",
    "flip", "kron", "mor_saturate", "pad_with_identity", "parse_presentation",
    "parse_scalar", "saturate", "tauconj",
]
