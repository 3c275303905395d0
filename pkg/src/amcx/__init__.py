"""Numerical verification of an explicit counterexample family to interior
second-derivative estimates for det(D^2 u + sign * Du (x) Du) = f.

Subpackages: jet arithmetic (:mod:`amcx.jets`), family evaluators
(:mod:`amcx.family`), the matrix kit (:mod:`amcx.matkit`), augmented
Hessian routes (:mod:`amcx.augmented`), regularity probes
(:mod:`amcx.probes`), admissibility scans (:mod:`amcx.admissibility`),
and the CLI (:mod:`amcx.cli`).
"""

__version__ = "0.1.0"

from .family import EvalPoint, FamilyParams, Variant
from .jets import Jet2, jet_arith, jet_const, jet_det, jet_pow, jet_var
from .matkit import SymMatrix

__all__ = [
    "__version__",
    "EvalPoint",
    "FamilyParams",
    "Variant",
    "Jet2",
    "jet_arith",
    "jet_const",
    "jet_det",
    "jet_pow",
    "jet_var",
    "SymMatrix",
]
