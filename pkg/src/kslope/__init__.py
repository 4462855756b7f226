"""Energy slopes of weighted degenerations of rational curves.

Closed-form slope predictions from Newton diagrams (:mod:`kslope.predictor`)
and an independent numerical check by quadrature on the Riemann sphere
(:mod:`kslope.quadrature`, :mod:`kslope.experiment`).
"""

__version__ = "0.1.0"

from .diagram import DiagramPoint, NewtonDiagram, build_diagram
from .errors import KSlopeError
from .experiment import FitResult, SlopeReport, compare, fit_slope, serialize_report, verify
from .grid import GridParams, build_grid
from .kernels import BACKEND
from .poly import ComplexPoly, roots_with_multiplicity
from .predictor import DegenerationConfig, GeometricConstants, SlopePrediction, predict
from .quadrature import EnergySample, functionals, sample

__all__ = [
    "BACKEND",
    "ComplexPoly",
    "DegenerationConfig",
    "DiagramPoint",
    "EnergySample",
    "FitResult",
    "GeometricConstants",
    "GridParams",
    "KSlopeError",
    "NewtonDiagram",
    "SlopePrediction",
    "SlopeReport",
    "build_diagram",
    "build_grid",
    "compare",
    "fit_slope",
    "functionals",
    "predict",
    "roots_with_multiplicity",
    "sample",
    "serialize_report",
    "verify",
]
