"""Closed-form ln(1/|t|) coefficients of the Futaki and Mabuchi energies.

A degeneration is a basis ``S_0 .. S_N`` of sections of O(d) on the Riemann
sphere together with integer weights ``a_j`` (``sum a_j = 0``), acting by
``S_j -> t^{a_j} S_j``.  The last section is the anchor and carries the
minimal weight.  Each zero of the anchor contributes through the Newton
diagram of the points ``(ord S_j, a_j - a_N)``:

    mabuchi  = sum_zeros (2 q_0 - mu * sum_a p_a^2 (m_a - m_{a+1})) / V
    futaki   = 2 a_N + sum_zeros sum_a p_a^2 (m_a - m_{a+1}) / V
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import poly as P
from .diagram import DiagramPoint, NewtonDiagram, build_diagram, q_axis_intercept
from .errors import (
    AnchorNotMinimal,
    DegreeExceedsLineBundle,
    RootClusterAmbiguity,
    SectionsNotBasis,
    WeightSumNonzero,
)

STANDARD = "standard"
INFINITY = "infinity"


@dataclass(frozen=True)
class DegenerationConfig:
    d: int
    sections: tuple[P.ComplexPoly, ...]
    weights: tuple[int, ...]
    genus: int = 0
    metadata: str = ""

    def __post_init__(self):
        secs = tuple(s if isinstance(s, P.ComplexPoly) else P.ComplexPoly(s) for s in self.sections)
        object.__setattr__(self, "sections", secs)
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        if self.d < 1:
            raise ValueError("line bundle degree must be positive")
        if len(secs) != len(self.weights):
            raise ValueError("need one weight per section")
        for s in secs:
            if s.degree > self.d:
                raise DegreeExceedsLineBundle(f"section {s} has degree above {self.d}")
        weights_to_exponents(self.weights)
        if len(secs) != self.d + 1:
            raise SectionsNotBasis(f"O({self.d}) needs {self.d + 1} sections, got {len(secs)}")
        mat = np.array([s.padded(self.d + 1).coeffs for s in secs])
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise SectionsNotBasis("sections are linearly dependent")

    @property
    def N(self) -> int:
        return len(self.sections) - 1

    @property
    def anchor(self) -> P.ComplexPoly:
        return self.sections[-1]

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return weights_to_exponents(self.weights)

    def chart_sections(self, chart: str) -> tuple[P.ComplexPoly, ...]:
        if chart == STANDARD:
            return tuple(s.padded(self.d + 1) for s in self.sections)
        return tuple(P.chart_swap(s, self.d) for s in self.sections)

    def digest(self) -> dict:
        return {
            "d": self.d,
            "sections": [[[c.real, c.imag] for c in s.padded(self.d + 1).coeffs] for s in self.sections],
            "weights": list(self.weights),
            "genus": self.genus,
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class GeometricConstants:
    V: Rational | float
    mu: Rational | float

    @classmethod
    def for_curve(cls, d: int, genus: int = 0) -> "GeometricConstants":
        return cls(Fraction(d), Fraction(2 - 2 * genus, d))


@dataclass(frozen=True)
class AnchorZero:
    chart: str
    location: complex
    multiplicity: int


@dataclass(frozen=True)
class LocalZeroData:
    chart: str
    location: complex
    anchor_multiplicity: int
    orders: tuple[int, ...]
    leading: tuple[complex, ...]
    exponents: tuple[Fraction, ...]
    diagram: NewtonDiagram


@dataclass(frozen=True)
class ZeroContribution:
    zero_id: int
    chart: str
    location: complex
    mabuchi: Fraction
    futaki: Fraction


@dataclass(frozen=True)
class SlopePrediction:
    futaki_coefficient: Fraction
    mabuchi_coefficient: Fraction
    global_futaki_term: Fraction
    per_zero: tuple[ZeroContribution, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "futaki": float(self.futaki_coefficient),
            "mabuchi": float(self.mabuchi_coefficient),
            "futaki_exact": str(self.futaki_coefficient),
            "mabuchi_exact": str(self.mabuchi_coefficient),
            "global_futaki_term": str(self.global_futaki_term),
            "per_zero": [
                {
                    "zero_id": z.zero_id,
                    "chart": z.chart,
                    "location": [z.location.real, z.location.imag],
                    "mabuchi": str(z.mabuchi),
                    "futaki": str(z.futaki),
                }
                for z in self.per_zero
            ],
        }


def weights_to_exponents(weights: Sequence[int]) -> tuple[Fraction, ...]:
    """``q_j = a_j - a_N``; the weights must sum to zero and end on their minimum."""
    weights = [int(a) for a in weights]
    if sum(weights) != 0:
        raise WeightSumNonzero(f"weights sum to {sum(weights)}, not 0")
    if weights[-1] != min(weights):
        raise AnchorNotMinimal(f"last weight {weights[-1]} is not the minimum {min(weights)}")
    return tuple(Fraction(a - weights[-1]) for a in weights)


def zeroes_of_anchor(config: DegenerationConfig, cluster_tol: float = 1e-8) -> list[AnchorZero]:
    """Zeros of the anchor section on the sphere.

    Roots with ``|z| <= 1`` are reported in the standard chart, the rest
    (including the zero at infinity forced by a degree drop) in the chart
    ``w = 1/z``, so every location has modulus at most one.
    """
    anchor = config.anchor
    zeros = []
    far = []
    for c in P.roots_with_multiplicity(anchor, cluster_tol):
        if abs(c.location) <= 1.0:
            zeros.append(AnchorZero(STANDARD, c.location, c.multiplicity))
        else:
            far.append(c)
    swapped = P.chart_swap(anchor, config.d)
    swapped_n = P.ComplexPoly(swapped.coeffs / swapped.scale())
    at_infinity = config.d - anchor.degree
    if at_infinity:
        zeros.append(AnchorZero(INFINITY, 0j, at_infinity))
    for c in far:
        w = P.polish_root(swapped_n, 1.0 / c.location, c.multiplicity)
        zeros.append(AnchorZero(INFINITY, w, c.multiplicity))
    return zeros


def local_data(config: DegenerationConfig, zero: AnchorZero, tol: float = 1e-8) -> LocalZeroData:
    polys = config.chart_sections(zero.chart)
    orders, leading = [], []
    for s in polys:
        k, u = P.vanishing_order(s, zero.location, tol)
        orders.append(k)
        leading.append(u)
    if orders[-1] != zero.multiplicity:
        raise RootClusterAmbiguity(
            f"anchor vanishes to order {orders[-1]} at {zero.location}, expected {zero.multiplicity}"
        )
    q = config.exponents
    points = [DiagramPoint(k, qj, abs(u) ** 2) for k, qj, u in zip(orders, q, leading)]
    return LocalZeroData(
        chart=zero.chart,
        location=zero.location,
        anchor_multiplicity=zero.multiplicity,
        orders=tuple(orders),
        leading=tuple(leading),
        exponents=q,
        diagram=build_diagram(points),
    )


def _curvature_sum(diagram: NewtonDiagram) -> Fraction:
    # sum_a p_a^2 (m_a - m_{a+1}), a = 1..M
    total = Fraction(0)
    for a in range(1, diagram.M + 1):
        p = diagram.vertices[a][0]
        total += p * p * (diagram.slope(a) - diagram.slope(a + 1))
    return total


def local_mabuchi_coefficient(data: LocalZeroData, consts: GeometricConstants):
    return (2 * q_axis_intercept(data.diagram) - consts.mu * _curvature_sum(data.diagram)) / consts.V


def local_futaki_coefficient(data: LocalZeroData, consts: GeometricConstants):
    return _curvature_sum(data.diagram) / consts.V


def predict(
    config: DegenerationConfig,
    consts: GeometricConstants | None = None,
    cluster_tol: float = 1e-8,
) -> SlopePrediction:
    if consts is None:
        consts = GeometricConstants.for_curve(config.d, config.genus)
    global_term = Fraction(2 * config.weights[-1])
    per_zero = []
    for i, zero in enumerate(zeroes_of_anchor(config, cluster_tol)):
        data = local_data(config, zero)
        per_zero.append(
            ZeroContribution(
                i,
                zero.chart,
                zero.location,
                local_mabuchi_coefficient(data, consts),
                local_futaki_coefficient(data, consts),
            )
        )
    return SlopePrediction(
        futaki_coefficient=global_term + sum((z.futaki for z in per_zero), Fraction(0)),
        mabuchi_coefficient=sum((z.mabuchi for z in per_zero), Fraction(0)),
        global_futaki_term=global_term,
        per_zero=tuple(per_zero),
    )
