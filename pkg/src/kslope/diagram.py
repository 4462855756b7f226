"""Newton diagrams of finite point sets in the closed positive quadrant.

The diagram of points ``(p_j, q_j)`` is the convex hull of the union of the
upper quadrants ``{p >= p_j, q >= q_j}``.  Its boundary is a staircase of
vertices ``V_0 .. V_M`` joined by faces of strictly decreasing slope; the
slope ``m`` of a face is the positive number with ``dq = -m dp`` along it.

Everything here is exact: ``p`` is an integer, ``q`` and the slopes are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MissingPAxisPoint, MissingQAxisPoint

__all__ = [
    "DiagramPoint",
    "FaceMembership",
    "NewtonDiagram",
    "build_diagram",
    "q_axis_intercept",
    "slope_sum_identity_check",
    "INFINITE_SLOPE",
]

INFINITE_SLOPE = float("inf")


@dataclass(frozen=True)
class DiagramPoint:
    p: int
    q: Fraction
    mass: float = 1.0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise ValueError(f"p must be a nonnegative integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q < 0:
            raise ValueError(f"q must be nonnegative, got {self.q}")

    @property
    def coords(self) -> tuple[int, Fraction]:
        return (self.p, self.q)


@dataclass(frozen=True)
class FaceMembership:
    """Where an input point sits relative to the diagram boundary.

    ``kind`` is ``"vertex"`` (``index`` = alpha), ``"face"`` (``index`` = alpha
    of the face joining ``V_{alpha-1}`` to ``V_alpha``; index 0 is the vertical
    ray above ``V_0`` and index ``M + 1`` the horizontal ray right of ``V_M``)
    or ``"interior"`` (``index`` is None).
    """

    kind: str
    index: int | None = None


@dataclass(frozen=True)
class NewtonDiagram:
    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[Fraction, ...]
    vertex_masses: tuple[float, ...]
    face_membership: tuple[FaceMembership, ...] = field(default=(), compare=False)

    @property
    def M(self) -> int:
        return len(self.vertices) - 1

    def slope(self, alpha: int):
        """Slope ``m_alpha`` including the sentinels ``m_0 = inf`` and ``m_{M+1} = 0``."""
        if alpha == 0:
            return INFINITE_SLOPE
        if alpha == self.M + 1:
            return Fraction(0)
        if 1 <= alpha <= self.M:
            return self.slopes[alpha - 1]
        raise IndexError(alpha)

    def extended_slopes(self) -> list:
        return [INFINITE_SLOPE, *self.slopes, Fraction(0)]

    def is_trivial(self) -> bool:
        return self.M == 0 and self.vertices[0][1] == 0


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _staircase(coords: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    # Pareto-minimal points, sorted by increasing p (hence strictly decreasing q)
    front = []
    best_q = None
    for pt in sorted(set(coords)):
        if best_q is None or pt[1] < best_q:
            front.append(pt)
            best_q = pt[1]
    # lower convex hull; collinear middle points are dropped
    hull: list[tuple[int, Fraction]] = []
    for pt in front:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def _classify(pt, vertices, slopes) -> FaceMembership:
    for a, v in enumerate(vertices):
        if pt == v:
            return FaceMembership("vertex", a)
    p, q = pt
    if p == vertices[0][0] and q > vertices[0][1]:
        return FaceMembership("face", 0)
    if q == vertices[-1][1] and p > vertices[-1][0]:
        return FaceMembership("face", len(vertices))
    for a in range(1, len(vertices)):
        (p0, q0), p1 = vertices[a - 1], vertices[a][0]
        if p0 < p < p1 and q - q0 + slopes[a - 1] * (p - p0) == 0:
            return FaceMembership("face", a)
    return FaceMembership("interior")


def build_diagram(points: Iterable[DiagramPoint]) -> NewtonDiagram:
    """Newton diagram of the points; raises if no point touches either axis."""
    pts = [pt if isinstance(pt, DiagramPoint) else DiagramPoint(*pt) for pt in points]
    if not pts:
        raise ValueError("build_diagram needs at least one point")
    if not any(pt.p == 0 for pt in pts):
        raise MissingQAxisPoint("no point with p = 0: the diagram has no vertex on the q-axis")
    if not any(pt.q == 0 for pt in pts):
        raise MissingPAxisPoint("no point with q = 0: the diagram has no vertex on the p-axis")

    vertices = _staircase([pt.coords for pt in pts])
    slopes = tuple(
        Fraction(q0 - q1) / (p1 - p0) for (p0, q0), (p1, q1) in zip(vertices, vertices[1:])
    )
    masses = [0.0] * len(vertices)
    index = {v: a for a, v in enumerate(vertices)}
    for pt in pts:
        a = index.get(pt.coords)
        if a is not None:
            masses[a] += pt.mass
    membership = tuple(_classify(pt.coords, vertices, slopes) for pt in pts)
    return NewtonDiagram(tuple(vertices), slopes, tuple(masses), membership)


def q_axis_intercept(diagram: NewtonDiagram) -> Fraction:
    return diagram.vertices[0][1]


def slope_sum_identity_check(diagram: NewtonDiagram) -> Fraction:
    """``sum_a p_a (m_a - m_{a+1})`` over a = 1..M; equals ``q_0`` for every valid diagram."""
    total = Fraction(0)
    for a in range(1, diagram.M + 1):
        total += diagram.vertices[a][0] * (diagram.slope(a) - diagram.slope(a + 1))
    return total
