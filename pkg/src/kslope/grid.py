"""Quadrature grids on the Riemann sphere refined around the anchor zeros.

The sphere is split at ``|z| = 1`` into the standard chart disk and the disk
``|w| <= 1`` of the chart at infinity.  Each disk carries a polar grid with
Gauss-Legendre panels of one decade in ``ln r`` and the trapezoid rule in
angle, plus one centre node for the disk ``|z| < r_inner``.  An anchor zero
at a chart origin pushes that chart's ``r_inner`` down to
``t_min**m_1 * inner_margin``; every other zero gets its own local patch,
blended into the chart grids by a smooth partition of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import poly as P
from .errors import GridUnresolved
from .predictor import (
    INFINITY,
    STANDARD,
    DegenerationConfig,
    LocalZeroData,
    local_data,
    zeroes_of_anchor,
)

ORIGIN_TOL = 1e-12
WRONSKIAN_SNAP = 1e-13


@dataclass(frozen=True)
class GridParams:
    angular_nodes: int = 64
    radial_nodes_per_decade: int = 48
    inner_margin: float = 1e-2
    background_inner_radius: float = 1e-3
    min_annulus_nodes: int = 4

    def as_dict(self) -> dict:
        return {
            "angular_nodes": self.angular_nodes,
            "radial_nodes_per_decade": self.radial_nodes_per_decade,
            "inner_margin": self.inner_margin,
            "background_inner_radius": self.background_inner_radius,
            "min_annulus_nodes": self.min_annulus_nodes,
        }


@dataclass
class Patch:
    """Nodes of one polar grid, in the local coordinate ``x = centre + zeta`` of ``chart``."""

    chart: str
    centre: complex
    polys: tuple[P.ComplexPoly, ...]
    nodes: np.ndarray
    weights: np.ndarray
    radii: np.ndarray
    zero: LocalZeroData | None = None
    pairs: list[tuple[int, int]] = field(default_factory=list)
    wronskians: np.ndarray | None = None
    second_wronskians: np.ndarray | None = None


@dataclass
class QuadratureGrid:
    config: DegenerationConfig
    t_min: float
    params: GridParams
    patches: list[Patch]
    zeros: list[LocalZeroData]

    @property
    def size(self) -> int:
        return sum(p.nodes.size for p in self.patches)

    def check_t(self, t: float) -> None:
        if t < self.t_min * (1 - 1e-12):
            raise GridUnresolved(f"t = {t:g} is below the grid design minimum {self.t_min:g}")


def smooth_step(s):
    """C-infinity cutoff: 1 for s <= 1/2, 0 for s >= 1."""
    s = np.asarray(s, dtype=float)
    x = np.clip(2.0 * s - 1.0, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        f1 = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return 1.0 - f0 / (f0 + f1)


def log_radial_rule(r_inner: float, r_outer: float, per_decade: int):
    """Radii and weights for ``int_{r_inner}^{r_outer} f(r) r dr`` (GL panels in ln r)."""
    decades = math.log10(r_outer / r_inner)
    panels = max(1, math.ceil(decades - 1e-9))
    x, w = np.polynomial.legendre.leggauss(per_decade)
    edges = np.linspace(math.log(r_inner), math.log(r_outer), panels + 1)
    s, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        s.append(0.5 * (b - a) * x + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * w)
    s = np.concatenate(s)
    r = np.exp(s)
    return r, np.concatenate(ws) * r * r


def _polar(r_inner, r_outer, per_decade, angular):
    r, wr = log_radial_rule(r_inner, r_outer, per_decade)
    theta = 2.0 * np.pi * (np.arange(angular) + 0.5) / angular
    zeta = (r[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)
    w = np.repeat(wr * (2.0 * np.pi / angular), angular)
    radii = np.repeat(r, angular)
    # centre node stands in for the disk |zeta| < r_inner
    zeta = np.concatenate([[0j], zeta])
    w = np.concatenate([[np.pi * r_inner**2], w])
    radii = np.concatenate([[0.0], radii])
    return zeta, w, radii


def wronskian_polys(polys, orders=None, snap=WRONSKIAN_SNAP):
    """Pairwise Wronskians ``P_j P_k' - P_k P_j'`` (j < k) as a coefficient matrix."""
    pairs, rows = [], []
    for j in range(len(polys)):
        for k in range(j + 1, len(polys)):
            w = (polys[j] * P.derivative(polys[k]) - polys[k] * P.derivative(polys[j])).coeffs.copy()
            if orders is not None:
                w[: max(orders[j] + orders[k] - 1, 0)] = 0
            scale = np.max(np.abs(w)) if w.size else 0.0
            w[np.abs(w) < snap * scale] = 0
            pairs.append((j, k))
            rows.append(w)
    if not rows:
        return pairs, np.zeros((0, 1), dtype=np.complex128)
    L = max(r.size for r in rows)
    mat = np.zeros((len(rows), L), dtype=np.complex128)
    for i, r in enumerate(rows):
        mat[i, : r.size] = r
    return pairs, mat


def _snap_orders(polys, orders):
    out = []
    for s, k in zip(polys, orders):
        c = s.coeffs.copy()
        c[:k] = 0
        out.append(P.ComplexPoly(c))
    return tuple(out)


def _finish(patch: Patch) -> Patch:
    orders = patch.zero.orders if patch.zero is not None else None
    patch.pairs, patch.wronskians = wronskian_polys(patch.polys, orders)
    wpolys = [P.ComplexPoly(row) for row in patch.wronskians]
    _, patch.second_wronskians = wronskian_polys(wpolys)
    return patch


def _to_chart(x: np.ndarray, src: str, dst: str) -> np.ndarray:
    if src == dst:
        return x
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x == 0, np.inf + 0j, 1.0 / np.where(x == 0, 1.0, x))


def _inner_radius(zero: LocalZeroData | None, t_min: float, params: GridParams) -> float:
    if zero is None or zero.diagram.M == 0:
        return params.background_inner_radius
    m1 = float(zero.diagram.slopes[0])
    return min(params.background_inner_radius, t_min**m1 * params.inner_margin)


def annulus_node_counts(patch: Patch, t: float) -> list[int]:
    """Distinct radial nodes in each annulus ``t^{m_a} <= r < t^{m_{a+1}}``, a = 1..M."""
    d = patch.zero.diagram
    radii = np.unique(patch.radii[patch.radii > 0])
    counts = []
    for a in range(1, d.M + 1):
        lo = t ** float(d.slope(a))
        hi = t ** float(d.slope(a + 1))
        counts.append(int(np.count_nonzero((radii >= lo) & (radii < hi))))
    return counts


def build_grid(config: DegenerationConfig, t_min: float, params: GridParams | None = None) -> QuadratureGrid:
    params = params or GridParams()
    if not 0 < t_min <= 1:
        raise ValueError("t_min must lie in (0, 1]")
    zeros = [local_data(config, z) for z in zeroes_of_anchor(config)]

    origin = {STANDARD: None, INFINITY: None}
    off = []
    for zd in zeros:
        if abs(zd.location) <= ORIGIN_TOL:
            origin[zd.chart] = zd
        else:
            off.append(zd)

    # bump radius: half the distance to the nearest other zero, at most 1/2
    bumps = []
    for zd in off:
        rho = 0.5
        for other in zeros:
            if other is zd:
                continue
            pos = _to_chart(np.array([0j if abs(other.location) <= ORIGIN_TOL else other.location]), other.chart, zd.chart)[0]
            if np.isfinite(pos):
                rho = min(rho, 0.5 * abs(pos - zd.location))
        bumps.append((zd, rho))

    angular_bg = params.angular_nodes
    per_decade_bg = params.radial_nodes_per_decade
    for zd, rho in bumps:
        angular_bg = max(angular_bg, 16 * math.ceil(2 * np.pi * (abs(zd.location) + rho) / rho))
        per_decade_bg = max(per_decade_bg, math.ceil(24 / rho))

    patches = []
    for chart in (STANDARD, INFINITY):
        zd = origin[chart]
        polys = config.chart_sections(chart)
        if zd is not None:
            polys = _snap_orders(polys, zd.orders)
        r_in = _inner_radius(zd, t_min, params)
        zeta, w, radii = _polar(r_in, 1.0, per_decade_bg if bumps else params.radial_nodes_per_decade,
                                angular_bg)
        patches.append(Patch(chart, 0j, polys, zeta, w, radii, zero=zd))
    for zd, rho in bumps:
        polys = tuple(P.taylor_shift(s, zd.location) for s in config.chart_sections(zd.chart))
        polys = _snap_orders(polys, zd.orders)
        r_in = _inner_radius(zd, t_min, params)
        zeta, w, radii = _polar(r_in, rho, params.radial_nodes_per_decade, params.angular_nodes)
        patches.append(Patch(zd.chart, zd.location, polys, zeta, w * smooth_step(radii / rho), radii, zero=zd))

    # partition of unity on the chart grids
    for patch in patches[:2]:
        keep = np.ones(patch.nodes.size)
        for zd, rho in bumps:
            pos = _to_chart(patch.nodes, patch.chart, zd.chart)
            with np.errstate(invalid="ignore"):
                dist = np.abs(pos - zd.location)
            dist = np.where(np.isfinite(dist), dist, np.inf)
            keep -= smooth_step(dist / rho)
        patch.weights = patch.weights * keep

    for patch in patches:
        _finish(patch)
        if patch.zero is not None and patch.zero.diagram.M > 0:
            counts = annulus_node_counts(patch, t_min)
            if min(counts) < params.min_annulus_nodes:
                raise GridUnresolved(
                    f"annuli at zero {patch.zero.location} hold {counts} radial nodes, "
                    f"need {params.min_annulus_nodes}"
                )
    return QuadratureGrid(config, float(t_min), params, patches, zeros)
