"""Pointwise metric data and energy functionals along a degeneration.

Conventions (area element ``dA = dx dy`` in a chart coordinate):

* ``omega_t`` has density ``(1/pi) d_z d_zbar ln sum_j |t|^{2 a_j} |S_j|^2``,
  so the Fubini-Study form of O(1) has total mass one and ``omega_t`` has
  mass ``d``;
* ``Ric(omega_0)`` has density ``-(1/pi) d_z d_zbar ln rho_0`` (mass 2);
* ``J = (1/(2 pi V)) int |d_z phi|^2 dA``, the normalisation for which
  ``F0 = J - (1/V) int phi omega_0`` equals ``-(1/2V) int phi (omega_0 + omega_t)``.

All logarithms of section sums go through the max-shifted kernels in
:mod:`kslope.kernels`; second derivatives use the closed-form pairwise
Wronskian expression.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from . import poly as P
from .errors import AllTermsUnderflow, DegenerateEmbedding, KSlopeError
from .grid import GridParams, QuadratureGrid, build_grid, wronskian_polys
from .predictor import DegenerationConfig, GeometricConstants

LOG_PI = math.log(math.pi)
DEFAULT_DESIGN_T = 0.1


@dataclass(frozen=True)
class WeightedSectionSum:
    """``sum_j exp(2 log_weights[j]) |polys[j](z)|^2``."""

    polys: tuple[P.ComplexPoly, ...]
    log_weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.polys) != len(self.log_weights):
            raise ValueError("one log weight per polynomial")
        if all(p.is_zero() for p in self.polys):
            raise ValueError("at least one polynomial must be nonzero")

    def matrix(self) -> np.ndarray:
        L = max(len(p) for p in self.polys)
        return np.array([p.padded(L).coeffs for p in self.polys])


@dataclass
class EnergySample:
    t: float
    F0_direct: float = math.nan
    F0_via_J: float = math.nan
    J: float = math.nan
    I0: float = math.nan
    nu: float = math.nan
    volume: float = math.nan
    wall_time: float | None = None
    error: str | None = None

    def as_dict(self, timing: bool = True) -> dict:
        out = {
            "t": self.t,
            "F0_direct": self.F0_direct,
            "F0_via_J": self.F0_via_J,
            "J": self.J,
            "I0": self.I0,
            "nu": self.nu,
            "volume": self.volume,
            "wall_time": self.wall_time if timing else None,
            "error": self.error,
        }
        return out


def _as_points(z):
    return np.atleast_1d(np.asarray(z, dtype=np.complex128))


def _scalar(x, z):
    return float(x[0]) if np.ndim(z) == 0 else x


def _positive_t(t) -> float:
    # only |t| enters: the energies are invariant under the phase of t
    t = abs(complex(t))
    if not 0 < t <= 1:
        raise ValueError(f"|t| must lie in (0, 1], got {t}")
    return t


def log_sum(s: WeightedSectionSum, z):
    lse, _ = kernels.weighted_log_norm(s.matrix(), s.log_weights, _as_points(z))
    if np.any(np.isneginf(lse)):
        raise AllTermsUnderflow("every term of the section sum vanishes")
    return _scalar(lse, z)


def log_laplacian(s: WeightedSectionSum, z):
    """``d_z d_zbar ln sum``, via the pairwise Wronskian numerator."""
    zz = _as_points(z)
    lse, _ = kernels.weighted_log_norm(s.matrix(), s.log_weights, zz)
    if np.any(np.isneginf(lse)):
        raise AllTermsUnderflow("every term of the section sum vanishes")
    pairs, wmat = wronskian_polys(s.polys, snap=0.0)
    lw = np.array([s.log_weights[j] + s.log_weights[k] for j, k in pairs])
    lse_w, _ = kernels.weighted_log_norm(wmat, lw, zz)
    return _scalar(np.exp(lse_w - 2 * lse), z)


def _sums(config: DegenerationConfig, t: float, chart: str):
    polys = config.chart_sections(chart)
    lt = math.log(t)
    return (
        WeightedSectionSum(polys, tuple(float(q) * lt for q in config.exponents)),
        WeightedSectionSum(polys, (0.0,) * len(polys)),
    )


def phi(config: DegenerationConfig, t, chart: str, z):
    t = _positive_t(t)
    st, s1 = _sums(config, t, chart)
    zz = _as_points(z)
    val = np.asarray(log_sum(st, zz)) - np.asarray(log_sum(s1, zz)) + 2 * config.weights[-1] * math.log(t)
    return _scalar(np.atleast_1d(val), z)


def omega_density(config: DegenerationConfig, t, chart: str, z):
    t = _positive_t(t)
    st, _ = _sums(config, t, chart)
    rho = np.atleast_1d(log_laplacian(st, _as_points(z))) / math.pi
    if not np.all(rho > 0):
        raise DegenerateEmbedding("omega_t vanishes: the sections do not define an embedding")
    return _scalar(rho, z)


def ricci_density(config: DegenerationConfig, chart: str, z):
    zz = _as_points(z)
    polys = config.chart_sections(chart)
    _, wmat = wronskian_polys(polys, snap=0.0)
    wsum = WeightedSectionSum(tuple(P.ComplexPoly(r) for r in wmat), (0.0,) * wmat.shape[0])
    try:
        ll_w = np.atleast_1d(log_laplacian(wsum, zz))
    except AllTermsUnderflow as exc:
        raise DegenerateEmbedding("the Wronskian sum vanishes: not an immersion") from exc
    ll_s = np.atleast_1d(log_laplacian(WeightedSectionSum(polys, (0.0,) * len(polys)), zz))
    return _scalar((2.0 * ll_s - ll_w) / math.pi, z)


class _PatchCache:
    """t-independent data of one patch: reference norms, densities and Ricci form."""

    def __init__(self, patch):
        self.patch = patch
        self.coeffs = np.array([p.coeffs for p in patch.polys])
        z = patch.nodes
        K = self.coeffs.shape[0]
        self.lse1, self.grad1 = kernels.weighted_log_norm(self.coeffs, np.zeros(K), z, True)
        self.lsew1, _ = kernels.weighted_log_norm(patch.wronskians, np.zeros(len(patch.pairs)), z)
        lseww, _ = kernels.weighted_log_norm(
            patch.second_wronskians, np.zeros(patch.second_wronskians.shape[0]), z
        )
        if not np.all(np.isfinite(self.lsew1)):
            raise DegenerateEmbedding("omega_0 vanishes on the grid: the sections do not define an immersion")
        self.log_rho0 = self.lsew1 - 2 * self.lse1 - LOG_PI
        self.rho0 = np.exp(self.log_rho0)
        self.ricci = (2.0 * np.exp(self.lsew1 - 2 * self.lse1) - np.exp(lseww - 2 * self.lsew1)) / math.pi


def _caches(grid: QuadratureGrid):
    cache = getattr(grid, "_kslope_cache", None)
    if cache is None:
        cache = [_PatchCache(p) for p in grid.patches]
        grid._kslope_cache = cache
    return cache


def _psum(x):
    # deterministic pairwise reduction
    return float(np.sum(x))


def ricci_mass(grid: QuadratureGrid) -> float:
    return sum(_psum(c.ricci * c.patch.weights) for c in _caches(grid))


def reference_volume(grid: QuadratureGrid) -> float:
    return sum(_psum(c.rho0 * c.patch.weights) for c in _caches(grid))


def functionals(config: DegenerationConfig, t, grid: QuadratureGrid, consts: GeometricConstants | None = None) -> dict:
    """All energy integrals at one ``t`` on ``grid``.

    Returns a dict with ``F0_direct``, ``F0_via_J``, ``J``, ``I0``, ``nu``,
    ``volume`` and the raw entropy and Ricci pairings.
    """
    t = _positive_t(t)
    grid.check_t(t)
    consts = consts or GeometricConstants.for_curve(config.d, config.genus)
    V, mu = float(consts.V), float(consts.mu)
    lt = math.log(t)
    lw = np.array([float(q) * lt for q in config.exponents])
    shift = 2 * config.weights[-1] * lt

    vol = a_int = b_int = dirichlet = entropy = ric_phi = 0.0
    for c in _caches(grid):
        p = c.patch
        w = p.weights
        lse_t, grad_t = kernels.weighted_log_norm(c.coeffs, lw, p.nodes, True)
        lw_pairs = np.array([lw[j] + lw[k] for j, k in p.pairs])
        lsew_t, _ = kernels.weighted_log_norm(p.wronskians, lw_pairs, p.nodes)
        log_rho_t = lsew_t - 2 * lse_t - LOG_PI
        if not np.all(np.isfinite(log_rho_t)):
            raise DegenerateEmbedding(f"omega_t vanishes on the grid at t = {t:g}")
        rho_t = np.exp(log_rho_t)
        ph = lse_t - c.lse1 + shift
        dphi = grad_t - c.grad1
        vol += _psum(rho_t * w)
        a_int += _psum(ph * c.rho0 * w)
        b_int += _psum(ph * rho_t * w)
        dirichlet += _psum((dphi.real**2 + dphi.imag**2) * w)
        entropy += _psum((log_rho_t - c.log_rho0) * rho_t * w)
        ric_phi += _psum(ph * c.ricci * w)

    J = dirichlet / (2 * math.pi * V)
    I0 = a_int / V
    return {
        "F0_direct": -(a_int + b_int) / (2 * V),
        "F0_via_J": J - I0,
        "J": J,
        "I0": I0,
        "nu": entropy / V - ric_phi / V + mu * (a_int + b_int) / (2 * V),
        "volume": vol,
        "entropy": entropy,
        "ricci_pairing": ric_phi,
    }


def mabuchi_energy(config, t, grid) -> float:
    return functionals(config, t, grid)["nu"]


def futaki_direct(config, t, grid) -> float:
    return functionals(config, t, grid)["F0_direct"]


def futaki_via_J(config, t, grid) -> float:
    return functionals(config, t, grid)["F0_via_J"]


def annulus_oracle(q_list: Sequence, p_list: Sequence, alpha: int, t: float, diagram, nodes: int = 64) -> float:
    """Integral of ``|t|^{2 sum(q_j - q_a)} |z|^{2 sum(p_j - p_a)} dA / (2 pi |z|^2)`` over the annulus
    ``|t|^{m_a} <= |z| < |t|^{m_{a+1}}`` of vertex ``a``, by Gauss-Legendre in ``ln |z|``.

    The sum runs over the selected points ``(p_list[i], q_list[i])``.
    """
    t = _positive_t(t)
    pa, qa = diagram.vertices[alpha]
    dq = float(sum(q - qa for q in q_list))
    dp = float(sum(p - pa for p in p_list))
    m_in, m_out = diagram.slope(alpha), diagram.slope(alpha + 1)
    lt = math.log(t)
    if math.isinf(m_in):
        # alpha = 0: the disk |z| < |t|^{m_1}
        if dp <= 0:
            return math.inf
        hi = float(m_out) * lt
        return math.exp(2 * dq * lt + 2 * dp * hi) / (2 * dp)
    lo, hi = float(m_in) * lt, float(m_out) * lt
    if hi <= lo:
        return 0.0
    # angular integral is exact; radial integrand in s = ln r is exp(2 dq ln t + 2 dp s)
    panels = max(1, math.ceil((hi - lo) / math.log(10)))
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        s = 0.5 * (b - a) * x + 0.5 * (a + b)
        total += float(np.sum(0.5 * (b - a) * w * np.exp(2 * dq * lt + 2 * dp * s)))
    return total


def sample(
    config: DegenerationConfig,
    t_schedule: Sequence[float],
    grid_params: GridParams | None = None,
    t_min: float | None = None,
    grid: QuadratureGrid | None = None,
) -> list[EnergySample]:
    """Evaluate the functionals along a strictly decreasing schedule in (0, 1].

    A sample that fails is kept with its error message and NaN values.  Unless
    ``t_min`` is given the grid is designed for ``min(t_schedule)``, but never
    coarser than ``DEFAULT_DESIGN_T``.
    """
    ts = [_positive_t(t) for t in t_schedule]
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_schedule must be strictly decreasing")
    if not ts:
        return []
    if grid is None:
        grid = build_grid(config, t_min if t_min is not None else min(min(ts), DEFAULT_DESIGN_T), grid_params)
    out = []
    for t in ts:
        start = time.perf_counter()
        try:
            vals = functionals(config, t, grid)
        except KSlopeError as exc:
            out.append(EnergySample(t, wall_time=time.perf_counter() - start, error=f"{type(exc).__name__}: {exc}"))
            continue
        out.append(
            EnergySample(
                t=t,
                F0_direct=vals["F0_direct"],
                F0_via_J=vals["F0_via_J"],
                J=vals["J"],
                I0=vals["I0"],
                nu=vals["nu"],
                volume=vals["volume"],
                wall_time=time.perf_counter() - start,
            )
        )
    return out
