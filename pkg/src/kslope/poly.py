"""Dense complex polynomials in one variable.

Sections of O(d) on the Riemann sphere are stored as coefficient vectors in
the standard chart ``z``; :func:`chart_swap` gives the same section in the
chart ``w = 1/z``.  Root finding is tuned for the small degrees (d <= 12)
used by the degeneration experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegreeExceedsLineBundle, RootClusterAmbiguity, ZeroPolynomial

__all__ = [
    "ComplexPoly",
    "RootCluster",
    "evaluate",
    "derivative",
    "chart_swap",
    "taylor_shift",
    "roots_with_multiplicity",
    "vanishing_order",
    "polish_root",
]


class ComplexPoly:
    """Polynomial ``c_0 + c_1 z + ... + c_D z^D`` with an immutable coefficient array.

    Trailing zeros are kept: the declared length matters when the polynomial
    represents a section of a line bundle.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[complex] | np.ndarray):
        c = np.array(coeffs, dtype=np.complex128).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        c.flags.writeable = False
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __len__(self):
        return self._c.size

    @property
    def degree(self) -> int:
        """Effective degree (index of the last nonzero coefficient); -1 for the zero polynomial."""
        nz = np.flatnonzero(self._c)
        return int(nz[-1]) if nz.size else -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def scale(self) -> float:
        return float(np.max(np.abs(self._c)))

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=np.complex128)
        out[: len(self)] += self._c
        out[: len(other)] += other._c
        return ComplexPoly(out)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + ComplexPoly(-other._c)

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return ComplexPoly(np.convolve(self._c, other._c))
        return ComplexPoly(self._c * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        n = max(len(self), len(other))
        a = np.zeros(n, dtype=np.complex128)
        b = np.zeros(n, dtype=np.complex128)
        a[: len(self)] = self._c
        b[: len(other)] = other._c
        return bool(np.array_equal(a, b))

    def __hash__(self):
        return hash(tuple(self.trimmed()._c.tolist()))

    def trimmed(self) -> "ComplexPoly":
        return ComplexPoly(self._c[: max(self.degree, 0) + 1])

    def padded(self, length: int) -> "ComplexPoly":
        if length < self.degree + 1:
            raise ValueError("cannot pad below the effective degree")
        out = np.zeros(length, dtype=np.complex128)
        k = min(length, len(self))
        out[:k] = self._c[:k]
        return ComplexPoly(out)

    def __repr__(self):
        return f"ComplexPoly({self._c.tolist()!r})"


@dataclass(frozen=True)
class RootCluster:
    location: complex
    multiplicity: int
    residual: float


def evaluate(p: ComplexPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = p.coeffs
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, c[-1], dtype=np.complex128)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return acc[()] if acc.ndim == 0 else acc


def derivative(p: ComplexPoly) -> ComplexPoly:
    c = p.coeffs
    if c.size == 1:
        return ComplexPoly([0.0])
    return ComplexPoly(c[1:] * np.arange(1, c.size))


def chart_swap(p: ComplexPoly, d: int) -> ComplexPoly:
    """Return ``w^d p(1/w)``, the same section of O(d) in the chart at infinity."""
    if p.degree > d:
        raise DegreeExceedsLineBundle(f"effective degree {p.degree} exceeds line bundle degree {d}")
    return ComplexPoly(p.padded(d + 1).coeffs[::-1])


def taylor_shift(p: ComplexPoly, z0: complex) -> ComplexPoly:
    """Coefficients of ``p(z0 + x)`` in powers of ``x`` (repeated synthetic division)."""
    b = np.array(p.coeffs, dtype=np.complex128)
    n = b.size
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            b[k] += z0 * b[k + 1]
    return ComplexPoly(b)


def _taylor_scale(p: ComplexPoly, z0: complex) -> float:
    # size of the largest term |c_j| |z0|^j, i.e. the rounding scale of p near z0
    c = np.abs(p.coeffs)
    powers = max(1.0, abs(z0)) ** np.arange(c.size)
    return float(np.max(c * powers))


def vanishing_order(p: ComplexPoly, z0: complex, tol: float = 1e-8) -> tuple[int, complex]:
    """Order of vanishing of ``p`` at ``z0`` and the leading Taylor coefficient there.

    A Taylor coefficient counts as zero when it is below ``tol`` times the
    largest term of ``p`` at ``|z0|``.
    """
    if p.is_zero():
        raise ZeroPolynomial("vanishing order of the zero polynomial is undefined")
    t = taylor_shift(p, z0).coeffs
    thresh = tol * _taylor_scale(p, z0)
    for k, tk in enumerate(t):
        if abs(tk) > thresh:
            return k, complex(tk)
    # every coefficient below threshold: fall back to the largest one
    k = int(np.argmax(np.abs(t)))
    return k, complex(t[k])


def _group(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage grouping of complex values within a relative radius."""
    n = values.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            r = radius * max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) < r:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _merge_by_order(pn, eig, groups, order_tol, max_scatter=0.05):
    # A root of order m scatters the eigenvalues on a ring of radius ~ (eps * cond)**(1/m),
    # which for m >= 4 can exceed the grouping radius and split one root into several
    # groups. When the polished centre of a group vanishes to higher order k than the
    # group size, pull in the k eigenvalues nearest to it.
    groups = [sorted(g) for g in groups]
    changed = True
    while changed:
        changed = False
        for g in groups:
            m = len(g)
            loc = polish_root(pn, complex(np.mean(eig[g])), m)
            k, _ = vanishing_order(pn, loc, order_tol)
            if k <= m or k > eig.size:
                continue
            nearest = set(np.argsort(np.abs(eig - loc))[:k].tolist())
            if max(abs(eig[i] - loc) for i in nearest) > max_scatter * max(1.0, abs(loc)):
                continue
            merged = [h for h in groups if nearest.intersection(h)]
            union = sorted(set().union(*merged))
            if len(union) != k or len(merged) < 2 or g not in merged:
                continue
            groups = [h for h in groups if h not in merged] + [union]
            changed = True
            break
    return groups


def polish_root(p: ComplexPoly, z: complex, mult: int, iters: int = 60) -> complex:
    # Newton on the (mult-1)-th derivative, which has a simple root at a root of multiplicity mult
    q = p
    for _ in range(mult - 1):
        q = derivative(q)
    dq = derivative(q)
    for _ in range(iters):
        fz = evaluate(q, z)
        dfz = evaluate(dq, z)
        if dfz == 0:
            break
        step = fz / dfz
        z = z - step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


def roots_with_multiplicity(
    p: ComplexPoly,
    cluster_tol: float = 1e-8,
    group_radius: float = 1e-3,
    order_tol: float = 1e-8,
) -> list[RootCluster]:
    """All complex roots of ``p`` grouped with multiplicities.

    Companion-matrix eigenvalues are grouped (multiple roots scatter like
    ``eps**(1/m)``), each group is polished by Newton on the derivative of
    order ``m - 1`` and the cardinality is cross-checked against
    :func:`vanishing_order` at the polished location.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot find roots of the zero polynomial")
    pn = ComplexPoly(p.trimmed().coeffs / p.scale())
    if pn.degree == 0:
        return []
    eig = np.roots(pn.coeffs[::-1])
    clusters = []
    for members in _merge_by_order(pn, eig, _group(eig, group_radius), order_tol):
        m = len(members)
        centre = complex(np.mean(eig[members]))
        loc = polish_root(pn, centre, m)
        refined = [polish_root(pn, complex(eig[i]), m) for i in members]
        spread = max(abs(r - loc) for r in refined)
        order, _ = vanishing_order(pn, loc, order_tol)
        if order != m or spread >= cluster_tol * max(1.0, abs(loc)):
            raise RootClusterAmbiguity(
                f"cluster near {loc} has {m} eigenvalues but vanishing order {order}"
            )
        residual = max(abs(evaluate(pn, r)) for r in refined + [loc])
        clusters.append(RootCluster(loc, m, float(residual)))
    clusters.sort(key=lambda c: (c.location.real, c.location.imag))
    for i, a in enumerate(clusters):
        for b in clusters[i + 1 :]:
            if abs(a.location - b.location) < 10 * cluster_tol * max(1.0, abs(a.location)):
                raise RootClusterAmbiguity(f"distinct clusters at {a.location} and {b.location} are unresolved")
    return clusters
