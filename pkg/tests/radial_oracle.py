"""Energies of monomial (rotation-invariant) configurations by 1-D integration.

With sections ``c_j z^{p_j}`` every integrand depends on ``u = |z|^2`` only,
``dA = pi du`` after the angular integral, and for ``h(u)`` radial
``(1/pi) dd^c h`` has density ``(1/pi) (u h')'``.  Everything is built
symbolically with sympy and integrated with mpmath tanh-sinh quadrature in
``s = ln u``; none of it shares code with the 2-D grid in ``kslope``.

Run as a script to print the frozen values used in the tests.
"""

from __future__ import annotations

import math

import mpmath as mp
import sympy as sp

u = sp.symbols("u", positive=True)


def radial_energies(exps, weights, t, d, dps=40):
    """Return ``dict(F0, J, I0, nu, volume)`` for sections ``z^{p_j}``, weights ``a_j``."""
    mp.mp.dps = dps
    aN = min(weights)
    q = [a - aN for a in weights]
    tt = sp.Rational(str(t)) if isinstance(t, float) else sp.Integer(t)
    g1 = sum(u**p for p in exps)
    gt = sum(tt ** (2 * qj) * u**p for p, qj in zip(exps, q))
    phi = sp.log(gt) - sp.log(g1) + 2 * aN * sp.log(tt)
    dens1 = sp.diff(u * sp.diff(sp.log(g1), u), u)  # pi * rho_0
    denst = sp.diff(u * sp.diff(sp.log(gt), u), u)
    ric = -sp.diff(u * sp.diff(sp.log(dens1), u), u)  # pi * Ric density

    V = d
    mu = sp.Rational(2, d)

    def integral(expr):
        f = sp.lambdify(u, expr, "mpmath")
        # breakpoints at every crossover scale u = t^{2m}
        inner = [2 * k * math.log(t) for k in range(1, 2 * max(q + [1]) + 2)]
        # the integrands decay like u and 1/u at the two ends; 80 e-folds past the
        # last crossover is far below the working precision
        pts = sorted({min(inner) - 80.0, 0.0, 80.0, *inner})
        return mp.quad(lambda s: f(mp.e**s) * mp.e**s, pts)

    A = integral(phi * dens1)
    B = integral(phi * denst)
    Jint = integral(u * sp.diff(phi, u) ** 2)
    ent = integral(sp.log(denst / dens1) * denst)
    ricp = integral(phi * ric)
    vol = integral(denst)
    F0 = -(A + B) / (2 * V)
    J = Jint / (2 * V)
    I0 = A / V
    nu = ent / V - ricp / V + float(mu) * (A + B) / (2 * V)
    return {k: float(v) for k, v in dict(F0=F0, J=J, I0=I0, nu=nu, volume=vol, ricci=integral(ric)).items()}


CASES = {
    "reparametrization": ((0, 1, 2), (1, 0, -1), 2),
    "collapse": ((0, 1, 2), (2, -1, -1), 2),
    "infinity_zero": ((0, 2, 1), (1, 1, -2), 2),
    "cubic": ((0, 1, 2, 3), (3, 0, -1, -2), 3),
}

if __name__ == "__main__":
    for name, (exps, w, d) in CASES.items():
        for t in (0.1, 0.01):
            print(name, t, radial_energies(exps, w, t, d))
