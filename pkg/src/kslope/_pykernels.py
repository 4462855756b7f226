"""Pure numpy implementation of the per-node kernels (fallback backend)."""

import numpy as np


def _horner(coeffs, z):
    # coeffs: (K, L) low-to-high; z: (n,) -> values (K, n)
    acc = np.repeat(coeffs[:, -1:], z.size, axis=1)
    for k in range(coeffs.shape[1] - 2, -1, -1):
        acc = acc * z[None, :] + coeffs[:, k : k + 1]
    return acc


def weighted_log_norm(coeffs, logw, z, want_grad=False):
    """``ln sum_k exp(2 logw_k) |P_k(z)|^2`` and optionally its ``d/dz``.

    Returns ``(lse, grad)``; ``lse`` is ``-inf`` where every term vanishes
    and ``grad`` is None unless requested.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    logw = np.asarray(logw, dtype=np.float64)
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    n = z.size
    if coeffs.shape[0] == 0:
        lse = np.full(n, -np.inf)
        return lse, (np.zeros(n, dtype=np.complex128) if want_grad else None)

    vals = _horner(coeffs, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        logabs = np.log(np.abs(vals))
        terms = 2.0 * logw[:, None] + 2.0 * logabs
        shift = np.max(terms, axis=0)
        finite = np.isfinite(shift)
        safe_shift = np.where(finite, shift, 0.0)
        scaled = np.exp(terms - safe_shift[None, :])
        total = np.sum(scaled, axis=0)
        lse = np.where(finite, safe_shift + np.log(total), -np.inf)

    grad = None
    if want_grad:
        L = coeffs.shape[1]
        if L > 1:
            dcoeffs = coeffs[:, 1:] * np.arange(1, L)[None, :]
            dvals = _horner(dcoeffs, z)
        else:
            dvals = np.zeros_like(vals)
        with np.errstate(divide="ignore", invalid="ignore"):
            logprod = np.log(np.abs(dvals)) + logabs
            mag = np.exp(2.0 * logw[:, None] + logprod - safe_shift[None, :])
            prod = dvals * np.conj(vals)
            phase = np.where(prod != 0, prod / np.abs(prod), 0.0)
            contrib = np.where(np.isfinite(logprod), mag * phase, 0.0)
            grad = np.where(finite, np.sum(contrib, axis=0) / total, 0.0)
    return lse, grad
