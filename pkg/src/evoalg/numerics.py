"""Shared numerical machinery: damped least squares and low-discrepancy starts."""

from __future__ import annotations

import numpy as np

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def halton(index: int, dim: int) -> np.ndarray:
    """Point `index` (1-based) of the Halton sequence in [0,1)^dim."""
    out = np.empty(dim)
    for d in range(dim):
        base = _PRIMES[d % len(_PRIMES)]
        f, x, i = 1.0, 0.0, index
        while i > 0:
            f /= base
            x += f * (i % base)
            i //= base
        out[d] = x
    return out


def halton_box(index: int, dim: int, lo: float, hi: float) -> np.ndarray:
    return lo + (hi - lo) * halton(index, dim)


def levenberg_marquardt(
    residual,
    jacobian,
    x0,
    *,
    max_iter: int = 80,
    lam0: float = 1e-3,
    stop_norm: float = 0.0,
    step_tol: float = 1e-14,
):
    """Minimize sum(residual(x)**2) with Levenberg-Marquardt damping.

    residual(x) -> (m,) array, jacobian(x) -> (m, n) array, x0 (n,) array of
    real unknowns.  Returns (x, r, converged) where converged means the
    max-abs residual fell at or below stop_norm.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = np.asarray(residual(x), dtype=float)
    cost = float(r @ r)
    lam = lam0
    for _ in range(max_iter):
        if np.max(np.abs(r)) <= stop_norm:
            return x, r, True
        J = np.asarray(jacobian(x), dtype=float)
        g = J.T @ r
        H = J.T @ J
        accepted = False
        for _ in range(25):
            try:
                step = np.linalg.solve(H + lam * np.eye(H.shape[0]), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_try = x + step
            r_try = np.asarray(residual(x_try), dtype=float)
            cost_try = float(r_try @ r_try)
            if cost_try < cost or not np.isfinite(cost):
                x, r, cost = x_try, r_try, cost_try
                lam = max(lam * 0.3, 1e-14)
                accepted = True
                break
            lam *= 7.0
            if lam > 1e14:
                break
        if not accepted:
            break
        if np.linalg.norm(step) < step_tol * (1.0 + np.linalg.norm(x)):
            break
    return x, r, bool(np.max(np.abs(r)) <= stop_norm)


def cvec_to_real(z: np.ndarray) -> np.ndarray:
    """Interleave a complex vector as [re0, im0, re1, im1, ...]."""
    out = np.empty(2 * len(z))
    out[0::2] = np.real(z)
    out[1::2] = np.imag(z)
    return out


def real_to_cvec(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def complex_jacobian_to_real(dF: np.ndarray) -> np.ndarray:
    """Expand a complex Jacobian dF/dz (m x n) to the real (2m x 2n) Jacobian
    of the interleaved real system, assuming F is complex-analytic in z."""
    m, n = dF.shape
    out = np.zeros((2 * m, 2 * n))
    re = np.real(dF)
    im = np.imag(dF)
    out[0::2, 0::2] = re
    out[0::2, 1::2] = -im
    out[1::2, 0::2] = im
    out[1::2, 1::2] = re
    return out
