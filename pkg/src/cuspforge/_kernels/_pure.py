"""NumPy implementation of the hot kernels.

Used when the compiled extension is unavailable (or when CUSPFORGE_PURE=1).
Both backends expose the same three functions and agree to ~1e-15.
"""

import numpy as np

from ._coeffs import SERIES_COEFFS

BACKEND = "pure"

_HALF_PI = 0.5 * np.pi


def _series(phi):
    """Accelerated series for Lob on [0, pi/2]; phi must be positive."""
    r = (phi / np.pi) ** 2
    acc = np.zeros_like(phi)
    rk = np.ones_like(phi)
    for c in SERIES_COEFFS:
        rk = rk * r
        acc += c * rk
    return phi * (1.0 - np.log(2.0 * phi) + acc)


def lobachevsky(theta):
    """Lobachevsky function, elementwise on a float64 array."""
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.mod(theta, np.pi)
    flip = phi > _HALF_PI
    phi = np.where(flip, np.pi - phi, phi)
    out = np.zeros_like(phi)
    pos = phi > 0.0
    if np.any(pos):
        out[pos] = _series(phi[pos])
    return np.where(flip, -out, out)


def neg_log_2sin(theta):
    """-log|2 sin(theta)| elementwise; +inf where sin vanishes.

    This is the derivative of the Lobachevsky function and hence (up to the
    factor 1/2) the gradient of the volume functional.
    """
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.mod(theta, np.pi)
    # within rounding error of a zero of sin (the float pi itself included)
    at_zero = np.minimum(phi, np.pi - phi) < 1e-15
    s = np.abs(2.0 * np.sin(theta))
    with np.errstate(divide="ignore"):
        return np.where(at_zero, np.inf, -np.log(np.where(at_zero, 1.0, s)))


def volume_half_sum(x):
    """0.5 * sum of Lobachevsky over a float64 array."""
    return 0.5 * float(np.sum(lobachevsky(x)))
