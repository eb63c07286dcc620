"""The Lobachevsky function, the volume functional, and its derivatives.

Evaluation runs through the selected kernel backend (compiled or NumPy).
Volume is half the sum of Lobachevsky values over all slots; derivatives
along segments use the difference vector a = q - p with the 0*log(0)
convention, and the one-sided limit at a boundary point splits into a smooth
part and an entropy part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

KERNEL_BACKEND = _kernels.BACKEND

# |sin| below this is treated as an exact zero of sin (angle in {0, pi})
_SIN_ZERO = 1e-12


def lobachevsky(theta):
    """Lobachevsky function -integral_0^theta log|2 sin u| du.

    Odd and pi-periodic; accepts scalars or arrays.
    """
    arr = _kernels.lobachevsky(np.atleast_1d(np.asarray(theta, dtype=float)))
    if np.isscalar(theta) or np.ndim(theta) == 0:
        return float(arr[0])
    return arr


def volume(x):
    """Volume of an angle vector: half the sum of Lobachevsky values."""
    return _kernels.volume_half_sum(np.asarray(x, dtype=float))


def volume_gradient(x):
    """Componentwise -0.5 log|2 sin x_i|; +inf at 0 and pi."""
    return 0.5 * _kernels.neg_log_2sin(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class SegmentDerivativeReport:
    t: float
    value: float
    convention_terms: int


@dataclass(frozen=True)
class BoundaryLimitReport:
    value: float
    smooth_part: float
    entropy_part: float


@dataclass(frozen=True)
class EntropyReport:
    lhs: float
    satisfied: bool


def segment_derivative(p, q, t, reduced=True):
    """d/dt of vol((1-t) p + t q) at interior t.

    With ``reduced`` the log|sin| form is used (valid whenever the difference
    vector sums to zero, i.e. for closure pairs); otherwise the raw
    log|2 sin| form.  Slots with p_i = q_i in {0, pi} contribute zero by the
    0*log(0) convention and are counted in ``convention_terms``.
    """
    if not 0.0 < t < 1.0:
        raise ValueError("segment derivative needs t in (0, 1), got %g" % t)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a = q - p
    angles = (1.0 - t) * p + t * q
    s = np.abs(np.sin(angles))
    if not reduced:
        s = 2.0 * s
    zero_a = a == 0.0
    with np.errstate(divide="ignore"):
        terms = np.where(zero_a, 0.0, a * np.log(np.maximum(s, 1e-300)))
    convention = int(np.count_nonzero(zero_a & (np.abs(np.sin(angles))
                                                < _SIN_ZERO)))
    return SegmentDerivativeReport(t, -0.5 * float(np.sum(terms)), convention)


def boundary_derivative_limit(p, q, flat):
    """One-sided derivative limit of vol along the segment from p toward q.

    ``flat`` is the set of slots where p sits at 0 or pi.  The limit value is
    -(smooth_part + entropy_part) / 2 with smooth_part the a log|sin p| sum
    over free slots and entropy_part the a log|a| sum over flat slots.  (The
    log t contributions of the flat slots cancel within each flat tetrahedron
    because the difference vector sums to zero over its triples.)
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a = q - p
    n = p.size
    in_flat = np.zeros(n, dtype=bool)
    if flat is not None:
        idxs = list(flat.indices) if hasattr(flat, "indices") else list(flat)
        in_flat[idxs] = True
    s = np.abs(np.sin(p))
    bad = (~in_flat) & (s < _SIN_ZERO)
    if bad.any():
        raise ValueError(
            "inconsistent flat set: slot %d has angle at {0, pi} but is not "
            "marked flat" % int(np.argmax(bad)))
    smooth = float(np.sum(np.where(in_flat, 0.0, a * np.log(np.maximum(s, 1e-300)))))
    abs_a = np.abs(a)
    with np.errstate(divide="ignore"):
        ent_terms = np.where(in_flat & (abs_a > 0.0),
                             a * np.log(np.maximum(abs_a, 1e-300)), 0.0)
    entropy = float(np.sum(ent_terms))
    return BoundaryLimitReport(-0.5 * (smooth + entropy), smooth, entropy)


def entropy_inequality(x, y, a, b, c, tol=1e-12):
    """The convexity inequality behind the flat-tetrahedron estimate.

    For x, y >= 0 and decorations a, b, c with e^c >= e^a + e^b,

        (x+y) log(x+y) - x log x - y log y - (c-a) x - (c-b) y <= 0,

    with 0 log 0 = 0.  ``satisfied`` is the lhs <= tol check; it carries no
    guarantee when e^c < e^a + e^b.
    """
    for name, v in (("x", x), ("y", y), ("a", a), ("b", b), ("c", c)):
        if v < 0.0:
            raise ValueError("%s must be nonnegative, got %g" % (name, v))

    def xlogx(v):
        return v * np.log(v) if v > 0.0 else 0.0

    lhs = xlogx(x + y) - xlogx(x) - xlogx(y) - (c - a) * x - (c - b) * y
    return EntropyReport(float(lhs), bool(lhs <= tol))
