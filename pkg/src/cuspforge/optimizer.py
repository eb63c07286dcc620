"""Volume maximization over the closed angle-structure polytope.

The equalities are eliminated by a null-space parametrization; ascent runs
as projected gradient with Barzilai-Borwein step initialization and Armijo
backtracking, clipped to the box [0, pi].  The gradient -0.5 log|2 sin x_i|
diverges at the box faces, so near-boundary behaviour is handled by pinning
coordinates to an active set and testing release with the one-sided
derivative limit (the smooth-plus-entropy formula), never with the raw
gradient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import lobachevsky as lob
from . import polytope

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
FLAT_TOL = 1e-8


@dataclass(frozen=True)
class OptimizationResult:
    point: np.ndarray | None
    volume: float
    status: str  # "converged" | "iteration-cap" | "empty-closure"
    flat_tets: tuple
    active_set: polytope.FlatSet
    kkt_residual: float
    iterations: int


@dataclass(frozen=True)
class MaximalityCertificate:
    multipliers: np.ndarray
    active_multipliers: tuple  # of (slot, fitted finite part)
    gradient_residual: float
    signs_ok: bool


@dataclass(frozen=True)
class DominanceReport:
    all_dominated: bool
    worst_gap: float
    worst_directional: float
    witness: np.ndarray | None = None


@dataclass(frozen=True)
class UniquenessReport:
    max_spread: float
    volumes: tuple
    points: tuple = field(repr=False, default=())


def classify_tetrahedra(p, tol=FLAT_TOL):
    """Per-tetrahedron classification: positive / flat / invalid.

    Flat means the (0, 0, pi) pattern on opposite edge pairs; positive means
    all six angles at least tol; anything else is invalid and flags numbers
    that cannot arise at a closure point.
    """
    p = np.asarray(p, dtype=float)
    out = []
    for t in range(p.size // 6):
        six = p[6 * t:6 * t + 6]
        # opposite pairs in slot order: (0,5), (1,4), (2,3)
        pairs_ok = all(abs(six[k] - six[5 - k]) <= tol for k in range(3))
        pair_vals = sorted(0.5 * (six[k] + six[5 - k]) for k in range(3))
        if np.all(six >= tol) and np.all(six <= np.pi - tol):
            out.append("positive")
        elif (pairs_ok and abs(pair_vals[0]) <= tol
              and abs(pair_vals[1]) <= tol
              and abs(pair_vals[2] - np.pi) <= tol):
            out.append("flat")
        else:
            out.append("invalid")
    return out


def _reduced_system(sys, pinned):
    """Particular solution and null-space basis with pinned slots fixed.

    ``pinned`` maps slot -> fixed value (0 or pi).  Returns (x_template,
    free_idx, x_free_particular, basis) or None when inconsistent.
    """
    n = sys.dim
    free = np.array([i for i in range(n) if i not in pinned], dtype=int)
    template = np.zeros(n)
    for i, v in pinned.items():
        template[i] = v
    a_free = sys.a_eq[:, free]
    rhs = sys.b_eq - sys.a_eq @ template
    x_free, *_ = np.linalg.lstsq(a_free, rhs, rcond=None)
    if np.max(np.abs(a_free @ x_free - rhs)) > 1e-8:
        return None
    basis = scipy.linalg.null_space(a_free)
    return template, free, x_free, basis


def _assemble(template, free, x_free):
    x = template.copy()
    x[free] = x_free
    return x


def maximize_volume(sys, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                    seed=0, start=None, flat_tol=FLAT_TOL):
    """Ascend the volume functional to its maximum over the closure.

    Concavity makes any point with vanishing projected gradient (and no
    improving one-sided direction off the active face) a global maximizer up
    to tolerance.
    """
    ip = polytope.interior_point(sys)
    if ip.status == "empty-closure":
        return OptimizationResult(None, float("nan"), "empty-closure", (),
                                  polytope.FlatSet(frozenset()),
                                  float("nan"), 0)
    if start is None:
        start = ip.point
    x = np.clip(np.asarray(start, dtype=float), 0.0, np.pi)

    rng = np.random.default_rng(seed)
    pinned = {}
    # seed the active set from coordinates already stuck at the box
    for i in np.flatnonzero(np.minimum(x, np.pi - x) <= 1e-12):
        pinned[int(i)] = 0.0 if x[i] < 1.0 else np.pi

    red = _reduced_system(sys, pinned)
    if red is None:
        return OptimizationResult(None, float("nan"), "empty-closure", (),
                                  polytope.FlatSet(frozenset()),
                                  float("nan"), 0)
    template, free, xf, basis = red
    # project the start onto the reduced parametrization
    if basis.size:
        xf = xf + basis @ (basis.T @ (x[free] - xf))
    xf = np.clip(xf, 0.0, np.pi)

    def vol_at(xf_):
        return lob.volume(_assemble(template, free, xf_))

    iters = 0
    prev_step = None
    stall = 0
    last_vol = vol_at(xf)
    pin_tol = 1e-7
    status = "iteration-cap"
    while iters < max_iter:
        iters += 1
        x = _assemble(template, free, xf)
        with np.errstate(over="ignore"):
            g = lob.volume_gradient(np.clip(x[free], 1e-300, np.pi))
        g = np.where(np.isfinite(g), g, 1e12 * np.sign(g))
        gu = basis.T @ g
        grad_norm = float(np.linalg.norm(gu, np.inf)) if gu.size else 0.0
        if grad_norm < tol:
            status = "converged"
            break
        d = basis @ gu
        # largest feasible step inside the box for the free coordinates
        with np.errstate(divide="ignore", invalid="ignore"):
            hi = np.where(d > 1e-15, (np.pi - xf) / d, np.inf)
            lo = np.where(d < -1e-15, -xf / d, np.inf)
        alpha_max = float(min(np.min(hi, initial=np.inf),
                              np.min(lo, initial=np.inf)))
        alpha = prev_step if prev_step is not None else 1.0
        alpha = min(alpha, 0.999 * alpha_max)
        gg = float(gu @ gu)
        base = vol_at(xf)
        accepted = False
        for _ in range(60):
            cand = xf + alpha * d
            if vol_at(cand) >= base + 1e-4 * alpha * gg:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            # gradient direction no longer improves at line-search resolution
            status = "converged"
            break
        new_xf = np.clip(xf + alpha * d, 0.0, np.pi)
        # BB step for the next iteration
        x_new = _assemble(template, free, new_xf)
        with np.errstate(over="ignore"):
            g_new = lob.volume_gradient(np.clip(x_new[free], 1e-300, np.pi))
        g_new = np.where(np.isfinite(g_new), g_new, 1e12 * np.sign(g_new))
        s = basis.T @ (new_xf - xf)
        y = basis.T @ (g_new - g)
        sy = float(s @ y)
        prev_step = float(s @ s) / abs(sy) if abs(sy) > 1e-300 else 1.0
        xf = new_xf

        # pin coordinates converging onto the box with outward pressure
        to_pin = []
        for j in np.flatnonzero(np.pi - xf < pin_tol):
            if d[j] > 0:
                to_pin.append((int(free[j]), np.pi))
        for j in np.flatnonzero(xf < pin_tol):
            if d[j] < 0:
                to_pin.append((int(free[j]), 0.0))
        if to_pin:
            for slot, val in to_pin:
                pinned[slot] = val
            red = _reduced_system(sys, pinned)
            if red is None:
                break
            template, free, xf, basis = red
            xf = np.clip(xf, 0.0, np.pi)
            prev_step = None

        v = vol_at(xf)
        if abs(v - last_vol) <= 1e-13 * max(1.0, abs(v)):
            stall += 1
            if stall >= 10:
                status = "converged"
                break
        else:
            stall = 0
        last_vol = v

    x = _assemble(template, free, xf)
    # release test: can leaving the active face still improve?
    if pinned and status == "converged":
        flat = polytope.FlatSet(frozenset(pinned))
        for q in polytope.sample_closure_points(sys, rng, 32, start=ip.point):
            rep = lob.boundary_derivative_limit(x, q, flat)
            if rep.value > 1e-7:
                status = "iteration-cap"  # improving direction left
                break

    with np.errstate(over="ignore"):
        g = lob.volume_gradient(np.clip(x[free], 1e-300, np.pi))
    g = np.where(np.isfinite(g), g, 0.0)
    kkt = float(np.linalg.norm(basis.T @ g, np.inf)) if basis.size else 0.0
    membership = polytope.classify_membership(sys, x, tol=flat_tol)
    active = membership.flat if membership.flat is not None \
        else polytope.FlatSet(frozenset())
    classes = classify_tetrahedra(x, tol=flat_tol)
    flat_tets = tuple(t for t, c in enumerate(classes) if c == "flat")
    return OptimizationResult(x, lob.volume(x), status, flat_tets, active,
                              kkt, iters)


def certify(sys, p, tol=FLAT_TOL, n_probes=200, seed=0):
    """Least-squares KKT certificate at a feasible point.

    Fits the volume gradient over the free coordinates into the span of the
    equality normals.  Active bounds are not certified through the (divergent)
    raw gradient; instead signs_ok additionally requires all sampled one-sided
    derivative limits off the point to be non-improving.
    """
    p = np.asarray(p, dtype=float)
    membership = polytope.classify_membership(sys, p, tol=tol)
    if membership.kind == "infeasible":
        raise ValueError("cannot certify an infeasible point "
                         "(equality violation %g)" % membership.equality_violation)
    free = (p > tol) & (p < np.pi - tol)
    g = lob.volume_gradient(p)
    a_free = sys.a_eq[:, free]
    lam, *_ = np.linalg.lstsq(a_free.T, g[free], rcond=None)
    residual = float(np.linalg.norm(a_free.T @ lam - g[free], np.inf))

    fitted = sys.a_eq.T @ lam
    active = tuple((int(i), float(fitted[i]))
                   for i in np.flatnonzero(~free))

    signs_ok = True
    if membership.kind == "boundary":
        rng = np.random.default_rng(seed)
        flat = membership.flat
        try:
            probes = polytope.sample_closure_points(sys, rng, n_probes)
        except ValueError:
            probes = []
        for q in probes:
            rep = lob.boundary_derivative_limit(p, q, flat)
            if rep.value > 1e-8:
                signs_ok = False
                break
    return MaximalityCertificate(lam, active, residual, signs_ok)


def uniqueness_probe(sys, n_starts, seed=0, tol=DEFAULT_TOL,
                     max_iter=DEFAULT_MAX_ITER):
    """Multi-start consistency check for the uniqueness of the maximizer."""
    rng = np.random.default_rng(seed)
    ip = polytope.interior_point(sys)
    if ip.point is None:
        raise ValueError("closure is empty")
    points = []
    volumes = []
    for k in range(n_starts):
        if k == 0:
            start = ip.point
        else:
            start = polytope.sample_closure_points(
                sys, rng, 1, start=ip.point, boundary_fraction=0.0)[0]
        res = maximize_volume(sys, tol=tol, max_iter=max_iter,
                              seed=seed + k, start=start)
        if res.point is not None:
            points.append(res.point)
            volumes.append(res.volume)
    spread = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            spread = max(spread, float(np.linalg.norm(points[i] - points[j],
                                                      np.inf)))
    return UniquenessReport(spread, tuple(volumes), tuple(points))


def dominance_check(sys, p, n_samples, seed=0, strict_distance=1e-4,
                    directional_tol=1e-10):
    """Sampled verification that p dominates the closure.

    Checks vol(p) >= vol(q) for sampled closure points q (strictly when q is
    farther than ``strict_distance``) and that every one-sided derivative
    limit from p toward q is <= directional_tol.
    """
    p = np.asarray(p, dtype=float)
    membership = polytope.classify_membership(sys, p)
    if membership.kind == "infeasible":
        raise ValueError("reference point is infeasible")
    flat = membership.flat if membership.flat is not None \
        else polytope.FlatSet(frozenset())
    rng = np.random.default_rng(seed)
    vp = lob.volume(p)
    samples = polytope.sample_closure_points(sys, rng, n_samples)
    all_dominated = True
    worst_gap = float("inf")
    worst_dir = float("-inf")
    witness = None
    for q in samples:
        gap = vp - lob.volume(q)
        dist = float(np.linalg.norm(q - p, np.inf))
        if dist > strict_distance:
            worst_gap = min(worst_gap, gap)
            if gap <= 0.0:
                all_dominated = False
                witness = q
        elif gap < -1e-10:
            all_dominated = False
            witness = q
        rep = lob.boundary_derivative_limit(p, q, flat)
        worst_dir = max(worst_dir, rep.value)
        if rep.value > directional_tol:
            all_dominated = False
            witness = q if witness is None else witness
    return DominanceReport(all_dominated, worst_gap, worst_dir, witness)
