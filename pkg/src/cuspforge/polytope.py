"""The angle-structure polytope and its closure as a linear system.

Points live in R^I ordered by the incidence index: one coordinate per
(tetrahedron, edge) slot.  The closure is cut out by one equality per
per-vertex triple (sum pi), one equality per edge class (sum 2 pi), and the
box bounds 0 <= x_i <= pi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

ORDERING_CONVENTION = "tet-lex;edges=01,02,03,12,13,23"

DEFAULT_BOUNDARY_TOL = 1e-8


@dataclass(frozen=True)
class LinearSystem:
    """Equality rows (triples then edge classes) plus the implicit box."""

    a_eq: np.ndarray
    b_eq: np.ndarray
    n_triple_rows: int
    n_edge_rows: int

    @property
    def dim(self):
        return self.a_eq.shape[1]


@dataclass(frozen=True)
class FlatSet:
    """Slots where a boundary point sits at 0 or pi."""

    indices: frozenset

    def __bool__(self):
        return bool(self.indices)

    def tetrahedra(self):
        return sorted({i // 6 for i in self.indices})

    def is_tetrahedron_closed(self):
        """Flat tetrahedra are flat at every edge: each touched tetrahedron
        must contribute all six of its slots."""
        tets = {i // 6 for i in self.indices}
        return all(6 * t + k in self.indices for t in tets for k in range(6))


@dataclass(frozen=True)
class Membership:
    kind: str  # "interior" | "boundary" | "infeasible"
    flat: FlatSet | None = None
    witness: int | None = None
    equality_violation: float = 0.0


@dataclass(frozen=True)
class InteriorPointResult:
    status: str  # "ok" | "empty-interior" | "empty-closure"
    point: np.ndarray | None
    min_slack: float
    witness: int | None = None


def build_constraints(idx):
    """LinearSystem for an IncidenceIndex: triple rows (rhs pi) first, then
    edge rows (rhs 2 pi), coefficients all 0/1."""
    n = idx.size
    rows = []
    rhs = []
    for triple in idx.triples:
        row = np.zeros(n)
        row[list(triple)] = 1.0
        rows.append(row)
        rhs.append(np.pi)
    for members in idx.edges:
        row = np.zeros(n)
        for slot in members:
            row[slot] += 1.0
        rows.append(row)
        rhs.append(2.0 * np.pi)
    return LinearSystem(np.array(rows), np.array(rhs),
                        len(idx.triples), len(idx.edges))


def equality_residual(sys, x):
    return float(np.max(np.abs(sys.a_eq @ x - sys.b_eq)))


def classify_membership(sys, x, tol=DEFAULT_BOUNDARY_TOL):
    """Interior / boundary(J) / infeasible classification at tolerance tol."""
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.dim,):
        raise ValueError("angle vector has length %d, expected %d"
                         % (x.size, sys.dim))
    violation = equality_residual(sys, x)
    if violation > tol:
        worst = int(np.argmax(np.abs(sys.a_eq @ x - sys.b_eq)))
        return Membership("infeasible", witness=worst,
                          equality_violation=violation)
    below = x < -tol
    above = x > np.pi + tol
    if below.any() or above.any():
        witness = int(np.argmax(below | above))
        return Membership("infeasible", witness=witness,
                          equality_violation=violation)
    at_bound = (x < tol) | (x > np.pi - tol)
    if at_bound.any():
        return Membership("boundary",
                          flat=FlatSet(frozenset(np.flatnonzero(at_bound))),
                          equality_violation=violation)
    return Membership("interior", equality_violation=violation)


def null_space(sys):
    """Orthonormal basis of the homogeneous equality solutions (columns)."""
    return scipy.linalg.null_space(sys.a_eq)


def particular_solution(sys, tol=1e-9):
    """Least-squares solution of the equalities; None when inconsistent."""
    x, *_ = np.linalg.lstsq(sys.a_eq, sys.b_eq, rcond=None)
    if equality_residual(sys, x) > tol:
        return None
    return x


def interior_point(sys, tol=1e-9):
    """Maximize the minimum slack min_i min(x_i, pi - x_i) over the
    equality-constrained box (a linear program)."""
    if particular_solution(sys, tol=tol) is None:
        return InteriorPointResult("empty-closure", None, -np.inf)
    n = sys.dim
    # variables z = (x, s); maximize s
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.hstack([sys.a_eq, np.zeros((sys.a_eq.shape[0], 1))])
    a_ub = np.vstack([
        np.hstack([-np.eye(n), np.ones((n, 1))]),        # s - x_i <= 0
        np.hstack([np.eye(n), np.ones((n, 1))]),         # x_i + s <= pi
    ])
    b_ub = np.concatenate([np.zeros(n), np.full(n, np.pi)])
    res = scipy.optimize.linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=sys.b_eq,
        bounds=[(None, None)] * (n + 1), method="highs")
    if not res.success:
        return InteriorPointResult("empty-closure", None, -np.inf)
    x = res.x[:n]
    slacks = np.minimum(x, np.pi - x)
    slack = float(np.min(slacks))
    witness = int(np.argmin(slacks))
    if slack <= 1e-12:
        return InteriorPointResult("empty-interior", x, slack, witness)
    return InteriorPointResult("ok", x, slack, witness)


def face_point(sys, pinned, tol=1e-9):
    """Max-min-slack point on the face with the given slots pinned.

    ``pinned`` maps slot index -> fixed value (typically 0 or pi).  Returns
    an InteriorPointResult whose slack refers to the free coordinates only;
    "empty-closure" when the pinned system is infeasible.
    """
    n = sys.dim
    rows = np.zeros((len(pinned), n))
    vals = np.zeros(len(pinned))
    for k, (i, v) in enumerate(sorted(pinned.items())):
        rows[k, i] = 1.0
        vals[k] = v
    a_eq = np.vstack([sys.a_eq, rows])
    b_eq = np.concatenate([sys.b_eq, vals])
    free = [i for i in range(n) if i not in pinned]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = []
    b_ub = []
    for i in free:
        row = np.zeros(n + 1)
        row[i], row[-1] = -1.0, 1.0
        a_ub.append(row)
        b_ub.append(0.0)
        row = np.zeros(n + 1)
        row[i], row[-1] = 1.0, 1.0
        a_ub.append(row)
        b_ub.append(np.pi)
    res = scipy.optimize.linprog(
        c, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
        A_eq=np.hstack([a_eq, np.zeros((a_eq.shape[0], 1))]), b_eq=b_eq,
        bounds=[(0.0, np.pi)] * n + [(None, None)], method="highs")
    if not res.success:
        return InteriorPointResult("empty-closure", None, -np.inf)
    x = res.x[:n]
    slacks = np.minimum(x[free], np.pi - x[free])
    slack = float(np.min(slacks)) if free else 0.0
    witness = int(free[int(np.argmin(slacks))]) if free else None
    status = "ok" if slack > 1e-12 else "empty-interior"
    return InteriorPointResult(status, x, slack, witness)


def segment(p, q, t):
    """The convex combination (1 - t) p + t q, t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("segment parameter %g outside [0, 1]" % t)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return (1.0 - t) * p + t * q


def difference_vector(p, q):
    """a = q - p; annihilates all homogeneous equality rows when p, q both
    satisfy the inhomogeneous system."""
    return np.asarray(q, dtype=float) - np.asarray(p, dtype=float)


def sample_closure_points(sys, rng, n_samples, start=None,
                          boundary_fraction=0.25):
    """Random points of the closure: random null-space rays from an interior
    point, scaled to a uniform fraction of the distance to the box; a
    ``boundary_fraction`` share goes all the way to the boundary."""
    if start is None:
        res = interior_point(sys)
        if res.point is None:
            raise ValueError("closure is empty")
        start = res.point
    basis = null_space(sys)
    out = []
    for _ in range(n_samples):
        d = basis @ rng.standard_normal(basis.shape[1])
        norm = np.linalg.norm(d)
        if norm < 1e-15:
            out.append(start.copy())
            continue
        d /= norm
        # largest alpha with start + alpha d inside the box
        with np.errstate(divide="ignore"):
            hi = np.where(d > 1e-15, (np.pi - start) / d, np.inf)
            lo = np.where(d < -1e-15, -start / d, np.inf)
        alpha = float(min(np.min(hi), np.min(lo)))
        if rng.uniform() < boundary_fraction:
            t = alpha
        else:
            t = alpha * rng.uniform()
        out.append(start + t * d)
    return out


# ---------------------------------------------------------------------------
# Serialization

def angles_to_json(x):
    """JSON array of coordinates in the deterministic incidence order."""
    return json.dumps({
        "ordering": ORDERING_CONVENTION,
        "angles": [float(v) for v in np.asarray(x, dtype=float)],
    }, indent=2) + "\n"


def angles_from_json(text, expected_size=None):
    data = json.loads(text)
    if isinstance(data, dict):
        values = data["angles"]
    else:
        values = data  # bare array accepted
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise ValueError("angle vector must be a flat array of finite numbers")
    if expected_size is not None and x.size != expected_size:
        raise ValueError("angle vector has length %d, expected %d"
                         % (x.size, expected_size))
    return x
