"""Independent oracles used by the test suite.

Everything here deliberately avoids the library code paths it checks:
quadrature instead of the series kernel, breadth-first orbit enumeration
instead of union-find, explicit surface assembly for links, point-to-point
hyperbolic distances for decorated edge lengths.
"""

import math
import warnings
from itertools import combinations

import numpy as np
from scipy.integrate import IntegrationWarning, quad


def lobachevsky_quadrature(theta):
    """Adaptive quadrature of the defining integral of the Lobachevsky
    function on [0, theta]."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(lambda u: -np.log(np.abs(2.0 * np.sin(u))),
                      0.0, theta, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def orbit_edge_classes(tri):
    """Edge orbits by breadth-first search over the gluing-induced maps."""
    slots = [(t, p) for t in range(tri.n_tets)
             for p in combinations(range(4), 2)]
    neighbors = {s: set() for s in slots}
    for (t, f), (t2, perm) in tri.gluings.items():
        verts = [v for v in range(4) if v != f]
        for a, b in combinations(verts, 2):
            image = tuple(sorted((perm[a], perm[b])))
            neighbors[(t, (a, b))].add((t2, image))
            neighbors[(t2, image)].add((t, (a, b)))
    seen = set()
    orbits = []
    for s in slots:
        if s in seen:
            continue
        frontier = [s]
        orbit = set()
        while frontier:
            cur = frontier.pop()
            if cur in orbit:
                continue
            orbit.add(cur)
            frontier.extend(neighbors[cur] - orbit)
        seen |= orbit
        orbits.append(frozenset(orbit))
    return orbits


def assemble_links(tri):
    """Vertex links by explicit surface assembly.

    Returns a list of (chi, n_triangles) per vertex class, computed from
    scratch: triangles are corners (t, v), edges are glued side pairs,
    vertices are breadth-first orbits of triangle corners.
    """
    corners = [(t, v) for t in range(tri.n_tets) for v in range(4)]

    def corner_neighbors(item):
        t, v, u = item
        out = []
        for f in range(4):
            if f in (v, u):
                continue
            t2, perm = tri.gluings[(t, f)]
            out.append((t2, perm[v], perm[u]))
        return out

    def orbit(start, nbrs):
        todo, seen = [start], {start}
        while todo:
            cur = todo.pop()
            for nxt in nbrs(cur):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return frozenset(seen)

    def vert_neighbors(item):
        t, v = item
        out = []
        for f in range(4):
            if f != v:
                t2, perm = tri.gluings[(t, f)]
                out.append((t2, perm[v]))
        return out

    seen = set()
    classes = []
    for c in corners:
        if c in seen:
            continue
        group = orbit(c, vert_neighbors)
        seen |= group
        classes.append(sorted(group))

    results = []
    for group in classes:
        faces = len(group)
        sides = set()
        for t, v in group:
            for f in range(4):
                if f == v:
                    continue
                t2, perm = tri.gluings[(t, f)]
                sides.add(frozenset([(t, v, f), (t2, perm[v], perm[f])]))
        edges = len(sides)
        corner_set = {(t, v, u) for t, v in group for u in range(4) if u != v}
        vertex_orbits = set()
        done = set()
        for item in corner_set:
            if item in done:
                continue
            o = orbit(item, corner_neighbors)
            done |= o
            vertex_orbits.add(o)
        chi = len(vertex_orbits) - edges + faces
        results.append((chi, faces))
    return results


def halfspace_distance(p1, p2):
    """Hyperbolic distance between points ((x, y), h) of upper half-space,
    with x+iy the boundary coordinate and h > 0 the height."""
    (z1, h1), (z2, h2) = p1, p2
    num = abs(z1 - z2) ** 2 + (h1 - h2) ** 2
    return math.acosh(1.0 + num / (2.0 * h1 * h2))


def decorated_edge_length_oracle(p, q, dp, dq):
    """Signed horosphere distance along the geodesic between boundary points
    p, q with horosphere diameters dp, dq, via explicit intersection points.

    The geodesic is the semicircle of radius R = |q - p| / 2; the horosphere
    at p (Euclidean sphere of diameter dp tangent at p) meets it at the
    half-angle parameter tan(phi/2) = 2R / dp measured from q's side.
    """
    r_big = abs(q - p) / 2.0
    m = (p + q) / 2.0
    u = (q - p) / abs(q - p)

    def intersection(vertex, diam):
        # angle on the semicircle measured from the opposite endpoint
        phi = 2.0 * math.atan2(2.0 * r_big, diam)
        direction = u if vertex == p else -u
        return (m + r_big * math.cos(phi) * direction,
                r_big * math.sin(phi))

    a = intersection(p, dp)
    b = intersection(q, dq)
    dist = halfspace_distance(a, b)
    overlap = abs(q - p) ** 2 < dp * dq  # horospheres intersect
    return -dist if overlap else dist


def aitken_limit(values):
    """Aitken extrapolation of a sequence tending to a limit."""
    d1 = values[1] - values[0]
    d2 = values[2] - values[1]
    if d2 == d1:
        return values[2]
    return values[2] - d2 * d2 / (d2 - d1)
