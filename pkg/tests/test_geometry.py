"""Decorated ideal tetrahedra: lengths, arcs, and the length identities."""

import math

import numpy as np
import pytest

from cuspforge import geometry
from cuspforge.triangulation import VERTEX_PAIRS, opposite_pair

from helpers import decorated_edge_length_oracle, halfspace_distance


def test_construction_validates_angles():
    with pytest.raises(ValueError, match="positive"):
        geometry.tetrahedron_from_angles(-0.1, 1.0, math.pi - 0.9)
    with pytest.raises(ValueError, match="sum"):
        geometry.tetrahedron_from_angles(1.0, 1.0, 1.0)


def test_angle_reextraction_roundtrip():
    rng = np.random.default_rng(20)
    for _ in range(100):
        tet = geometry.random_decorated_tetrahedron(rng)
        back = geometry.dihedral_angles(tet)
        np.testing.assert_allclose(back, tet.angles, atol=1e-12)


def test_opposite_edges_carry_equal_angles():
    tet = geometry.tetrahedron_from_angles(0.7, 1.1, math.pi - 1.8)
    for pair in VERTEX_PAIRS:
        assert tet.angle_of(pair) == tet.angle_of(opposite_pair(pair))


def test_set_decoration_validates():
    tet = geometry.tetrahedron_from_angles(0.7, 1.1, math.pi - 1.8)
    with pytest.raises(ValueError):
        geometry.set_decoration(tet, (1.0, -1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        geometry.set_decoration(tet, (1.0, 1.0, 1.0))


def test_edge_lengths_match_halfspace_oracle():
    rng = np.random.default_rng(21)
    for _ in range(200):
        tet = geometry.random_decorated_tetrahedron(rng)
        lengths = geometry.edge_lengths(tet)
        h = tet.decorations[0]
        pts = tet.finite_points()
        diam = tet.decorations[1:]
        for pair in VERTEX_PAIRS:
            a, b = pair
            if a == 0:
                p = pts[b - 1]
                oracle = math.copysign(
                    halfspace_distance((p, h), (p, diam[b - 1])),
                    h - diam[b - 1])
            else:
                oracle = decorated_edge_length_oracle(
                    pts[a - 1], pts[b - 1], diam[a - 1], diam[b - 1])
            assert abs(lengths.of(pair) - oracle) < 1e-9


def test_horocycle_arc_length_relation():
    # along each edge {u, v}, the length equals minus the sum of the log
    # arcs at its two endpoints on the two adjacent faces, halved
    rng = np.random.default_rng(22)
    for _ in range(200):
        tet = geometry.random_decorated_tetrahedron(rng)
        lengths = geometry.edge_lengths(tet)
        arcs = geometry.horocycle_arcs(tet)
        for pair in VERTEX_PAIRS:
            u, v = pair
            faces = opposite_pair(pair)
            s = sum(math.log(arcs.of(f, u)) + math.log(arcs.of(f, v))
                    for f in faces)
            assert abs(lengths.of(pair) + 0.5 * s) < 1e-12


def test_face_cosine_law():
    # on every face, the edge length between two of its vertices equals
    # minus the sum of the log arcs at those vertices on that face
    rng = np.random.default_rng(23)
    for _ in range(200):
        tet = geometry.random_decorated_tetrahedron(rng)
        lengths = geometry.edge_lengths(tet)
        arcs = geometry.horocycle_arcs(tet)
        for face in range(4):
            verts = [v for v in range(4) if v != face]
            for v in verts:
                a, b = [w for w in verts if w != v]
                assert abs(lengths.of((a, b)) + math.log(arcs.of(face, a))
                           + math.log(arcs.of(face, b))) < 1e-12


def test_average_lengths_constant_on_opposite_pairs():
    rng = np.random.default_rng(24)
    tet = geometry.random_decorated_tetrahedron(rng)
    w = geometry.average_lengths(tet)
    for pair in VERTEX_PAIRS:
        assert w.of(pair) == w.of(opposite_pair(pair))


def test_length_identity_spread_tiny():
    rng = np.random.default_rng(25)
    for _ in range(300):
        tet = geometry.random_decorated_tetrahedron(rng)
        rep = geometry.lemma24_report(tet)
        assert rep.spread < 1e-12


def test_length_identity_decoration_invariant():
    # the spread stays tiny under re-decoration; the constant moves
    tet = geometry.tetrahedron_from_angles(0.6, 1.2, math.pi - 1.8)
    rep1 = geometry.lemma24_report(tet)
    tet2 = geometry.set_decoration(tet, (2.0, 0.5, 1.5, 3.0))
    rep2 = geometry.lemma24_report(tet2)
    assert rep1.spread < 1e-12 and rep2.spread < 1e-12
    assert abs(rep1.constant - rep2.constant) > 1e-3


def test_length_identity_rejects_near_flat():
    tet = geometry.tetrahedron_from_angles(1e-8, 1e-8, math.pi - 2e-8)
    with pytest.raises(ValueError, match="flat"):
        geometry.lemma24_report(tet)


def test_triangle_inequality_all_vertices():
    rng = np.random.default_rng(26)
    for _ in range(300):
        tet = geometry.random_decorated_tetrahedron(rng)
        for v in range(4):
            rep = geometry.lemma25_check(tet, v)
            assert rep.satisfied, (tet.angles, v, rep.slack)
    with pytest.raises(ValueError):
        geometry.lemma25_check(tet, 4)


def test_triangle_inequality_degenerate_family():
    eps = 1e-4
    tet = geometry.tetrahedron_from_angles(eps, eps, math.pi - 2.0 * eps)
    w = geometry.average_lengths(tet)
    exps = sorted(math.exp(w.of(p)) for p in ((0, 1), (0, 2), (0, 3)))
    ratio = (exps[0] + exps[1]) / exps[2]
    assert 1.0 <= ratio <= 1.001


def test_random_tetrahedron_respects_min_angle():
    rng = np.random.default_rng(27)
    for _ in range(50):
        tet = geometry.random_decorated_tetrahedron(rng, min_angle=0.05)
        assert min(tet.angles) >= 0.05
        assert all(d > 0 for d in tet.decorations)
