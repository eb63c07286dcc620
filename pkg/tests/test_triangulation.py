"""Gluing data, parsing, derived combinatorics, and the 2-3 move."""

import pytest

from cuspforge import optimizer, polytope
from cuspforge import triangulation as tr

from conftest import movable_face
from helpers import assemble_links, orbit_edge_classes


# ---------------------------------------------------------------------------
# parsing

def test_parse_format_roundtrip(fig8):
    text = tr.format_triangulation(fig8, comment="roundtrip")
    again = tr.parse_triangulation(text)
    assert again == fig8


def test_parse_ignores_comments_and_blank_lines():
    text = "# header comment\n\ntri 1\ntets 2  # trailing\n" + "\n".join(
        "glue %d %d %d 0123" % (t, f, 1 - t)
        for t in range(2) for f in range(4)) + "\n"
    tri = tr.parse_triangulation(text)
    assert tri.n_tets == 2


@pytest.mark.parametrize("text,fragment", [
    ("", "empty"),
    ("tri 2\ntets 1\n", "tri 1"),
    ("tri 1\n", "tets"),
    ("tri 1\ntets 1\nglue 0 0\n", "glue"),
    ("tri 1\ntets 1\nglue 0 4 0 1032\n", "face index"),
    ("tri 1\ntets 1\nglue 1 0 0 1032\n", "out of range"),
    ("tri 1\ntets 1\nglue 0 0 0 1032\nglue 0 0 0 1032\n", "duplicate"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(tr.ParseError, match=fragment):
        tr.parse_triangulation(text)


def test_parse_error_carries_line_number():
    text = "tri 1\ntets 1\n# fine\nglue 0 0 bogus\n"
    with pytest.raises(tr.ParseError) as exc:
        tr.parse_triangulation(text)
    assert exc.value.line == 4


def test_validation_unglued_face():
    with pytest.raises(tr.TriangulationError, match="unglued"):
        tr.Triangulation(1, {(0, 0): (0, (1, 0, 3, 2))})


def test_validation_non_involutive():
    gluings = {(0, f): (0, (1, 0, 3, 2)) for f in range(4)}
    gluings[(0, 1)] = (0, (1, 0, 2, 3))  # breaks the 0 <-> 1 pairing
    with pytest.raises(tr.TriangulationError, match="non-involutive"):
        tr.Triangulation(1, gluings)


def test_validation_face_glued_to_itself():
    gluings = {(0, f): (0, (0, 1, 2, 3)) for f in range(4)}
    with pytest.raises(tr.TriangulationError, match="itself"):
        tr.Triangulation(1, gluings)


def test_validation_bad_permutation():
    gluings = {(0, f): (0, (1, 1, 3, 2)) for f in range(4)}
    with pytest.raises(tr.TriangulationError, match="non-bijective"):
        tr.Triangulation(1, gluings)


def test_validation_bad_target_tet():
    gluings = {(0, f): (5, (1, 0, 3, 2)) for f in range(4)}
    with pytest.raises(tr.TriangulationError, match="nonexistent"):
        tr.Triangulation(1, gluings)


# ---------------------------------------------------------------------------
# edge classes and vertex links

def test_fig8_edge_classes(fig8):
    classes = tr.edge_classes(fig8)
    assert len(classes) == 2
    assert all(c.degree == 6 for c in classes)
    oracle = sorted(orbit_edge_classes(fig8), key=sorted)
    assert sorted((frozenset(c.members) for c in classes), key=sorted) == oracle


def test_fig8_vertex_link_is_a_torus(fig8):
    links = tr.vertex_links(fig8)
    assert len(links) == 1
    assert links[0].euler_characteristic == 0
    assert links[0].orientable
    assert len(links[0].corners) == 8
    assert tr.is_cusped(fig8)
    assert assemble_links(fig8) == [(0, 8)]


def test_doubled_combinatorics(doubled):
    classes = tr.edge_classes(doubled)
    assert len(classes) == 6
    assert all(c.degree == 2 for c in classes)
    oracle = sorted(orbit_edge_classes(doubled), key=sorted)
    assert sorted((frozenset(c.members) for c in classes),
                  key=sorted) == oracle
    links = tr.vertex_links(doubled)
    assert [l.euler_characteristic for l in links] == [2, 2, 2, 2]
    assert not tr.is_cusped(doubled)
    assert sorted(assemble_links(doubled)) == [(2, 2)] * 4


def test_self_glued_matches_oracles(self_glued):
    classes = tr.edge_classes(self_glued)
    oracle = sorted(orbit_edge_classes(self_glued), key=sorted)
    assert sorted((frozenset(c.members) for c in classes),
                  key=sorted) == oracle
    links = tr.vertex_links(self_glued)
    assert sorted((l.euler_characteristic, len(l.corners)) for l in links) \
        == sorted(assemble_links(self_glued))


# ---------------------------------------------------------------------------
# incidence

def test_incidence_ordering_and_triples(fig8_idx):
    assert fig8_idx.size == 12
    assert fig8_idx.entries[:6] == tuple((0, p) for p in tr.VERTEX_PAIRS)
    assert len(fig8_idx.triples) == 8
    for t in range(2):
        for v in range(4):
            triple = fig8_idx.triples[4 * t + v]
            assert len(triple) == 3
            for slot in triple:
                pair = fig8_idx.entries[slot][1]
                assert v in pair


def test_incidence_opposite_is_an_involution(fig8_idx):
    for i, j in enumerate(fig8_idx.opposite):
        assert fig8_idx.opposite[j] == i
        t_i, p_i = fig8_idx.entries[i]
        t_j, p_j = fig8_idx.entries[j]
        assert t_i == t_j
        assert set(p_i) | set(p_j) == {0, 1, 2, 3}


def test_incidence_edge_partition(fig8_idx):
    assert sorted(s for members in fig8_idx.edges for s in members) \
        == list(range(12))
    for slot in range(12):
        assert slot in fig8_idx.edges[fig8_idx.edge_of[slot]]


# ---------------------------------------------------------------------------
# 2-3 move

def test_pachner_23_counts_and_links(fig8):
    moved = tr.pachner_23(fig8, movable_face(fig8))
    assert moved.n_tets == 3
    assert len(tr.edge_classes(moved)) == 3
    before = sorted(l.euler_characteristic for l in tr.vertex_links(fig8))
    after = sorted(l.euler_characteristic for l in tr.vertex_links(moved))
    assert before == after


def test_pachner_23_result_revalidates(fig8):
    moved = tr.pachner_23(fig8, movable_face(fig8))
    # construction re-runs full validation; also survive a text roundtrip
    again = tr.parse_triangulation(tr.format_triangulation(moved))
    assert again == moved


def test_pachner_23_rejects_self_glued_face(self_glued):
    with pytest.raises(tr.TriangulationError, match="self-gluing"):
        tr.pachner_23(self_glued, (0, 0))


def test_pachner_23_preserves_maximal_volume(fig8, fig8_sys, fig8_optimum):
    moved = tr.pachner_23(fig8, movable_face(fig8))
    sys2 = polytope.build_constraints(tr.incidence(moved))
    res = optimizer.maximize_volume(sys2)
    assert res.status == "converged"
    assert abs(res.volume - fig8_optimum.volume) < 1e-7


def test_five_move_chain(fig8):
    tri = fig8
    for _ in range(5):
        tri = tr.pachner_23(tri, movable_face(tri))
    assert tri.n_tets == 7
    links_before = sorted(l.euler_characteristic
                          for l in tr.vertex_links(fig8))
    links_after = sorted(l.euler_characteristic for l in tr.vertex_links(tri))
    assert links_before == links_after
    assert len(tr.edge_classes(tri)) == 7
