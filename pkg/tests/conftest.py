import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cuspforge import optimizer, polytope, triangulation  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data")

# Two tetrahedra glued by the identity along all four faces: six edge
# classes of degree two and four spherical vertex links, so the angle
# equalities are inconsistent with the box (empty closure).
DOUBLED_TEXT = "tri 1\ntets 2\n" + "".join(
    "glue %d %d %d 0123\n" % (t, f, 1 - t) for t in range(2) for f in range(4))

# One tetrahedron with faces 0-1 and 2-3 self-identified through the
# involution (1 0 3 2).
SELF_GLUED_TEXT = "tri 1\ntets 1\n" + "".join(
    "glue 0 %d 0 1032\n" % f for f in range(4))


@pytest.fixture(scope="session")
def fig8_path():
    return os.path.join(DATA_DIR, "fig8.tri")


@pytest.fixture(scope="session")
def fig8(fig8_path):
    with open(fig8_path) as fh:
        return triangulation.parse_triangulation(fh.read(), label="fig8")


@pytest.fixture(scope="session")
def fig8_idx(fig8):
    return triangulation.incidence(fig8)


@pytest.fixture(scope="session")
def fig8_sys(fig8_idx):
    return polytope.build_constraints(fig8_idx)


@pytest.fixture(scope="session")
def fig8_center(fig8_sys):
    """The regular point: every angle pi/3."""
    return np.full(fig8_sys.dim, np.pi / 3.0)


@pytest.fixture(scope="session")
def fig8_optimum(fig8_sys):
    res = optimizer.maximize_volume(fig8_sys)
    assert res.status == "converged"
    return res


@pytest.fixture(scope="session")
def doubled():
    return triangulation.parse_triangulation(DOUBLED_TEXT, label="doubled")


@pytest.fixture(scope="session")
def self_glued():
    return triangulation.parse_triangulation(SELF_GLUED_TEXT,
                                             label="self-glued")


@pytest.fixture()
def doubled_path(tmp_path):
    path = tmp_path / "doubled.tri"
    path.write_text(DOUBLED_TEXT)
    return str(path)


def movable_face(tri):
    """First face shared by two distinct tetrahedra (2-3 move applicable)."""
    for t in range(tri.n_tets):
        for f in range(4):
            if tri.gluings[(t, f)][0] != t:
                return (t, f)
    raise AssertionError("no movable face")
