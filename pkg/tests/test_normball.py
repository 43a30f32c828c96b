import json
import re
from fractions import Fraction

import pytest

from conftest import FIG8_VECTOR, pipeline
from spunnorm import InputError, Pipeline, compute_norm_ball
from spunnorm import export
from spunnorm.exact import det_int, solve
from spunnorm.quads import reverse_orientation

LABEL = re.compile(r"^(\(1/\d+\)\*)?[SN]_\d+,\d+ at \((-?\d+(/\d+)?)(,-?\d+(/\d+)?)*\)$")


@pytest.fixture(scope="module")
def l12():
    pipe = pipeline("L12n1738_filled")
    return pipe, compute_norm_ball(pipe)


@pytest.fixture(scope="module")
def k7():
    pipe = pipeline("K7a1")
    return pipe, compute_norm_ball(pipe)


def test_fig8_table_contains_the_reference_vector_and_its_mirror(fig8_pipe):
    vectors = {e.vector: e for e in fig8_pipe.qtons.entries}
    for v in (tuple(FIG8_VECTOR), tuple(reverse_orientation(FIG8_VECTOR))):
        assert v in vectors and vectors[v].euler == -1


def test_fig8_upper_bound(fig8_pipe):
    ball = compute_norm_ball(fig8_pipe)
    assert not ball.certified
    assert ball.bound == 1
    assert [v.label for v in ball.vertices] == ["S_0,3 at (-1)", "S_0,3 at (1)"]
    assert not any(v.embedded for v in ball.vertices)
    assert any("not a certified" in n for n in ball.notes)


def test_k7a1_upper_bound(k7):
    pipe, ball = k7
    assert not ball.certified
    assert ball.bound == 3
    assert [v.label for v in ball.vertices] == ["(1/3)*S_2,1 at (-1/3)", "(1/3)*S_2,1 at (1/3)"]
    for v in ball.vertices:
        assert not v.embedded
        assert pipe.qtons[v.index].ends_embedded


def test_l12n1738_octahedron_up_to_unimodular_change(l12):
    pipe, ball = l12
    assert ball.certified and ball.basis == "simplicial"
    poly = ball.polytope
    assert len(poly.vertices) == 6 and len(poly.facets) == 8
    rec = {v.coordinates: v for v in ball.vertices}
    half = [v for v in ball.vertices if v.surface == "S_2,0"]
    assert len(half) == 2 and all(v.scale == Fraction(1, 2) for v in half)
    sphere = [v for v in ball.vertices if v.surface == "S_0,3"]
    assert len(sphere) == 4 and all(v.scale == 1 for v in sphere)
    assert all(v.embedded for v in ball.vertices)
    # columns a, b, c with a, b carried by S_0,3 and c by (1/2) S_2,0
    a = sphere[0].coordinates
    b = next(v.coordinates for v in sphere if v.coordinates != a and v.coordinates != tuple(-x for x in a))
    c = half[0].coordinates
    for p in (a, b, c):
        assert tuple(-x for x in p) in rec
    target = [[1, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 2)]]
    cols = [list(r) for r in zip(a, b, c)]
    # G cols = target  <=>  cols^T G^T = target^T
    gt = [solve([list(r) for r in zip(*cols)], [target[i][j] for j in range(3)]).solution for i in range(3)]
    assert all(Fraction(x).denominator == 1 for row in gt for x in row)
    assert abs(det_int([[int(x) for x in row] for row in gt])) == 1


def test_ball_is_symmetric_and_normalised(l12):
    _, ball = l12
    poly = ball.polytope
    verts = set(poly.vertices)
    assert {tuple(-x for x in v) for v in verts} == verts
    for v in poly.vertices:
        gauge = max(sum(a * b for a, b in zip(nrm, v)) / off for nrm, off in poly.facets)
        assert gauge == 1


def test_every_qtons_point_lies_in_the_ball(l12):
    pipe, ball = l12
    for e in pipe.qtons.entries:
        if e.point is not None:
            assert ball.polytope.contains(e.point)


def test_vertices_are_realised_by_their_representatives(l12):
    pipe, ball = l12
    for v in ball.vertices:
        e = pipe.qtons[v.index]
        assert e.point == v.coordinates
        assert v.scale == Fraction(1) / -e.euler
        assert LABEL.match(v.label), v.label


@pytest.mark.parametrize("name", ["fig8", "K7a1", "L12n1738_filled"])
def test_table_invariants(name):
    pipe = pipeline(name)
    table = pipe.qtons
    vectors = {e.vector for e in table.entries}
    for e in table.entries:
        assert e.euler <= 0 and e.euler.denominator == 1
        assert tuple(reverse_orientation(e.vector)) in vectors
        assert pipe.matching.oriented_values(e.vector) == [0] * len(pipe.matching.oriented)
    assert [e.vector for e in table.entries] == sorted(vectors)


def test_scaling_leaves_the_point_unchanged(l12):
    pipe, _ = l12
    for e in pipe.qtons.entries[:30]:
        if e.euler == 0:
            continue
        v3 = [3 * x for x in e.vector]
        coords = pipe.coordinates(v3)
        assert tuple(c / -pipe.euler(v3) for c in coords) == e.point


def test_zero_euler_rays_are_noted(l12):
    _, ball = l12
    assert any("Euler characteristic 0" in n for n in ball.notes)


# -- exports --------------------------------------------------------------

def test_off_export(l12):
    _, ball = l12
    lines = export.to_off(ball).splitlines()
    assert lines[0] == "OFF" and lines[1] == "6 8 0"
    faces = lines[8:]
    assert len(faces) == 8 and all(f.split()[0] == "3" for f in faces)


def test_off_needs_three_dimensions(fig8_pipe):
    with pytest.raises(InputError):
        export.to_off(compute_norm_ball(fig8_pipe))


def test_svg_export(l12, fig8_pipe):
    pipe, ball = l12
    svg = export.to_svg(pipe, ball)
    assert "<svg" in svg and svg == export.to_svg(pipe, ball)
    assert "<svg" in export.to_svg(fig8_pipe, compute_norm_ball(fig8_pipe))


def test_json_report_is_deterministic(l12):
    pipe, ball = l12
    first = export.to_json(pipe, ball)
    fresh = Pipeline(pipe.tri)
    assert export.to_json(fresh, compute_norm_ball(fresh)) == first
    data = json.loads(first)
    assert data["certified"] and len(data["vertices"]) == 6 and len(data["facets"]) == 8


def test_edges_of_octahedron(l12):
    _, ball = l12
    assert len(export.edges(ball.polytope)) == 12
