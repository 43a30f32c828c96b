import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG8_VECTOR, l13n124_surfaces, load, pipeline, relabel
from spunnorm import InputError, Pipeline, analyze, haken_sum, is_embedded, orientation_lifts, reconstruct
from spunnorm.boundary import num_boundary_components
from spunnorm.quads import forget_orientation, reverse_orientation
from spunnorm.surfaces import surface_type


def test_fig8_immersed_surface(fig8):
    c = reconstruct(fig8, xo=FIG8_VECTOR, expected_euler=-1)
    r = analyze(c)
    assert (r.connected, r.orientable, r.euler, r.boundary_components, r.type) == (True, True, -1, 3, "S_0,3")
    assert c.euler == -1


def test_fig8_embedded_surface_is_punctured_klein_bottle(fig8):
    c = reconstruct(fig8, x=forget_orientation(FIG8_VECTOR))
    r = analyze(c)
    assert (r.connected, r.orientable, r.euler, r.boundary_components) == (True, False, -1, 1)
    assert r.type == "N_2,1"
    assert orientation_lifts(fig8, forget_orientation(FIG8_VECTOR), c) == []


def test_fig8_vector_is_not_embedded(fig8):
    assert not is_embedded(fig8, FIG8_VECTOR)
    assert not is_embedded(fig8, reverse_orientation(FIG8_VECTOR))


def test_zero_vector_is_empty(fig8):
    r = analyze(reconstruct(fig8, xo=[0] * 12))
    assert r.type == "empty" and r.euler == 0


def test_bad_vectors_are_rejected(fig8):
    with pytest.raises(InputError, match="matching"):
        reconstruct(fig8, xo=[1] + [0] * 11)
    with pytest.raises(InputError, match="length"):
        reconstruct(fig8, x=[0] * 5)
    with pytest.raises(InputError, match="integral"):
        reconstruct(fig8, x=[0.5] + [0] * 5)
    doubled = [2 * v for v in FIG8_VECTOR]
    with pytest.raises(InputError, match="forget"):
        reconstruct(fig8, x=forget_orientation(FIG8_VECTOR), xo=doubled)


def test_non_admissible_vector_is_rejected(fig8):
    rays = pipeline("fig8").qtons.entries
    for a in rays:
        for b in rays:
            s = [x + y for x, y in zip(a.vector, b.vector)]
            if any(forget_orientation(s)[3 * t:3 * t + 3].count(0) < 2 for t in range(2)):
                with pytest.raises(InputError, match="admissible"):
                    reconstruct(fig8, xo=s)
                return
    pytest.fail("no mixed sum found")


def test_surface_type_names():
    assert surface_type(-1, 3, True) == (0, "S_0,3")
    assert surface_type(-3, 1, True) == (2, "S_2,1")
    assert surface_type(-1, 1, False) == (2, "N_2,1")
    assert surface_type(0, 0, False) == (2, "N_2,0")


def test_haken_sum():
    assert haken_sum([1, 0, 0, 0, 0, 2], [2, 0, 0, 0, 0, 1]) == [3, 0, 0, 0, 0, 3]
    with pytest.raises(InputError, match="non-admissible"):
        haken_sum([1, 0, 0], [0, 1, 0])
    with pytest.raises(InputError):
        haken_sum([1, 0, 0], [1, 0])


@pytest.mark.parametrize("name", ["fig8", "K7a1"])
def test_euler_characteristic_matches_functional_on_every_ray(name):
    pipe = pipeline(name)
    for e in pipe.qtons.entries:
        r = analyze(reconstruct(pipe.tri, xo=list(e.vector)))
        assert r.euler == e.euler
        assert r.boundary_components == e.boundary_components


def test_euler_characteristic_matches_on_sampled_rays_and_doubles():
    pipe = pipeline("L12n1738_filled")
    rng = random.Random(5)
    for e in rng.sample(pipe.qtons.entries, 20):
        for k in (1, 2):
            v = [k * x for x in e.vector]
            assert reconstruct(pipe.tri, xo=v).euler == k * e.euler


@pytest.mark.parametrize("name", ["fig8", "K7a1"])
def test_immersed_and_embedded_euler_agree(name):
    pipe = pipeline(name)
    for e in pipe.qtons.entries[::3]:
        assert reconstruct(pipe.tri, x=forget_orientation(e.vector)).euler == e.euler


def test_embedded_flag_agrees_with_lifts():
    pipe = pipeline("L12n1738_filled")
    for e in pipe.qtons.entries[:40]:
        x = forget_orientation(e.vector)
        lifts = orientation_lifts(pipe.tri, x)
        assert is_embedded(pipe.tri, e.vector) == (list(e.vector) in lifts)
        for v in lifts:
            assert forget_orientation(v) == x
            assert pipe.matching.oriented_values(v) == [0] * len(pipe.matching.oriented)


@given(st.randoms(use_true_random=False))
@settings(max_examples=8, deadline=None)
def test_topology_survives_relabelling(rng):
    tri = load("K7a1")
    order = list(range(tri.num_tets))
    rng.shuffle(order)
    vmaps = [rng.sample(range(4), 4) for _ in order]
    new, carry = relabel(tri, order, vmaps)
    e = rng.choice(pipeline("K7a1").qtons.entries)
    a = analyze(reconstruct(tri, xo=list(e.vector)))
    b = analyze(reconstruct(new, xo=carry(e.vector)))
    assert a.as_dict() == b.as_dict()


# -- L13n124 surfaces ------------------------------------------------------

@pytest.fixture(scope="module")
def l13():
    return pipeline("L13n124")


def test_l13n124_surface_s(l13):
    S, _ = l13n124_surfaces()
    r = analyze(reconstruct(l13.tri, x=S, expected_euler=l13.angles.chi(S)))
    assert (r.orientable, r.euler, r.boundary_components) == (False, -5, 2)
    assert l13.boundary.spinning(S) == [(-2, 1), (-8, 1)]
    assert orientation_lifts(l13.tri, S) == []


def test_l13n124_surface_r(l13):
    _, R = l13n124_surfaces()
    c = reconstruct(l13.tri, x=R, expected_euler=l13.angles.chi(R))
    r = analyze(c)
    assert (r.orientable, r.euler, r.boundary_components, r.type) == (True, -1, 3, "S_0,3")
    assert l13.boundary.spinning(R) == [(0, 1), (-2, 0)]
    found = []
    for v in orientation_lifts(l13.tri, R, c):
        bc = l13.boundary.classes(v)
        found.append((bc.outward, bc.inward))
        assert num_boundary_components(bc)[1] == 3
    assert (((0, 1), (-1, 0)), ((0, 0), (1, 0))) in found


def test_l13n124_haken_sum(l13):
    S, R = l13n124_surfaces()
    F = haken_sum(R, S)
    r = analyze(reconstruct(l13.tri, x=F, expected_euler=l13.angles.chi(F)))
    assert (r.connected, r.orientable, r.euler, r.boundary_components) == (True, False, -6, 3)
    assert l13.boundary.spinning(F) == [(-2, 2), (-10, 1)]


def test_pipeline_accepts_fresh_triangulation():
    assert Pipeline(load("fig8")).euler(FIG8_VECTOR) == -1
