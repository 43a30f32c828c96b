import json
import warnings
from pathlib import Path

import pytest

from spunnorm import Pipeline, import_snappea, load_native
from spunnorm.quads import ORIENTED, oriented_index
from spunnorm.triangulation import CurveStep, PeripheralCurve, Triangulation

FIXTURES = Path(__file__).parent / "fixtures"

# the figure-8 surface with one quad of types q0_03, q0_12, q1_02
FIG8_VECTOR = [0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0]

_cache: dict = {}


def load(name: str):
    if name not in _cache:
        if name == "fig8":
            tri = load_native((FIXTURES / "fig8.json").read_text())
        else:
            tri = import_snappea((FIXTURES / f"{name}.tri").read_text())
        _cache[name] = tri
    return _cache[name]


_pipes: dict = {}


def pipeline(name: str) -> Pipeline:
    if name not in _pipes:
        _pipes[name] = Pipeline(load(name))
    return _pipes[name]


def l13n124_surfaces():
    data = json.loads((FIXTURES / "L13n124_surfaces.json").read_text())
    return data["S"], data["R"]


def relabel(tri: Triangulation, order, vmaps):
    """Renumber tetrahedra (old t becomes order[t]) and their vertices (v becomes vmaps[t][v]).

    Returns the new triangulation and a function carrying oriented quad vectors across.
    """
    n = tri.num_tets
    inv = [[0] * 4 for _ in range(n)]
    for t in range(n):
        for v in range(4):
            inv[t][vmaps[t][v]] = v
    neighbors = [None] * n
    perms = [None] * n
    for t in range(n):
        row_n, row_p = [None] * 4, [None] * 4
        for f in range(4):
            u, p = tri.glue(t, f)
            nf = vmaps[t][f]
            row_n[nf] = order[u]
            row_p[nf] = tuple(vmaps[u][p[inv[t][w]]] for w in range(4))
        neighbors[order[t]] = tuple(row_n)
        perms[order[t]] = tuple(row_p)
    peripheral = None
    if tri.peripheral is not None:
        def move(curve):
            return PeripheralCurve(curve.cusp, tuple(
                CurveStep(order[s.tet], vmaps[s.tet][s.vertex], vmaps[s.tet][s.enter], vmaps[s.tet][s.exit])
                for s in curve.steps))
        peripheral = {k: (move(m), move(l)) for k, (m, l) in tri.peripheral.items()}
    new = Triangulation(tuple(neighbors), tuple(perms), name=tri.name, peripheral=peripheral)

    def carry(xo):
        out = [0] * (6 * n)
        for i, v in enumerate(xo):
            t, k = divmod(i, 6)
            a, b = ORIENTED[k]
            out[6 * order[t] + oriented_index(vmaps[t][a], vmaps[t][b])] = v
        return out

    return new, carry


@pytest.fixture
def fig8():
    return load("fig8")


@pytest.fixture
def fig8_pipe():
    return pipeline("fig8")


@pytest.fixture(autouse=True)
def _quiet_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


_lifts: dict = {}


def cone_rays(name: str):
    """Admissible cone points whose nonnegative combinations stay in the cone.

    L13n124 (21 tetrahedra) is too large to enumerate in a test run; there
    the orientation lifts of its known surface R stand in for the rays.
    """
    if name == "L13n124":
        if name not in _lifts:
            from spunnorm import orientation_lifts

            _lifts[name] = [tuple(v) for v in orientation_lifts(load(name), l13n124_surfaces()[1])]
        return _lifts[name]
    return [e.vector for e in pipeline(name).qtons.entries]


def cone_point(name: str, rng, terms: int = 3):
    rays = cone_rays(name)
    out = [0] * len(rays[0])
    for _ in range(terms):
        r = rng.choice(rays)
        c = rng.randint(1, 3)
        out = [a + c * b for a, b in zip(out, r)]
    return out


def perturb(v, rng):
    """A nonnegative vector near v, changed in one or two coordinates."""
    out = list(v)
    for _ in range(rng.randint(1, 2)):
        i = rng.randrange(len(out))
        out[i] = max(0, out[i] + rng.choice([-2, -1, 1, 2]))
    return out


def vertex_loops(tri, cusp):
    """Small normal curves around each cusp vertex, read off the trips around edge classes."""
    loops = []
    for e in tri.edges:
        for end in (0, 1):
            steps = []
            for s in e.around:
                v = s.tail if end == 0 else s.head
                steps.append(CurveStep(s.tet, v, s.enter, s.leave))
            if tri.vertex_class[(steps[0].tet, steps[0].vertex)] == cusp:
                loops.append(PeripheralCurve(cusp, tuple(steps)))
    return loops
