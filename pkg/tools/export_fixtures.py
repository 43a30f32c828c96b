"""Write census fixtures used by the test-suite.

Needs snappy and regina; neither is a runtime dependency of the package.
Run once from the repository root:  python3 tools/export_fixtures.py
"""
import json
import pathlib
import warnings

warnings.filterwarnings("ignore")

import regina  # noqa: E402
import snappy  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CENSUS = {
    "fig8": "4_1",
    "K7a1": "K7a1",
    "L9a46": "L9a46",
    "L13n124": "L13n124",
}


def write_tri(name, manifold):
    path = OUT / f"{name}.tri"
    path.write_text(manifold._to_string())
    print("wrote", path)


def regina_quads(surface, ntet):
    return [int(surface.quads(t, q).stringValue()) for t in range(ntet) for q in range(3)]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, census in CENSUS.items():
        write_tri(name, snappy.Manifold(census))

    filled = snappy.Manifold("L12n1738(0,0)(0,0)(0,1)").filled_triangulation()
    write_tri("L12n1738_filled", filled)

    # The two L13n124 vertex surfaces discussed in the examples, by Regina index.
    M = snappy.Manifold("L13n124")
    T = regina.SnapPeaTriangulation(M._to_string())
    ns = regina.NormalSurfaces(T, regina.NS_QUAD, regina.NS_VERTEX)
    n = T.size()
    vectors = {"S": regina_quads(ns.surface(500), n), "R": regina_quads(ns.surface(127), n)}
    (OUT / "L13n124_surfaces.json").write_text(json.dumps(vectors) + "\n")
    print("wrote L13n124_surfaces.json")


if __name__ == "__main__":
    main()
