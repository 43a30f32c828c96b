"""Curves on cusp tori: homology coordinates and a derived (meridian, longitude) pair."""

from __future__ import annotations

from collections import deque

from .triangulation import VERTICES, CurveStep, PeripheralCurve, Triangulation


class CuspTorus:
    """The triangulated torus around one cusp.

    Sides of the corner triangle (t, v) are named by the face f != v they lie
    in.  A cusp edge is a pair of glued sides; its key is the smaller side.
    """

    def __init__(self, tri: Triangulation, cusp: int):
        self.tri = tri
        self.cusp = cusp
        self.corners = list(tri.cusps[cusp].corners)
        self.edge_key = {}
        for t, v in self.corners:
            for f in VERTICES:
                if f != v:
                    other = tri.corner_neighbor(t, v, f)
                    self.edge_key[(t, v, f)] = min((t, v, f), other)
        self.edges = sorted(set(self.edge_key.values()))
        self._primal = self._primal_basis()

    # -- primal side ----------------------------------------------------

    def ends(self, key) -> tuple:
        """Cusp vertices at the two ends of an edge, in the edge's reference direction."""
        t, v, f = key
        g1, g2 = (g for g in VERTICES if g not in (v, f))
        return self.tri.edge_end(t, v, g1), self.tri.edge_end(t, v, g2)

    def _primal_basis(self) -> list[dict]:
        """Two primal cycles spanning H_1, as {edge key: +-1} chains (tree-cotree)."""
        vertices = sorted({x for key in self.edges for x in self.ends(key)})
        parent = {vertices[0]: None}
        order = deque([vertices[0]])
        tree = set()
        adj: dict = {x: [] for x in vertices}
        for key in self.edges:
            a, b = self.ends(key)
            adj[a].append((key, b, 1))
            adj[b].append((key, a, -1))
        while order:
            x = order.popleft()
            for key, y, sign in adj[x]:
                if y not in parent:
                    parent[y] = (x, key, sign)
                    tree.add(key)
                    order.append(y)
        # spanning tree of the dual graph avoiding primal tree edges
        first = self.corners[0]
        seen = {first}
        cotree = set()
        order = deque([first])
        while order:
            t, v = order.popleft()
            for f in VERTICES:
                if f == v:
                    continue
                key = self.edge_key[(t, v, f)]
                if key in tree:
                    continue
                u, w, _ = self.tri.corner_neighbor(t, v, f)
                if (u, w) not in seen:
                    seen.add((u, w))
                    cotree.add(key)
                    order.append((u, w))
        leftover = [k for k in self.edges if k not in tree and k not in cotree]
        assert len(leftover) == 2, "cusp cross-section is not a torus"
        cycles = []
        for key in leftover:
            a, b = self.ends(key)
            chain = {key: 1}
            # path b -> root -> a closes the loop a -> b
            for x, s in ((b, 1), (a, -1)):
                while parent[x] is not None:
                    px, k, sign = parent[x]
                    # tree edge traversed from x towards px
                    chain[k] = chain.get(k, 0) - sign * s
                    x = px
            cycles.append({k: c for k, c in chain.items() if c})
        return cycles

    def crossing(self, step: CurveStep, key) -> int:
        """Sign with which ``step`` leaves its triangle across edge ``key`` (0 if it does not)."""
        if self.edge_key[(step.tet, step.vertex, step.exit)] != key:
            return 0
        t, v, f = key
        g1, g2 = (g for g in VERTICES if g not in (v, f))
        if (step.tet, step.vertex, step.exit) == key:
            return self.tri.triangle_orientation(t, v, g1, g2, f)
        # leaving through the partner side means entering across the reference side
        return -self.tri.triangle_orientation(t, v, g1, g2, f)

    def coordinates(self, curve: PeripheralCurve) -> tuple[int, int]:
        """Algebraic intersections of ``curve`` with the two primal basis cycles."""
        out = []
        for chain in self._primal:
            total = 0
            for s in curve.steps:
                key = self.edge_key[(s.tet, s.vertex, s.exit)]
                c = chain.get(key)
                if c:
                    total += c * self.crossing(s, key)
            out.append(total)
        return out[0], out[1]

    def side_direction(self, t: int, v: int, side: int, start: int, end: int) -> int:
        """+1 if running along ``side`` of (t, v) from corner ``start`` to ``end`` follows its edge key."""
        key = self.edge_key[(t, v, side)]
        if (t, v, side) != key:
            _, p = self.tri.glue(t, side)
            start, end = p[start], p[end]
        kt, kv, kf = key
        g1, g2 = (g for g in VERTICES if g not in (kv, kf))
        return 1 if (start, end) == (g1, g2) else -1

    def pushed_chain(self, curve: PeripheralCurve) -> dict:
        """Primal 1-cycle homotopic to ``curve``: each arc slides onto the corner it cuts off."""
        chain: dict = {}
        n = len(curve.steps)
        for i, s in enumerate(curve.steps):
            nxt = curve.steps[(i + 1) % n]
            here = s.cut_off()
            # the shared side joins corners ``here`` and s.enter; where does the next arc sit?
            _, p = self.tri.glue(s.tet, s.exit)
            if p[here] != nxt.cut_off():
                key = self.edge_key[(s.tet, s.vertex, s.exit)]
                sign = self.side_direction(s.tet, s.vertex, s.exit, here, s.enter)
                chain[key] = chain.get(key, 0) + sign
        return {k: c for k, c in chain.items() if c}

    def intersection(self, a: PeripheralCurve, b: PeripheralCurve) -> int:
        """Algebraic intersection number of two normal curves on this torus."""
        chain = self.pushed_chain(b)
        total = 0
        for s in a.steps:
            key = self.edge_key[(s.tet, s.vertex, s.exit)]
            c = chain.get(key)
            if c:
                total += c * self.crossing(s, key)
        return total

    # -- dual side ------------------------------------------------------

    def dual_cycles(self) -> list[PeripheralCurve]:
        """Shortest cycle through each dual edge, as normal curves, shortest first."""
        found = {}
        for key in self.edges:
            t, v, f = key
            u, w, g = self.tri.corner_neighbor(t, v, f)
            path = self._shortest_path((u, w), (t, v), forbid=key)
            if path is None:
                continue
            # path runs (u,w) ... (t,v) as (corner, exit side) pairs; close through key
            curve = self._curve_from_path([((t, v), f)] + path)
            sig = frozenset((s.tet, s.vertex, s.enter, s.exit) for s in curve.steps)
            if sig not in found:
                found[sig] = curve
        return sorted(found.values(), key=lambda c: (len(c.steps), [(s.tet, s.vertex, s.enter, s.exit) for s in c.steps]))

    def _shortest_path(self, start, goal, forbid):
        prev = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == goal:
                break
            t, v = node
            for f in VERTICES:
                if f == v or self.edge_key[(t, v, f)] == forbid:
                    continue
                u, w, _ = self.tri.corner_neighbor(t, v, f)
                if (u, w) not in prev:
                    prev[(u, w)] = (node, f)
                    queue.append((u, w))
        if goal not in prev:
            return None
        steps = []
        node = goal
        while prev[node] is not None:
            before, f = prev[node]
            steps.append((before, f))
            node = before
        return steps[::-1]

    def _curve_from_path(self, hops) -> PeripheralCurve:
        """hops: cyclic list of (corner, exit side); the entry side follows from the previous hop."""
        steps = []
        n = len(hops)
        for i, ((t, v), f) in enumerate(hops):
            (pt, pv), pf = hops[i - 1]
            _, _, enter = self.tri.corner_neighbor(pt, pv, pf)
            steps.append(CurveStep(t, v, enter, f))
        if any(s.enter == s.exit for s in steps):
            return PeripheralCurve(self.cusp, ())
        assert n == len(steps)
        return PeripheralCurve(self.cusp, tuple(steps))


def derive_cusp_basis(tri: Triangulation, cusp: int) -> tuple[PeripheralCurve, PeripheralCurve]:
    """A pair of simple normal curves meeting algebraically once.

    Both are cycles in the dual graph of the cusp triangulation, so each
    passes through any cusp triangle at most once.
    """
    torus = CuspTorus(tri, cusp)
    cycles = [c for c in torus.dual_cycles() if c.steps]
    mu = next(c for c in cycles if torus.coordinates(c) != (0, 0))
    for lam in cycles:
        d = torus.intersection(mu, lam)
        if d in (1, -1):
            # same handedness as SnapPea's peripheral curves: iota(mu, lambda) = -1
            if d == 1:
                lam = lam.reversed()
            return mu, lam
    raise AssertionError("no dual cycle completes a basis")


def cusp_bases(tri: Triangulation) -> tuple[dict, bool]:
    """Peripheral bases per cusp, and whether they were derived internally."""
    if tri.peripheral is not None:
        return dict(tri.peripheral), False
    return {k: derive_cusp_basis(tri, k) for k in range(tri.num_cusps)}, True
