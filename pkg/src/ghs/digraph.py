"""Coherent cycles, height functions and nonseparating sphere collections."""
from __future__ import annotations

import itertools
from graphlib import CycleError, TopologicalSorter

from .core import GeneralizedSurface, require_valid
from .errors import CyclicInput, NoCollection


class HeightFn(dict):
    """Map from edge id to a natural number."""


def coherent_cycles(g: GeneralizedSurface) -> list:
    """Every simple directed cycle, as a list of edge ids.

    Each cycle is reported once, starting at its least vertex (in sorted id
    order).  Parallel edges give distinct cycles.
    """
    require_valid(g)
    return _cycles(sorted(g.vertices), g.edges)


def _cycles(order, edges):
    rank = {v: i for i, v in enumerate(order)}
    out_edges = {v: [] for v in order}
    for e in edges:
        out_edges[e.tail].append(e)
    for v in out_edges:
        out_edges[v].sort(key=lambda e: e.id)

    found = []
    for s in order:
        lo = rank[s]
        path, on_path = [], {s}

        def dfs(v):
            for e in out_edges[v]:
                w = e.head
                if w == s:
                    found.append(path + [e.id])
                elif rank[w] > lo and w not in on_path:
                    on_path.add(w)
                    path.append(e.id)
                    dfs(w)
                    path.pop()
                    on_path.discard(w)

        dfs(s)
    return found


def _toposort(vertices, edges):
    ts = TopologicalSorter({v: set() for v in vertices})
    for e in edges:
        ts.add(e.head, e.tail)
    return list(ts.static_order())


def _is_acyclic(vertices, edges) -> bool:
    try:
        _toposort(vertices, edges)
    except CycleError:
        return False
    return True


def _is_connected(vertices, edges) -> bool:
    vertices = set(vertices)
    if not vertices:
        return True
    adj = {v: set() for v in vertices}
    for e in edges:
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    start = min(vertices)
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


def is_acyclic(g: GeneralizedSurface) -> bool:
    require_valid(g)
    return _is_acyclic(g.vertices, g.edges)


def compute_height(g: GeneralizedSurface) -> HeightFn:
    """Longest coherent path from a source, ending with the edge itself."""
    require_valid(g)
    try:
        order = _toposort(sorted(g.vertices), g.edges)
    except CycleError:
        raise CyclicInput("dual digraph has a coherent cycle") from None
    incoming = {v: [] for v in g.vertices}
    for e in g.edges:
        incoming[e.head].append(e)
    depth = {}
    for v in order:
        depth[v] = max((depth[e.tail] + 1 for e in incoming[v]), default=0)
    return HeightFn({e.id: depth[e.tail] + 1 for e in g.edges})


def verify_height(g: GeneralizedSurface, f) -> bool:
    """Check the height-function axioms directly."""
    require_valid(g)
    if set(f) != set(g.edge_map):
        return False
    for e in g.edges:
        value = f[e.id]
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            return False
        if (value % 2 == 1) != e.is_thick:
            return False
    for v in g.vertices:
        plus = g.plus_edge(v)
        below = plus.tail == v
        for e in g.thin_at(v):
            if below and not f[e.id] < f[plus.id]:
                return False
            if not below and not f[e.id] > f[plus.id]:
                return False
    return True


def cycle_sphere_condition(g: GeneralizedSurface) -> bool:
    """Every coherent cycle passes through a thin sphere."""
    require_valid(g)
    if is_acyclic(g):
        return True
    return all(
        any(not g.edge(eid).is_thick and g.edge(eid).genus == 0 for eid in cyc)
        for cyc in coherent_cycles(g)
    )


def is_sphere_collection(g: GeneralizedSurface, p) -> bool:
    """Deleting ``p`` keeps the graph connected and leaves it acyclic."""
    p = set(p)
    if any(g.edge(eid).is_thick or g.edge(eid).genus != 0 for eid in p):
        return False
    kept = [e for e in g.edges if e.id not in p]
    return _is_connected(g.vertices, kept) and _is_acyclic(g.vertices, kept)


def minimal_complete_collection(g: GeneralizedSurface) -> frozenset:
    """Subset-minimal set of thin spheres whose removal leaves a connected DAG.

    Exhaustive: all qualifying subsets are found, the subset-minimal ones kept,
    and the lexicographically least (by sorted edge ids) returned.
    """
    require_valid(g)
    if _is_acyclic(g.vertices, g.edges):
        return frozenset()
    on_cycle = set()
    for cyc in coherent_cycles(g):
        on_cycle.update(cyc)
    # A sphere on no cycle never belongs to a subset-minimal collection.
    candidates = sorted(
        e.id for e in g.thin_edges if e.genus == 0 and e.id in on_cycle
    )
    qualifying = []
    for r in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, r):
            if is_sphere_collection(g, combo):
                qualifying.append(frozenset(combo))
    minimal = [q for q in qualifying if not any(o < q for o in qualifying)]
    if not minimal:
        raise NoCollection("no set of thin spheres breaks every coherent cycle")
    return min(minimal, key=lambda q: tuple(sorted(q)))
