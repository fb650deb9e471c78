"""Seeded random surfaces, split trees and move instances for test harnesses."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .core import (
    BoundaryMark,
    Crossing,
    GeneralizedSurface,
    Hosted,
    Role,
    SurfaceEdge,
    TrackedDisc,
    TrackedSphere,
    require_valid,
)
from .thinning import LEAF, Kind, Region, Side, SplitEvent, SplitTree, _events_for


@dataclass(frozen=True)
class Limits:
    """Size bounds for generated surfaces.

    Attributes:
        max_thick: upper bound on the number of thick edges (at least one).
        max_genus: upper bound on thin-surface and boundary genera.
        extra_thin: maximum number of thin edges beyond a spanning tree.
        extra_genus: maximum slack added to a thick genus above its minimum.
        boundary_rate: chance that a compressionbody gets a boundary mark.
        loops: number of thin spheres added against the layering (cycles).
        spheres: number of tracked spheres to place (when possible).
        discs: number of tracked discs to place (when possible).
    """

    max_thick: int = 4
    max_genus: int = 2
    extra_thin: int = 2
    extra_genus: int = 2
    boundary_rate: float = 0.2
    loops: int = 0
    spheres: int = 0
    discs: int = 0


def _thin_genus(rng, limits):
    return 0 if rng.random() < 0.6 else rng.randint(1, max(1, limits.max_genus))


def random_surface(seed, limits: Optional[Limits] = None) -> GeneralizedSurface:
    """Valid surface built from a random layered DAG; acyclic unless ``loops``."""
    limits = limits or Limits()
    rng = random.Random(seed)
    n = rng.randint(1, max(1, limits.max_thick))
    level = list(range(n))
    rng.shuffle(level)
    lo = [f"L{i}" for i in range(n)]  # tail of thick i, below it
    hi = [f"U{i}" for i in range(n)]  # head of thick i, above it

    thin = []

    def add_thin(i, j, genus, prefix="F"):
        # thin surface from the top of thick i into the bottom of thick j
        thin.append(SurfaceEdge(f"{prefix}{len(thin)}", Role.THIN, genus, hi[i], lo[j]))

    order = list(range(n))
    rng.shuffle(order)
    for k in range(1, n):
        a, b = order[k], order[rng.randrange(k)]
        i, j = (a, b) if level[a] < level[b] else (b, a)
        add_thin(i, j, _thin_genus(rng, limits))
    if n > 1:
        for _ in range(rng.randint(0, limits.extra_thin)):
            a, b = rng.sample(range(n), 2)
            i, j = (a, b) if level[a] < level[b] else (b, a)
            add_thin(i, j, _thin_genus(rng, limits))
    loops = []
    for k in range(limits.loops):
        i = rng.randrange(n)
        higher = [j for j in range(n) if level[j] >= level[i]]
        j = rng.choice(higher)
        # against the layering: from the top of j (higher or equal) into the bottom of i
        loops.append(SurfaceEdge(f"P{k}", Role.THIN, 0, hi[j], lo[i]))

    boundaries = []
    for v in sorted(lo + hi):
        if rng.random() < limits.boundary_rate:
            boundaries.append(BoundaryMark(f"B{len(boundaries)}", rng.randint(1, max(1, limits.max_genus)), v))

    minus = {v: 0 for v in lo + hi}
    for e in thin:
        minus[e.tail] += e.genus
        minus[e.head] += e.genus
    for b in boundaries:
        minus[b.vertex] += b.genus
    thick = [
        SurfaceEdge(f"H{i}", Role.THICK, max(minus[lo[i]], minus[hi[i]]) + rng.randint(0, limits.extra_genus),
                    lo[i], hi[i])
        for i in range(n)
    ]
    edges = thick + thin + loops
    g = GeneralizedSurface.build(edges, boundaries, vertices=set(lo + hi))
    g = add_tracked(g, rng, limits.spheres, limits.discs)
    return require_valid(g)


def add_tracked(g: GeneralizedSurface, rng: random.Random, spheres: int, discs: int) -> GeneralizedSurface:
    """Place hosted spheres around thin spheres, and discs on boundary marks.

    Every thin sphere is cut off by at most one tracked sphere.
    """
    free = {}
    for v in sorted(g.vertices):
        free[v] = sorted(e.id for e in g.thin_at(v) if e.genus == 0)
    used = set()
    out = list(g.spheres)
    for k in range(spheres):
        hosts = [v for v in sorted(free) if [e for e in free[v] if e not in used]]
        if not hosts:
            break
        v = rng.choice(hosts)
        pool = [e for e in free[v] if e not in used]
        take = rng.sample(pool, rng.randint(1, len(pool)))
        used.update(take)
        out.append(TrackedSphere(g.fresh_id(f"S{k}"), Hosted(v, frozenset(take))))
    disc_list = list(g.discs)
    marks = list(g.boundaries)
    rng.shuffle(marks)
    for k, b in enumerate(marks[:discs]):
        disc_list.append(TrackedDisc(g.fresh_id(f"D{k}"), g.plus_edge(b.vertex).id, 1, b.id))
    return g.replace(spheres=out, discs=disc_list)


# -- split trees -------------------------------------------------------------


def random_region(rng: random.Random, genus: int, budget: int, side_bias=None) -> tuple:
    """Random region of at most ``budget`` events; returns (region, used)."""
    if budget <= 0 or rng.random() < 0.3:
        return LEAF, 0
    side = side_bias(rng) if side_bias else rng.choice(list(Side))
    ev = rng.choice(_events_for(genus, side))
    child_genera = ev.split(genus)
    children, used = [], 1
    for cg in child_genera:
        child, u = random_region(rng, cg, budget - used, side_bias)
        children.append(child)
        used += u
    return Region(ev, tuple(children)), used


def random_tree(rng: random.Random, genus: int, max_events: int = 4) -> SplitTree:
    region, _ = random_region(rng, genus, max_events)
    return SplitTree(genus, region)


def random_type_one_tree(rng: random.Random, genus: int, max_events: int = 4) -> Optional[SplitTree]:
    """A plan compressing on both sides, or None when the genus is too small."""
    if genus < 2:
        return None
    for _ in range(100):
        t = random_tree(rng, genus, max_events)
        if t.is_type_one:
            return t
    first, second = rng.sample(list(Side), 2)
    return SplitTree(genus, Region(SplitEvent(first, Kind.NONSEP),
                                   (Region(SplitEvent(second, Kind.NONSEP), (LEAF,)),)))


def type_two_tree(rng: random.Random, genus: int, semi_side: Side, spheres: int) -> SplitTree:
    """Semi-compressions on one side splitting off ``spheres`` balls, then one compression.

    The compression is a nonseparating one on the full-genus lineage.
    """
    region = Region(SplitEvent(semi_side.opposite, Kind.NONSEP), (LEAF,))
    for _ in range(max(1, spheres)):
        region = Region(SplitEvent(semi_side, Kind.SEMI), (region, LEAF))
    return SplitTree(genus, region)


# -- move instances ----------------------------------------------------------


def insert_product_pair(g: GeneralizedSurface, eid: str, name: str = "pp") -> tuple:
    """Split thin edge ``eid`` by a thick/thin pair bounding two product pieces.

    Returns ``(surface, thick id, new thin id)``; consolidating the thick
    edge with either thin neighbour undoes the insertion.
    """
    F = g.edge(eid)
    taken = set()

    def fresh(base):
        x = g.fresh_id(base, taken)
        taken.add(x)
        return x

    v1, v2 = fresh(f"{name}_a"), fresh(f"{name}_b")
    h, f = fresh(f"{name}_H"), fresh(f"{name}_F")
    edges = [e for e in g.edges if e.id != eid]
    edges += [
        SurfaceEdge(eid, Role.THIN, F.genus, F.tail, v1),
        SurfaceEdge(h, Role.THICK, F.genus, v1, v2),
        SurfaceEdge(f, Role.THIN, F.genus, v2, F.head),
    ]
    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted) and loc.vertex == F.head and eid in loc.encloses:
            loc = Hosted(loc.vertex, (loc.encloses - {eid}) | {f})
        elif isinstance(loc, Crossing) and eid in loc.encloses and g.plus_edge(F.head).id == loc.edge:
            loc = Crossing(loc.edge, loc.count, (loc.encloses - {eid}) | {f})
        spheres.append(TrackedSphere(s.id, loc))
    out = g.replace(vertices=g.vertices | {v1, v2}, edges=edges, spheres=spheres)
    return require_valid(out), h, f


def insert_type_two_site(g: GeneralizedSurface, rng: random.Random, name: str = "t2"):
    """Hang a new thick edge under a thick edge so a type II move applies there.

    Picks a thick edge H of genus >= 1 whose upper side carries genus at most
    g(H) - 1, moves H's lower boundary onto a new thick edge Q, and joins Q to
    H by a thin surface T of genus g(H) plus ``k`` thin spheres.

    Returns ``(surface, H id, T id, k)`` or None if no thick edge qualifies.
    """
    options = []
    for H in g.thick_edges:
        if H.genus >= 1 and sum(g.vertex(H.head).minus_genera) <= H.genus - 1:
            options.append(H)
    if not options:
        return None
    H = rng.choice(options)
    k = rng.randint(0, 2)
    taken = set()

    def fresh(base):
        x = g.fresh_id(base, taken)
        taken.add(x)
        return x

    qa, qb = fresh(f"{name}_lo"), fresh(f"{name}_hi")
    q, t = fresh(f"{name}_Q"), fresh(f"{name}_T")
    lower = g.vertex(H.tail)
    below_genus = sum(lower.minus_genera)
    edges = []
    for e in g.edges:
        if e.head == H.tail and not e.is_thick:
            e = SurfaceEdge(e.id, e.role, e.genus, e.tail, qa)
        edges.append(e)
    edges.append(SurfaceEdge(q, Role.THICK, max(H.genus, below_genus) + rng.randint(0, 1), qa, qb))
    edges.append(SurfaceEdge(t, Role.THIN, H.genus, qb, H.tail))
    for i in range(k):
        edges.append(SurfaceEdge(fresh(f"{name}_s{i}"), Role.THIN, 0, qb, H.tail))
    boundaries = [BoundaryMark(b.id, b.genus, qa if b.vertex == H.tail else b.vertex) for b in g.boundaries]
    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted) and loc.vertex == H.tail:
            loc = Hosted(qa, loc.encloses)
        spheres.append(TrackedSphere(s.id, loc))
    discs = [TrackedDisc(d.id, q if d.crossing == H.id else d.crossing, d.count, d.boundary)
             if g.boundary_map[d.boundary].vertex == H.tail else d for d in g.discs]
    out = GeneralizedSurface(g.vertices | {qa, qb}, edges, boundaries, spheres, discs)
    return require_valid(out), H.id, t, k
