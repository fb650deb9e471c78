"""Amalgamation: merging thick surfaces across the thin surfaces between them.

The genus of the merged thick edge is fixed by conservation of netchi::

    g(J) = g(H) + sum(g(P) - 1 for partners) - sum(g(F) - 1 for crossed thin F)

Tracked spheres follow the one-tube-per-thin-surface rule: a sphere cutting
off thin spheres that get crossed ends up meeting J once per crossed sphere
(times its tube count).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

from .core import (
    BoundaryMark,
    Crossing,
    GeneralizedSurface,
    Hosted,
    Pattern,
    Role,
    SurfaceEdge,
    TrackedDisc,
    TrackedSphere,
    is_heegaard,
    require_valid,
)
from .digraph import (
    HeightFn,
    compute_height,
    is_acyclic,
    minimal_complete_collection,
    verify_height,
)
from .errors import (
    CyclicInput,
    InconsistentSpec,
    NotAdjacent,
    NothingToMerge,
    NotSelfAmalgamatable,
    OrientationMismatch,
    RealizabilityViolation,
    TubeBudgetExceeded,
    UnknownId,
    ValidationError,
)


class AmalgSide(enum.Enum):
    """Where the center sits relative to its partners.

    ``PLUS_SIDE_ABOVE``: partners lie below the center; the thin surfaces run
    from each partner's head into the center's tail.  ``PLUS_SIDE_BELOW`` is
    the mirror image.
    """

    PLUS_SIDE_ABOVE = "above"
    PLUS_SIDE_BELOW = "below"


@dataclass(frozen=True)
class AmalgSpec:
    center: str
    partners: tuple
    side: Optional[AmalgSide] = None
    tubes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "partners", tuple(sorted(set(self.partners))))
        tubes = self.tubes.items() if isinstance(self.tubes, dict) else self.tubes
        object.__setattr__(self, "tubes", tuple(sorted((str(k), int(n)) for k, n in tubes)))

    def tube_count(self, eid: str) -> int:
        return dict(self.tubes).get(eid, 1)


def _near_ends(g, center, side):
    """(near vertex of the center, partner end picker)."""
    if side is AmalgSide.PLUS_SIDE_ABOVE:
        return center.tail, (lambda p: p.head)
    return center.head, (lambda p: p.tail)


def _between(g, a, b):
    return [e.id for e in g.thin_at(a) if e.other(a) == b]


def resolve_side(g: GeneralizedSurface, spec: AmalgSpec) -> AmalgSide:
    require_valid(g)
    H = g.edge(spec.center)
    if not H.is_thick:
        raise NotAdjacent(f"center {H.id!r} is not thick")
    if not spec.partners:
        raise NotAdjacent("amalgamation needs at least one partner")
    for pid in spec.partners:
        p = g.edge(pid)
        if not p.is_thick:
            raise NotAdjacent(f"partner {pid!r} is not thick")
        if pid == H.id:
            raise NotAdjacent("the center cannot be its own partner")

    def fits(side):
        near, far = _near_ends(g, H, side)
        return all(_between(g, near, far(g.edge(p))) for p in spec.partners)

    if spec.side is not None:
        if fits(spec.side):
            return spec.side
        other = [s for s in AmalgSide if s is not spec.side][0]
        if fits(other):
            raise OrientationMismatch(f"partners of {H.id!r} lie on the other side")
        raise NotAdjacent(f"some partner shares no thin surface with {H.id!r}")
    sides = [s for s in AmalgSide if fits(s)]
    if len(sides) == 1:
        return sides[0]
    if not sides:
        touching = any(
            _between(g, v, w)
            for pid in spec.partners
            for v in (H.tail, H.head)
            for w in (g.edge(pid).tail, g.edge(pid).head)
        )
        if touching:
            raise OrientationMismatch(f"partners of {H.id!r} do not all lie on one side")
        raise NotAdjacent(f"some partner shares no thin surface with {H.id!r}")
    raise OrientationMismatch(f"partners of {H.id!r} lie on both sides; give the side explicitly")


def crossed_edges(g: GeneralizedSurface, spec: AmalgSpec) -> list:
    side = resolve_side(g, spec)
    H = g.edge(spec.center)
    near, far = _near_ends(g, H, side)
    out = []
    for pid in spec.partners:
        out.extend(_between(g, near, far(g.edge(pid))))
    return sorted(out)


@dataclass
class AmalgResult:
    surface: GeneralizedSurface
    new_edge: str
    crossed: list
    near_vertex: str


def _amalgamate(g: GeneralizedSurface, spec: AmalgSpec) -> AmalgResult:
    side = resolve_side(g, spec)
    H = g.edge(spec.center)
    near, _ = _near_ends(g, H, side)
    crossed = crossed_edges(g, spec)
    crossed_set = set(crossed)
    for eid, n in spec.tubes:
        if eid not in crossed_set:
            raise UnknownId(f"tube count given for {eid!r}, which is not crossed")
        if n < 1:
            raise TubeBudgetExceeded(f"tube count for {eid!r} must be positive")
    extra = sum(spec.tube_count(e) - 1 for e in crossed)
    budget = 2 * g.vertex(near).handle_count
    if extra > budget:
        raise TubeBudgetExceeded(f"{extra} extra tubes exceed 1-handle budget {budget} at {near!r}")

    partners = [g.edge(p) for p in spec.partners]
    thick = [H] + partners
    removed = {e.id for e in thick} | crossed_set
    low = {e.tail for e in thick}
    high = {e.head for e in thick}

    def merge(v):
        if v in low:
            return H.tail
        if v in high:
            return H.head
        return v

    genus = H.genus + sum(p.genus - 1 for p in partners) - sum(g.edge(e).genus - 1 for e in crossed)
    jid = g.fresh_id("J")
    edges = [
        SurfaceEdge(e.id, e.role, e.genus, merge(e.tail), merge(e.head))
        for e in g.edges
        if e.id not in removed
    ]
    edges.append(SurfaceEdge(jid, Role.THICK, genus, H.tail, H.head))
    boundaries = [BoundaryMark(b.id, b.genus, merge(b.vertex)) for b in g.boundaries]

    thick_ids = {e.id for e in thick}
    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted):
            hit = loc.encloses & crossed_set
            if hit:
                loc = Crossing(jid, sum(spec.tube_count(e) for e in hit), loc.encloses - crossed_set)
            else:
                loc = Hosted(merge(loc.vertex), loc.encloses)
        elif loc.edge in thick_ids:
            hit = loc.encloses & crossed_set
            loc = Crossing(jid, loc.count + sum(spec.tube_count(e) for e in hit),
                           loc.encloses - crossed_set)
        spheres.append(TrackedSphere(s.id, loc))
    discs = [
        TrackedDisc(d.id, jid if d.crossing in thick_ids else d.crossing, d.count, d.boundary)
        for d in g.discs
    ]
    vertices = {merge(v) for v in g.vertices}
    out = GeneralizedSurface(frozenset(vertices), edges, boundaries, spheres, discs)
    if not out.report.ok:
        if "realizability" in out.report.codes:
            raise RealizabilityViolation(str(ValidationError(out.report.violations)))
        raise ValidationError(out.report.violations)
    return AmalgResult(out, jid, crossed, near)


def amalgamate(g: GeneralizedSurface, spec: AmalgSpec) -> GeneralizedSurface:
    """Merge ``spec.center`` with its partners into a single thick edge."""
    return _amalgamate(g, spec).surface


# -- height-consistent amalgamation -----------------------------------------


def consistent_partners(g: GeneralizedSurface, f, c: str) -> frozenset:
    """Thick edges across a thin surface from ``c`` that are extremal for ``f``.

    Maximal heights when ``c`` lies below its thick edge, minimal when above.
    """
    require_valid(g)
    if not is_acyclic(g):
        raise CyclicInput("height-consistent partners need an acyclic surface")
    if not verify_height(g, f):
        raise InconsistentSpec("not a height function for this surface")
    candidates = {g.plus_edge(e.other(c)).id for e in g.thin_at(c)}
    if not candidates:
        return frozenset()
    pick = max if g.pattern(c) is Pattern.BELOW else min
    best = pick(f[e] for e in candidates)
    return frozenset(e for e in candidates if f[e] == best)


def spec_at(g: GeneralizedSurface, f, c: str) -> AmalgSpec:
    """The height-consistent amalgamation centered at vertex ``c``."""
    partners = consistent_partners(g, f, c)
    if not partners:
        raise NotAdjacent(f"vertex {c!r} has no thin surfaces")
    side = AmalgSide.PLUS_SIDE_ABOVE if g.pattern(c) is Pattern.BELOW else AmalgSide.PLUS_SIDE_BELOW
    return AmalgSpec(g.plus_edge(c).id, tuple(partners), side)


def _induced(g, f, spec, res: AmalgResult) -> HeightFn:
    H = g.edge(spec.center)
    c = res.near_vertex
    partners = consistent_partners(g, f, c)
    if set(spec.partners) != set(partners):
        raise InconsistentSpec(
            f"partners {sorted(spec.partners)} differ from the extremal set {sorted(partners)}")
    mu = f[spec.partners[0]]
    step = -1 if c == H.tail else 1
    survivors = {e.id for e in g.thin_at(c)} - set(res.crossed)
    out = HeightFn()
    for e in res.surface.edges:
        if e.id == res.new_edge:
            out[e.id] = mu
        elif e.id in survivors:
            out[e.id] = mu + step
        else:
            out[e.id] = f[e.id]
    return out


def induced_height(g: GeneralizedSurface, f, spec: AmalgSpec) -> HeightFn:
    """Height function on the amalgamated surface, centered on J."""
    return _induced(g, f, spec, _amalgamate(g, spec))


@dataclass
class AmalgStep:
    """One entry of an amalgamation log.

    Attributes:
        op: "amalgamate", "selfamalg" or "merge".
        spec: the AmalgSpec, the sphere collection, or the merged object id.
        surface: the surface after the step.
    """

    op: str
    spec: object
    surface: GeneralizedSurface


Chooser = Callable[[GeneralizedSurface, HeightFn, list], str]


def first_vertex(g, f, candidates):
    return candidates[0]


def amalgamation_candidates(g: GeneralizedSurface) -> list:
    """Vertices where a height-consistent amalgamation can be centered."""
    return sorted(v for v in g.vertices if g.thin_at(v))


def fully_amalgamate(g: GeneralizedSurface, height=None, chooser: Optional[Chooser] = None,
                     after_step=None):
    """Amalgamate consistently with a height function until one thick edge is left.

    Args:
        height: starting height function (default: longest-path heights).
        chooser: picks the center vertex among the candidates at each step.
        after_step: optional ``surface -> (surface, [AmalgStep])`` hook run
            after every amalgamation; it may only touch tracked objects.

    Returns:
        ``(surface, log)`` where log is a list of AmalgStep.
    """
    require_valid(g)
    f = compute_height(g) if height is None else HeightFn(height)
    if not verify_height(g, f):
        raise InconsistentSpec("not a height function for this surface")
    chooser = chooser or first_vertex
    log = []
    current = g
    while len(current.thick_edges) > 1:
        c = chooser(current, f, amalgamation_candidates(current))
        spec = spec_at(current, f, c)
        res = _amalgamate(current, spec)
        f = _induced(current, f, spec, res)
        current = res.surface
        log.append(AmalgStep("amalgamate", spec, current))
        if after_step is not None:
            current, extra = after_step(current)
            log.extend(extra)
    return current, log


# -- spherical self-amalgamation --------------------------------------------


def self_amalgamate(g: GeneralizedSurface, p) -> GeneralizedSurface:
    """Tube the single thick surface to itself through each sphere of ``p``."""
    require_valid(g)
    p = frozenset(p)
    thick = g.thick_edges
    if len(thick) != 1:
        raise NotSelfAmalgamatable(f"needs exactly one thick edge, found {len(thick)}")
    H = thick[0]
    thin = {e.id for e in g.thin_edges}
    if not p:
        if thin:
            raise NotSelfAmalgamatable("thin surfaces remain but none were given")
        return g
    if p != thin:
        raise NotSelfAmalgamatable(f"collection {sorted(p)} must be every thin edge {sorted(thin)}")
    for eid in p:
        e = g.edge(eid)
        if e.genus != 0 or {e.tail, e.head} != {H.tail, H.head}:
            raise NotSelfAmalgamatable(f"{eid!r} is not a sphere joining the ends of {H.id!r}")
    new = g.fresh_id("J", [H.id])
    edges = [SurfaceEdge(new, Role.THICK, H.genus + len(p), H.tail, H.head)]
    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted):
            if loc.encloses:
                loc = Crossing(new, len(loc.encloses & p))
        else:
            loc = Crossing(new, loc.count + len(loc.encloses & p))
        spheres.append(TrackedSphere(s.id, loc))
    discs = [TrackedDisc(d.id, new, d.count, d.boundary) for d in g.discs]
    out = GeneralizedSurface(g.vertices, edges, g.boundaries, spheres, discs)
    return require_valid(out)


def merge_tubes(g: GeneralizedSurface, sid: str) -> GeneralizedSurface:
    """Isotope a tracked object meeting its thick edge in several curves down to one."""
    require_valid(g)
    if sid in g.sphere_map:
        s = g.sphere_map[sid]
        if not isinstance(s.location, Crossing) or s.location.count < 2:
            raise NothingToMerge(f"sphere {sid!r} already meets its thick edge at most once")
        loc = Crossing(s.location.edge, 1, s.location.encloses)
        spheres = [TrackedSphere(sid, loc) if x.id == sid else x for x in g.spheres]
        return g.replace(spheres=spheres)
    if sid in g.disc_map:
        d = g.disc_map[sid]
        if d.count < 2:
            raise NothingToMerge(f"disc {sid!r} already meets its thick edge once")
        discs = [TrackedDisc(sid, d.crossing, 1, d.boundary) if x.id == sid else x for x in g.discs]
        return g.replace(discs=discs)
    raise UnknownId(f"no tracked sphere or disc {sid!r}")


def merge_all(g: GeneralizedSurface):
    """Merge every multi-curve intersection; returns ``(surface, [AmalgStep])``."""
    steps = []
    for s in g.spheres:
        if s.count is not None and s.count > 1:
            g = merge_tubes(g, s.id)
            steps.append(AmalgStep("merge", s.id, g))
    for d in g.discs:
        if d.count > 1:
            g = merge_tubes(g, d.id)
            steps.append(AmalgStep("merge", d.id, g))
    return g, steps


# -- the amalgamation-obtained Heegaard surface -----------------------------


def remove_spheres(g: GeneralizedSurface, p):
    """Delete thin spheres ``p``; returns the surface and what tracked objects lose."""
    p = frozenset(p)
    stash = {}
    spheres = []
    for s in g.spheres:
        loc = s.location
        lost = loc.encloses & p
        if lost:
            stash[s.id] = lost
            if isinstance(loc, Hosted):
                loc = Hosted(loc.vertex, loc.encloses - p)
            else:
                loc = Crossing(loc.edge, loc.count, loc.encloses - p)
        spheres.append(TrackedSphere(s.id, loc))
    edges = [e for e in g.edges if e.id not in p]
    return g.replace(edges=edges, spheres=spheres), stash


def restore_spheres(h: GeneralizedSurface, removed: list, stash: dict) -> GeneralizedSurface:
    """Re-attach removed thin spheres between the two vertices of a Heegaard digraph."""
    J = h.thick_edges[0]
    edges = list(h.edges)
    for e in removed:
        # Thin edges leave the vertex above the thick edge and enter the one below.
        edges.append(SurfaceEdge(e.id, Role.THIN, e.genus, J.head, J.tail))
    spheres = []
    for s in h.spheres:
        loc = s.location
        back = stash.get(s.id, frozenset())
        if back:
            if isinstance(loc, Hosted):
                loc = Hosted(loc.vertex, loc.encloses | back)
            else:
                loc = Crossing(loc.edge, loc.count, loc.encloses | back)
        spheres.append(TrackedSphere(s.id, loc))
    return require_valid(h.replace(edges=edges, spheres=spheres))


def amalgamation_obtained(g: GeneralizedSurface, height=None, chooser=None, after_step=None,
                          collection=None):
    """Set aside a minimal sphere collection, amalgamate, then self-amalgamate.

    Returns ``(surface, log)``.  ``collection`` overrides the default choice
    of nonseparating spheres.
    """
    require_valid(g)
    p = minimal_complete_collection(g) if collection is None else frozenset(collection)
    if not p:
        return fully_amalgamate(g, height, chooser, after_step)
    removed = [g.edge(e) for e in sorted(p)]
    rest, stash = remove_spheres(g, p)
    require_valid(rest)
    if not is_acyclic(rest):
        raise CyclicInput(f"removing {sorted(p)} leaves a coherent cycle")
    h, log = fully_amalgamate(rest, height, chooser, after_step)
    h = restore_spheres(h, removed, stash)
    out = self_amalgamate(h, p)
    log.append(AmalgStep("selfamalg", tuple(sorted(p)), out))
    if after_step is not None:
        out, extra = after_step(out)
        log.extend(extra)
    return out, log


# -- canonical data ----------------------------------------------------------


def canonical_data(g: GeneralizedSurface) -> tuple:
    """Final genus, boundary genera per side and tracked counts of a Heegaard digraph."""
    if not is_heegaard(g):
        raise ValueError("canonical data is defined for Heegaard digraphs")
    J = g.thick_edges[0]
    below = tuple(sorted(b.genus for b in g.boundaries_at(J.tail)))
    above = tuple(sorted(b.genus for b in g.boundaries_at(J.head)))
    tracked = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Crossing):
            tracked.append((s.id, "crossing", loc.count))
        else:
            tracked.append((s.id, "below" if loc.vertex == J.tail else "above", 0))
    for d in g.discs:
        tracked.append((d.id, "disc", d.count))
    return (J.genus, below, above, tuple(sorted(tracked)))
