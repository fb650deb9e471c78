"""Compression plans (split trees) and the three width-decreasing moves.

A split tree records, in some order, the discs used to compress one thick
surface H.  Each event acts on a region of the current surface:

* ``NONSEP`` compresses along a nonseparating curve, genus g -> g - 1;
* ``SEP(k)`` compresses along a separating essential curve, g -> (k, g - k);
* ``SEMI`` cuts along an inessential curve, g -> (g, 0).

Leaves are the pieces left after every event, i.e. the new thin surface.
Projecting to one side undoes the events of the other side and gives the
components of H compressed only along that side's discs.  When an undone
event glued two regions back together, the scars of a region are carried by
its first child, so the gluing joins the groups of the two leftmost leaves.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .complexity import Order, compare_width, width
from .core import (
    Crossing,
    GeneralizedSurface,
    Hosted,
    Role,
    SurfaceEdge,
    TrackedSphere,
    is_product_vertex,
    require_valid,
)
from .errors import (
    DegenerateConsolidation,
    EmptyPlan,
    GenusMismatch,
    MalformedTree,
    MissingAssignment,
    NotConsolidable,
    NotProduct,
    NotThinningMove,
    RealizabilityViolation,
    TrackedObjectConflict,
    UnknownId,
)


class Side(enum.Enum):
    BELOW = "below"
    ABOVE = "above"

    @property
    def opposite(self) -> "Side":
        return Side.ABOVE if self is Side.BELOW else Side.BELOW


class Kind(enum.Enum):
    NONSEP = "nonsep"
    SEP = "sep"
    SEMI = "semi"


@dataclass(frozen=True)
class SplitEvent:
    side: Side
    kind: Kind
    first_genus: Optional[int] = None

    @property
    def compressing(self) -> bool:
        return self.kind is not Kind.SEMI

    @property
    def arity(self) -> int:
        return 1 if self.kind is Kind.NONSEP else 2

    def split(self, genus: int) -> tuple:
        """Genera of the child regions, or MalformedTree if not applicable."""
        if self.kind is Kind.NONSEP:
            if genus < 1:
                raise MalformedTree(f"nonseparating compression of a genus {genus} region")
            return (genus - 1,)
        if self.kind is Kind.SEP:
            k = self.first_genus
            if k is None or not 1 <= k <= genus - 1:
                raise MalformedTree(f"separating split sep:{k} of a genus {genus} region")
            return (k, genus - k)
        return (genus, 0)


@dataclass(frozen=True)
class Region:
    """A node of a split tree; a leaf when ``event`` is None."""

    event: Optional[SplitEvent] = None
    children: tuple = ()


LEAF = Region()


@dataclass(frozen=True)
class SplitTree:
    """A compression plan for one thick edge.

    Attributes:
        root_genus: genus of the thick edge being compressed.
        root: the region tree.
        assignment: pairs ``(element id, component index)`` placing each old
            negative-boundary element of the edge's endpoints onto a component
            of the projection on that element's side.  May be left out when
            that side has a single component.
    """

    root_genus: int
    root: Region = LEAF
    assignment: tuple = ()

    def __post_init__(self):
        pairs = self.assignment
        if isinstance(pairs, dict):
            pairs = pairs.items()
        object.__setattr__(self, "assignment", tuple(sorted((str(k), int(v)) for k, v in pairs)))

    @property
    def assignment_map(self) -> dict:
        return dict(self.assignment)

    def with_assignment(self, assignment) -> "SplitTree":
        return SplitTree(self.root_genus, self.root, assignment)

    def events(self) -> list:
        out = []
        stack = [self.root]
        while stack:
            r = stack.pop()
            if r.event is not None:
                out.append(r.event)
            stack.extend(r.children)
        return out

    def side_events(self, side: Side) -> list:
        return [e for e in self.events() if e.side is side]

    def compressing(self, side: Side) -> bool:
        return any(e.compressing for e in self.side_events(side))

    @property
    def is_type_one(self) -> bool:
        return self.compressing(Side.BELOW) and self.compressing(Side.ABOVE)

    def semi_side(self) -> Optional[Side]:
        """The side made only of semi-compressions, when the plan is type II."""
        for side in Side:
            mine = self.side_events(side)
            if mine and all(not e.compressing for e in mine) and self.compressing(side.opposite):
                return side
        return None


@dataclass(frozen=True)
class Component:
    index: int
    genus: int
    leaves: tuple


def _walk(t: SplitTree):
    """Check genus arithmetic; return leaf genera and per-node records.

    Each record is ``(event, child_anchors)`` where an anchor is the index of
    the leftmost leaf below a child region.
    """
    if t.root_genus < 0:
        raise MalformedTree("negative root genus")
    leaves, nodes = [], []

    def visit(region, genus):
        if not isinstance(region, Region):
            raise MalformedTree(f"not a region: {region!r}")
        if region.event is None:
            if region.children:
                raise MalformedTree("leaf with children")
            leaves.append(genus)
            return len(leaves) - 1
        ev = region.event
        genera = ev.split(genus)
        if len(region.children) != ev.arity:
            raise MalformedTree(
                f"{ev.kind.value} event needs {ev.arity} child regions, got {len(region.children)}")
        anchors = tuple(visit(child, cg) for child, cg in zip(region.children, genera))
        nodes.append((ev, anchors))
        return anchors[0]

    visit(t.root, t.root_genus)
    return leaves, nodes


def leaves(t: SplitTree) -> list:
    """``(leaf index, genus)`` for every region left after all events."""
    genera, _ = _walk(t)
    return list(enumerate(genera))


def project(t: SplitTree, side: Side) -> list:
    """Components of H compressed along ``side``'s discs only."""
    genera, nodes = _walk(t)
    parent = list(range(len(genera)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    bonus = [0] * len(genera)
    for ev, anchors in nodes:
        if ev.side is side:
            continue
        if ev.kind is Kind.NONSEP:
            bonus[anchors[0]] += 1
        else:
            a, b = find(anchors[0]), find(anchors[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(len(genera)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for n, root in enumerate(sorted(groups)):
        members = tuple(groups[root])
        genus = sum(genera[i] + bonus[i] for i in members)
        out.append(Component(n, genus, members))
    return out


def leaf_groups(t: SplitTree, side: Side) -> dict:
    """Map leaf index -> component index on ``side``."""
    return {leaf: c.index for c in project(t, side) for leaf in c.leaves}


# -- untelescoping -----------------------------------------------------------


def _side_elements(g: GeneralizedSurface, v: str) -> list:
    """Old negative-boundary elements at ``v`` as (id, genus, is_boundary)."""
    out = [(e.id, e.genus, False) for e in g.thin_at(v)]
    out += [(b.id, b.genus, True) for b in g.boundaries_at(v)]
    return sorted(out)


def _resolve_assignment(t, elements, comps, label):
    amap = t.assignment_map
    placed = {}
    for eid, _, _ in elements:
        if eid in amap:
            idx = amap[eid]
            if not 0 <= idx < len(comps):
                raise MalformedTree(f"{eid!r} assigned to missing {label} component {idx}")
            placed[eid] = idx
        elif len(comps) == 1:
            placed[eid] = 0
        else:
            raise MissingAssignment(
                f"{eid!r} must be assigned to one of {len(comps)} {label} components")
    return placed


@dataclass
class UntelescopeResult:
    """Rewritten surface plus the ids created, for composite moves."""

    surface: GeneralizedSurface
    below_edges: list
    above_edges: list
    thin_edges: list
    bottom_vertices: list
    top_vertices: list


def _untelescope(g: GeneralizedSurface, h: str, t: SplitTree) -> UntelescopeResult:
    require_valid(g)
    H = g.edge(h)
    if not H.is_thick:
        raise NotThinningMove(f"{h!r} is not a thick edge")
    if t.root_genus != H.genus:
        raise GenusMismatch(f"plan root genus {t.root_genus} but {h!r} has genus {H.genus}")
    if not t.side_events(Side.BELOW) or not t.side_events(Side.ABOVE):
        raise EmptyPlan("a plan needs events on both sides")
    leaf_genera = [gen for _, gen in leaves(t)]
    below = project(t, Side.BELOW)
    above = project(t, Side.ABOVE)
    below_of = leaf_groups(t, Side.BELOW)
    above_of = leaf_groups(t, Side.ABOVE)

    lower_elems = _side_elements(g, H.tail)
    upper_elems = _side_elements(g, H.head)
    known = {e[0] for e in lower_elems + upper_elems}
    for eid in t.assignment_map:
        if eid not in known:
            raise UnknownId(f"assignment names {eid!r}, not beside {h!r}")
    lower_at = _resolve_assignment(t, lower_elems, below, "below")
    upper_at = _resolve_assignment(t, upper_elems, above, "above")
    for elems, placed, comps in ((lower_elems, lower_at, below), (upper_elems, upper_at, above)):
        load = [0] * len(comps)
        for eid, gen, _ in elems:
            load[placed[eid]] += gen
        for c in comps:
            if load[c.index] > c.genus:
                raise RealizabilityViolation(
                    f"component {c.index} of genus {c.genus} cannot carry boundary genus {load[c.index]}")

    taken = set()

    def fresh(base):
        name = g.fresh_id(base, taken)
        taken.add(name)
        return name

    taken.add(H.tail)
    taken.add(H.head)
    bottom = [H.tail if i == 0 else fresh(f"{H.tail}_{i}") for i in range(len(below))]
    lmid = [fresh(f"{h}_lm{i}") for i in range(len(below))]
    umid = [fresh(f"{h}_um{j}") for j in range(len(above))]
    top = [H.head if j == 0 else fresh(f"{H.head}_{j}") for j in range(len(above))]
    lo_edges = [fresh(f"{h}_lo{i}") for i in range(len(below))]
    hi_edges = [fresh(f"{h}_hi{j}") for j in range(len(above))]
    f_edges = [fresh(f"{h}_f{k}") for k in range(len(leaf_genera))]

    edges = []
    for e in g.edges:
        if e.id == h:
            continue
        if e.id in lower_at:
            e = SurfaceEdge(e.id, e.role, e.genus, e.tail, bottom[lower_at[e.id]])
        elif e.id in upper_at:
            e = SurfaceEdge(e.id, e.role, e.genus, top[upper_at[e.id]], e.head)
        edges.append(e)
    for c in below:
        edges.append(SurfaceEdge(lo_edges[c.index], Role.THICK, c.genus, bottom[c.index], lmid[c.index]))
    for c in above:
        edges.append(SurfaceEdge(hi_edges[c.index], Role.THICK, c.genus, umid[c.index], top[c.index]))
    for k, gen in enumerate(leaf_genera):
        edges.append(SurfaceEdge(f_edges[k], Role.THIN, gen, lmid[below_of[k]], umid[above_of[k]]))

    boundaries = []
    for b in g.boundaries:
        if b.id in lower_at:
            b = type(b)(b.id, b.genus, bottom[lower_at[b.id]])
        elif b.id in upper_at:
            b = type(b)(b.id, b.genus, top[upper_at[b.id]])
        boundaries.append(b)

    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Crossing) and loc.edge == h:
            raise TrackedObjectConflict(f"sphere {s.id!r} crosses the untelescoped edge {h!r}")
        if isinstance(loc, Hosted) and loc.vertex in (H.tail, H.head):
            placed, hosts = (lower_at, bottom) if loc.vertex == H.tail else (upper_at, top)
            targets = {placed[e] for e in loc.encloses}
            if len(targets) > 1:
                raise TrackedObjectConflict(f"sphere {s.id!r} encloses spheres sent to different components")
            loc = Hosted(hosts[targets.pop() if targets else 0], loc.encloses)
        spheres.append(TrackedSphere(s.id, loc))
    for d in g.discs:
        if d.crossing == h:
            raise TrackedObjectConflict(f"disc {d.id!r} crosses the untelescoped edge {h!r}")

    vertices = (set(g.vertices) - {H.tail, H.head}) | set(bottom) | set(lmid) | set(umid) | set(top)
    out = GeneralizedSurface(frozenset(vertices), edges, boundaries, spheres, g.discs)
    require_valid(out)
    return UntelescopeResult(out, lo_edges, hi_edges, f_edges, bottom, top)


def untelescope(g: GeneralizedSurface, h: str, t: SplitTree) -> GeneralizedSurface:
    """Replace thick edge ``h`` by H_-, F, H_+ according to plan ``t``."""
    return _untelescope(g, h, t).surface


# -- consolidation -----------------------------------------------------------


def product_pairs(g: GeneralizedSurface) -> list:
    """Every non-degenerate ``(thick, thin)`` pair cobounding a product vertex."""
    require_valid(g)
    out = []
    for v in sorted(g.vertices):
        if not is_product_vertex(g, v):
            continue
        vx = g.vertex(v)
        h, f = g.edge(vx.plus_edge), g.edge(vx.minus_thin[0])
        if h.other(v) != f.other(v):
            out.append((h.id, f.id))
    return out


def _replace_enclosed(encl, f, extra):
    if f in encl:
        return (frozenset(encl) - {f}) | extra
    return frozenset(encl)


def consolidate(g: GeneralizedSurface, h: str, f: str) -> GeneralizedSurface:
    """Remove a thick/thin pair cobounding a product compressionbody."""
    require_valid(g)
    H, F = g.edge(h), g.edge(f)
    if not H.is_thick or F.is_thick:
        raise NotProduct(f"{h!r} must be thick and {f!r} thin")
    shared = sorted({H.tail, H.head} & {F.tail, F.head})
    if not shared:
        raise NotProduct(f"{h!r} and {f!r} do not share a vertex")
    products = [v for v in shared if is_product_vertex(g, v)]
    if not products:
        raise NotProduct(f"{h!r} and {f!r} do not cobound a product compressionbody")
    V = products[0]
    X, Y = H.other(V), F.other(V)
    if X == Y:
        raise DegenerateConsolidation(f"{h!r} and {f!r} both join {V!r} to {X!r}")
    x_spheres = frozenset(e.id for e in g.thin_at(X) if e.genus == 0)

    def move(v):
        return Y if v == X else v

    edges = [
        SurfaceEdge(e.id, e.role, e.genus, move(e.tail), move(e.head))
        for e in g.edges
        if e.id not in (h, f)
    ]
    boundaries = [type(b)(b.id, b.genus, move(b.vertex)) for b in g.boundaries]

    spheres = []
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Crossing):
            if loc.edge == h:
                raise TrackedObjectConflict(f"sphere {s.id!r} crosses the consolidated edge {h!r}")
            loc = Crossing(loc.edge, loc.count, _replace_enclosed(loc.encloses, f, x_spheres))
        elif loc.vertex == X:
            loc = Hosted(Y, loc.encloses)
        elif loc.vertex == V:
            loc = Hosted(Y, x_spheres if f in loc.encloses else frozenset())
        elif loc.vertex == Y:
            loc = Hosted(Y, _replace_enclosed(loc.encloses, f, x_spheres))
        spheres.append(TrackedSphere(s.id, loc))
    for d in g.discs:
        if d.crossing == h:
            raise TrackedObjectConflict(f"disc {d.id!r} crosses the consolidated edge {h!r}")

    vertices = set(g.vertices) - {V, X}
    out = GeneralizedSurface(frozenset(vertices), edges, boundaries, spheres, g.discs)
    return require_valid(out)


# -- type II -----------------------------------------------------------------


def type_ii_move(g: GeneralizedSurface, h: str, t: SplitTree, target: str) -> GeneralizedSurface:
    """Untelescope with a semi-compressing side, then consolidate its product.

    Old boundary elements on the semi side that the plan leaves unassigned
    go to the component that keeps the full genus.
    """
    require_valid(g)
    side = t.semi_side()
    if side is None:
        raise NotThinningMove("type II plan needs one side of semi-compressions only and "
                              "a compressing event on the other")
    H = g.edge(h)
    comps = project(t, side)
    main = [c for c in comps if c.genus == t.root_genus]
    if len(main) != 1:
        raise MalformedTree("semi side must keep exactly one full-genus component")
    main = main[0]
    outer = H.tail if side is Side.BELOW else H.head
    amap = t.assignment_map
    for eid, _, _ in _side_elements(g, outer):
        amap.setdefault(eid, main.index)
    res = _untelescope(g, h, t.with_assignment(amap))
    s = res.surface
    thick = (res.below_edges if side is Side.BELOW else res.above_edges)[main.index]
    V = (res.bottom_vertices if side is Side.BELOW else res.top_vertices)[main.index]
    vx = s.vertex(V)
    if vx.minus_set != (target,) or not is_product_vertex(s, V):
        raise NotConsolidable(f"{target!r} does not cobound a product with the main component of {h!r}")
    return consolidate(s, thick, target)


# -- search ------------------------------------------------------------------


@dataclass(frozen=True)
class Consolidate:
    h: str
    f: str


@dataclass(frozen=True)
class Untelescope:
    h: str
    tree: SplitTree


@dataclass(frozen=True)
class TypeII:
    h: str
    tree: SplitTree
    target: str


Move = Union[Consolidate, Untelescope, TypeII]


def apply_move(g: GeneralizedSurface, move: Move) -> GeneralizedSurface:
    if isinstance(move, Consolidate):
        return consolidate(g, move.h, move.f)
    if isinstance(move, Untelescope):
        if not move.tree.is_type_one:
            raise NotThinningMove("untelescoping plan must compress on both sides")
        return untelescope(g, move.h, move.tree)
    if isinstance(move, TypeII):
        return type_ii_move(g, move.h, move.tree, move.target)
    raise TypeError(f"not a thinning move: {move!r}")


@dataclass
class LogEntry:
    move: Move
    width: tuple


@dataclass
class MoveLog:
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def moves(self) -> list:
        return [e.move for e in self.entries]

    @property
    def widths(self) -> list:
        return [e.width for e in self.entries]


MoveChooser = Callable[[GeneralizedSurface], Optional[Move]]


def thin_to_local(g: GeneralizedSurface, strategy: Optional[MoveChooser] = None, max_steps: int = 10_000):
    """Apply moves chosen by ``strategy`` until it returns None.

    Returns ``(surface, log)``.  A failing move re-raises its error with the
    partial log attached as ``err.partial_log``.
    """
    require_valid(g)
    log = MoveLog()
    current = g
    for _ in range(max_steps):
        move = strategy(current) if strategy is not None else None
        if move is None:
            break
        try:
            nxt = apply_move(current, move)
        except Exception as err:
            err.partial_log = log
            raise
        before, after = width(current), width(nxt)
        if compare_width(after, before) is not Order.LT:
            raise AssertionError(f"width did not decrease: {before} -> {after} under {move}")
        log.entries.append(LogEntry(move, tuple(after)))
        current = nxt
    return current, log


def replay(g: GeneralizedSurface, log) -> GeneralizedSurface:
    for move in (log.moves if isinstance(log, MoveLog) else log):
        g = apply_move(g, move)
    return g


def is_syntactically_thin(g: GeneralizedSurface) -> bool:
    """No thick/thin pair cobounds a product compressionbody."""
    return not product_pairs(g)


def greedy_consolidation(g: GeneralizedSurface) -> Optional[Move]:
    pairs = product_pairs(g)
    return Consolidate(*pairs[0]) if pairs else None


# -- plan enumeration --------------------------------------------------------


def _events_for(genus: int, side: Side):
    out = []
    if genus >= 1:
        out.append(SplitEvent(side, Kind.NONSEP))
    for k in range(1, genus):
        out.append(SplitEvent(side, Kind.SEP, k))
    out.append(SplitEvent(side, Kind.SEMI))
    return out


def enumerate_trees(genus: int, max_events: int) -> list:
    """All split trees of a genus with at most ``max_events`` events."""

    def regions(gen, budget):
        yield LEAF, 0
        if budget == 0:
            return
        for side in Side:
            for ev in _events_for(gen, side):
                child_genera = ev.split(gen)
                if len(child_genera) == 1:
                    for sub, used in regions(child_genera[0], budget - 1):
                        yield Region(ev, (sub,)), used + 1
                else:
                    for left, used_l in regions(child_genera[0], budget - 1):
                        for right, used_r in regions(child_genera[1], budget - 1 - used_l):
                            yield Region(ev, (left, right)), used_l + used_r + 1

    return [SplitTree(genus, r) for r, _ in regions(genus, max_events)]


def realizable_assignments(g: GeneralizedSurface, h: str, t: SplitTree):
    """Yield every assignment of old boundary elements that fits the plan."""
    H = g.edge(h)
    per_side = []
    for v, side in ((H.tail, Side.BELOW), (H.head, Side.ABOVE)):
        comps = project(t, side)
        elems = _side_elements(g, v)
        choices = []
        for combo in itertools.product(range(len(comps)), repeat=len(elems)):
            load = [0] * len(comps)
            for (eid, gen, _), idx in zip(elems, combo):
                load[idx] += gen
            if all(load[c.index] <= c.genus for c in comps):
                choices.append({e[0]: idx for e, idx in zip(elems, combo)})
        per_side.append(choices)
    for lo, hi in itertools.product(*per_side):
        yield {**lo, **hi}


def small_plan_strategy(max_events: int = 2) -> MoveChooser:
    """Consolidate when possible, otherwise try small type I plans.

    Thick edges are tried in id order, plans in enumeration order, and the
    first plan with a realizable assignment is used.
    """

    def choose(g):
        pairs = product_pairs(g)
        if pairs:
            return Consolidate(*pairs[0])
        for H in g.thick_edges:
            for t in enumerate_trees(H.genus, max_events):
                if not t.is_type_one:
                    continue
                for amap in realizable_assignments(g, H.id, t):
                    return Untelescope(H.id, t.with_assignment(amap))
        return None

    return choose
