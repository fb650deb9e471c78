"""Decorated dual digraphs of oriented generalized Heegaard surfaces.

A vertex is a compressionbody, an edge is a surface component.  Thick edges
are positive boundaries, thin edges and boundary marks are negative
boundaries.  Every edge points out of its tail compressionbody and into its
head compressionbody (the transverse orientation).

Values are immutable; every rewrite in the package returns a new surface.
"""
from __future__ import annotations

import dataclasses
import enum
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union

from .errors import UnknownId, ValidationError


class Role(enum.Enum):
    THICK = "thick"
    THIN = "thin"


class Pattern(enum.Enum):
    """Position of a compressionbody relative to its positive boundary."""

    ABOVE = "above"  # thick edge incoming, thin edges outgoing
    BELOW = "below"  # thick edge outgoing, thin edges incoming


@dataclass(frozen=True)
class SurfaceEdge:
    id: str
    role: Role
    genus: int
    tail: str
    head: str

    @property
    def is_thick(self) -> bool:
        return self.role is Role.THICK

    @property
    def is_sphere(self) -> bool:
        return self.genus == 0

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus

    def other(self, v: str) -> str:
        if v == self.tail:
            return self.head
        if v == self.head:
            return self.tail
        raise UnknownId(f"vertex {v!r} is not an endpoint of edge {self.id!r}")


@dataclass(frozen=True)
class BoundaryMark:
    """A component of the boundary of M, attached to one compressionbody."""

    id: str
    genus: int
    vertex: str


@dataclass(frozen=True)
class Hosted:
    """Sphere lying inside ``vertex`` and cutting off the thin spheres ``encloses``."""

    vertex: str
    encloses: frozenset = frozenset()


@dataclass(frozen=True)
class Crossing:
    """Sphere meeting thick edge ``edge`` in ``count`` curves.

    ``encloses`` holds thin spheres that the sphere still cuts off on one side
    of the thick surface; a later amalgamation across one of them tubes
    through the sphere again.
    """

    edge: str
    count: int
    encloses: frozenset = frozenset()


Location = Union[Hosted, Crossing]


@dataclass(frozen=True)
class TrackedSphere:
    id: str
    location: Location

    @property
    def count(self) -> Optional[int]:
        if isinstance(self.location, Crossing):
            return self.location.count
        return None


@dataclass(frozen=True)
class TrackedDisc:
    id: str
    crossing: str
    count: int
    boundary: str


@dataclass(frozen=True)
class Vertex:
    """Derived view of one compressionbody of a valid surface."""

    id: str
    plus_edge: str
    minus_thin: tuple
    minus_boundary: tuple
    pattern: Pattern
    plus_genus: int
    minus_genera: tuple

    @property
    def minus_set(self) -> tuple:
        return self.minus_thin + self.minus_boundary

    @property
    def handle_count(self) -> int:
        k = len(self.minus_genera)
        if k == 0:
            return self.plus_genus
        return self.plus_genus - sum(self.minus_genera) + (k - 1)


def _sorted(items, key=lambda x: x.id):
    return tuple(sorted(items, key=key))


@dataclass(frozen=True)
class GeneralizedSurface:
    """The oriented dual digraph with genera and tracked surfaces."""

    vertices: frozenset = frozenset()
    edges: tuple = ()
    boundaries: tuple = ()
    spheres: tuple = ()
    discs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", _sorted(self.edges))
        object.__setattr__(self, "boundaries", _sorted(self.boundaries))
        object.__setattr__(self, "spheres", _sorted(self.spheres))
        object.__setattr__(self, "discs", _sorted(self.discs))

    @classmethod
    def build(cls, edges, boundaries=(), spheres=(), discs=(), vertices=None):
        """Build a surface, inferring the vertex set from edges if not given."""
        edges = list(edges)
        boundaries = list(boundaries)
        if vertices is None:
            vertices = set()
            for e in edges:
                vertices.update((e.tail, e.head))
            vertices.update(b.vertex for b in boundaries)
        return cls(frozenset(vertices), edges, boundaries, spheres, discs)

    def replace(self, **changes) -> "GeneralizedSurface":
        return dataclasses.replace(self, **changes)

    # -- lookups ---------------------------------------------------------

    @cached_property
    def edge_map(self) -> Mapping[str, SurfaceEdge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def boundary_map(self) -> Mapping[str, BoundaryMark]:
        return {b.id: b for b in self.boundaries}

    @cached_property
    def sphere_map(self) -> Mapping[str, TrackedSphere]:
        return {s.id: s for s in self.spheres}

    @cached_property
    def disc_map(self) -> Mapping[str, TrackedDisc]:
        return {d.id: d for d in self.discs}

    @cached_property
    def _incidence(self):
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.tail].append(e)
            if e.head != e.tail:
                inc[e.head].append(e)
        bd = defaultdict(list)
        for b in self.boundaries:
            bd[b.vertex].append(b)
        return inc, bd

    def edge(self, eid: str) -> SurfaceEdge:
        try:
            return self.edge_map[eid]
        except KeyError:
            raise UnknownId(f"unknown edge {eid!r}") from None

    def incident(self, v: str) -> list:
        return list(self._incidence[0].get(v, ()))

    def boundaries_at(self, v: str) -> list:
        return list(self._incidence[1].get(v, ()))

    @property
    def thick_edges(self) -> list:
        return [e for e in self.edges if e.role is Role.THICK]

    @property
    def thin_edges(self) -> list:
        return [e for e in self.edges if e.role is Role.THIN]

    @property
    def all_ids(self) -> set:
        ids = set(self.vertices)
        ids.update(self.edge_map, self.boundary_map, self.sphere_map, self.disc_map)
        return ids

    def plus_edge(self, v: str) -> SurfaceEdge:
        thick = [e for e in self.incident(v) if e.is_thick]
        if len(thick) != 1:
            raise ValidationError([f"vertex {v!r} has {len(thick)} thick edges"])
        return thick[0]

    def thin_at(self, v: str) -> list:
        return [e for e in self.incident(v) if not e.is_thick]

    def pattern(self, v: str) -> Pattern:
        return Pattern.ABOVE if self.plus_edge(v).head == v else Pattern.BELOW

    def vertex(self, v: str) -> Vertex:
        if v not in self.vertices:
            raise UnknownId(f"unknown vertex {v!r}")
        plus = self.plus_edge(v)
        thin = sorted(self.thin_at(v), key=lambda e: e.id)
        bds = sorted(self.boundaries_at(v), key=lambda b: b.id)
        return Vertex(
            id=v,
            plus_edge=plus.id,
            minus_thin=tuple(e.id for e in thin),
            minus_boundary=tuple(b.id for b in bds),
            pattern=Pattern.ABOVE if plus.head == v else Pattern.BELOW,
            plus_genus=plus.genus,
            minus_genera=tuple(e.genus for e in thin) + tuple(b.genus for b in bds),
        )

    def fresh_id(self, base: str, taken: Iterable[str] = ()) -> str:
        """Return ``base`` or ``base_2``, ``base_3``... avoiding every used id."""
        used = self.all_ids | set(taken)
        if base not in used:
            return base
        n = 2
        while f"{base}_{n}" in used:
            n += 1
        return f"{base}_{n}"

    @cached_property
    def report(self) -> "ValidationReport":
        return _validate(self)


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set:
        return {v.code for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def validate(g: GeneralizedSurface) -> ValidationReport:
    """Return every violated structural invariant of ``g`` (empty when valid)."""
    return g.report


def require_valid(g: GeneralizedSurface) -> GeneralizedSurface:
    if not g.report.ok:
        raise ValidationError(g.report.violations)
    return g


def _validate(g: GeneralizedSurface) -> ValidationReport:
    out = []

    def bad(code, subject, message):
        out.append(Violation(code, subject, message))

    seen = {}
    groups = [
        ("vertex", [(v, None) for v in g.vertices]),
        ("edge", [(e.id, e) for e in g.edges]),
        ("boundary", [(b.id, b) for b in g.boundaries]),
        ("sphere", [(s.id, s) for s in g.spheres]),
        ("disc", [(d.id, d) for d in g.discs]),
    ]
    for kind, items in groups:
        for ident, _ in items:
            if ident in seen:
                bad("duplicate-id", ident, f"id {ident!r} used by a {seen[ident]} and a {kind}")
            else:
                seen[ident] = kind

    if not g.edges:
        bad("no-edges", "", "surface has no edges")
    elif not g.thick_edges:
        bad("no-thick", "", "surface has no thick edge")

    for e in g.edges:
        if e.genus < 0:
            bad("genus", e.id, f"edge {e.id!r} has negative genus {e.genus}")
        for end in (e.tail, e.head):
            if end not in g.vertices:
                bad("dangling", e.id, f"edge {e.id!r} ends at unknown vertex {end!r}")
        if e.tail == e.head:
            bad("loop", e.id, f"edge {e.id!r} is a loop at {e.tail!r}")
    for b in g.boundaries:
        if b.genus < 1:
            bad("boundary-genus", b.id, f"boundary {b.id!r} has genus {b.genus} (must be >= 1)")
        if b.vertex not in g.vertices:
            bad("dangling", b.id, f"boundary {b.id!r} at unknown vertex {b.vertex!r}")

    structural_ok = not any(v.code in ("dangling", "loop", "duplicate-id") for v in out)
    vertex_ok = set()
    for v in sorted(g.vertices):
        inc = g.incident(v)
        thick = [e for e in inc if e.is_thick]
        if len(thick) != 1:
            bad("thick-count", v, f"vertex {v!r} has {len(thick)} thick edges (needs exactly 1)")
            continue
        plus = thick[0]
        thin = [e for e in inc if not e.is_thick]
        if plus.head == v:
            wrong = [e.id for e in thin if e.tail != v]
        else:
            wrong = [e.id for e in thin if e.head != v]
        if wrong:
            bad("pattern", v, f"vertex {v!r}: thin edges {sorted(wrong)} point the same way as its thick edge")
            continue
        minus = sum(e.genus for e in thin) + sum(b.genus for b in g.boundaries_at(v))
        if plus.genus < minus:
            bad("realizability", v,
                f"vertex {v!r}: thick genus {plus.genus} < negative boundary genus {minus}")
            continue
        vertex_ok.add(v)

    if structural_ok and g.vertices and not _connected(g):
        bad("connectivity", "", "underlying graph is disconnected")

    _validate_tracked(g, bad)
    return ValidationReport(tuple(out))


def _connected(g: GeneralizedSurface) -> bool:
    start = min(g.vertices)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == set(g.vertices)


def _thin_spheres_at(g: GeneralizedSurface, v: str) -> set:
    return {e.id for e in g.incident(v) if not e.is_thick and e.genus == 0}


def _validate_tracked(g, bad):
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted):
            if loc.vertex not in g.vertices:
                bad("tracked", s.id, f"sphere {s.id!r} hosted at unknown vertex {loc.vertex!r}")
                continue
            extra = set(loc.encloses) - _thin_spheres_at(g, loc.vertex)
            if extra:
                bad("tracked", s.id,
                    f"sphere {s.id!r} encloses {sorted(extra)}, not thin spheres at {loc.vertex!r}")
        elif isinstance(loc, Crossing):
            e = g.edge_map.get(loc.edge)
            if e is None or not e.is_thick:
                bad("tracked", s.id, f"sphere {s.id!r} crosses {loc.edge!r}, which is not a thick edge")
                continue
            if loc.count < 1:
                bad("tracked", s.id, f"sphere {s.id!r} has crossing count {loc.count}")
            allowed = _thin_spheres_at(g, e.tail) | _thin_spheres_at(g, e.head)
            extra = set(loc.encloses) - allowed
            if extra:
                bad("tracked", s.id,
                    f"sphere {s.id!r} encloses {sorted(extra)}, not thin spheres beside {loc.edge!r}")
        else:
            bad("tracked", s.id, f"sphere {s.id!r} has no location")
    for d in g.discs:
        e = g.edge_map.get(d.crossing)
        if e is None or not e.is_thick:
            bad("tracked", d.id, f"disc {d.id!r} crosses {d.crossing!r}, which is not a thick edge")
            continue
        if d.count < 1:
            bad("tracked", d.id, f"disc {d.id!r} has crossing count {d.count}")
        b = g.boundary_map.get(d.boundary)
        if b is None:
            bad("tracked", d.id, f"disc {d.id!r} has unknown boundary {d.boundary!r}")
        elif b.vertex not in (e.tail, e.head):
            bad("tracked", d.id,
                f"disc {d.id!r}: boundary {b.id!r} is not beside {e.id!r}")


# -- predicates ------------------------------------------------------------


def is_heegaard(g: GeneralizedSurface) -> bool:
    require_valid(g)
    return len(g.edges) == 1 and len(g.vertices) == 2


def is_product_vertex(g: GeneralizedSurface, v: str) -> bool:
    require_valid(g)
    vx = g.vertex(v)
    return (
        len(vx.minus_set) == 1
        and len(vx.minus_thin) == 1
        and g.edge(vx.minus_thin[0]).genus == vx.plus_genus
    )


def euler_characteristic(genus: int) -> int:
    return 2 - 2 * genus
