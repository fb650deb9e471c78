"""Juggling: moving the spherical inner boundary of a sphere's compressionbody.

A sphere Q hosted in compressionbody C cuts off some thin spheres of C.  A
juggle pushes Q through the surface P (incident to C) and then through R
(incident to A, the far side of P), landing in B.  The thin spheres Q cut off
are tubed along and now attach to B instead of C.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .complexity import net_chi
from .core import GeneralizedSurface, Hosted, SurfaceEdge, TrackedSphere, require_valid
from .digraph import _is_connected, cycle_sphere_condition, is_acyclic
from .errors import (
    BadIncidence,
    NonSphereEnclosure,
    PatternViolation,
    TrackedObjectConflict,
    UnknownId,
)
from .thinning import is_syntactically_thin


@dataclass(frozen=True)
class JuggleSpec:
    """Which sphere to juggle and along which pair of surfaces.

    Give either ``sphere`` (a tracked sphere id in hosted state) or ``host``
    plus ``encloses`` for an untracked sphere.
    """

    pierced: str
    landing: str
    sphere: Optional[str] = None
    host: Optional[str] = None
    encloses: frozenset = frozenset()


@dataclass(frozen=True)
class _Plan:
    c: str
    a: str
    b: str
    encloses: frozenset
    sphere: Optional[str]


def _plan(g: GeneralizedSurface, spec: JuggleSpec) -> _Plan:
    if spec.sphere is not None:
        s = g.sphere_map.get(spec.sphere)
        if s is None:
            raise UnknownId(f"no tracked sphere {spec.sphere!r}")
        if not isinstance(s.location, Hosted):
            raise BadIncidence(f"sphere {spec.sphere!r} is not hosted in a compressionbody")
        c, encl = s.location.vertex, frozenset(s.location.encloses)
    else:
        if spec.host is None:
            raise BadIncidence("juggle needs a sphere id or a host vertex")
        if spec.host not in g.vertices:
            raise UnknownId(f"unknown vertex {spec.host!r}")
        c, encl = spec.host, frozenset(spec.encloses)
    P, R = g.edge(spec.pierced), g.edge(spec.landing)
    if c not in (P.tail, P.head):
        raise BadIncidence(f"{P.id!r} is not incident to {c!r}")
    a = P.other(c)
    if a not in (R.tail, R.head):
        raise BadIncidence(f"{R.id!r} is not incident to {a!r}")
    if P.id == R.id:
        if not P.is_thick:
            raise BadIncidence("pierced and landing surfaces may coincide only when thick")
    elif P.is_thick == R.is_thick:
        raise BadIncidence("one of pierced, landing must be thick and the other thin")
    if P.id in encl or R.id in encl:
        raise BadIncidence("the sphere cannot cut off the surfaces it passes through")
    at_c = {e.id: e for e in g.thin_at(c)}
    for eid in encl:
        e = at_c.get(eid)
        if e is None or e.genus != 0:
            raise NonSphereEnclosure(f"{eid!r} is not a thin sphere of {c!r}")
    b = c if P.id == R.id else R.other(a)
    for eid in encl:
        if at_c[eid].other(c) == b and b != c:
            raise BadIncidence(f"moving {eid!r} to {b!r} would join {b!r} to itself")
    return _Plan(c, a, b, encl, spec.sphere)


def juggle(g: GeneralizedSurface, spec: JuggleSpec) -> GeneralizedSurface:
    require_valid(g)
    plan = _plan(g, spec)
    c, b, moved = plan.c, plan.b, plan.encloses

    for s in g.spheres:
        if s.id == plan.sphere:
            continue
        if s.location.encloses & moved:
            raise TrackedObjectConflict(f"sphere {s.id!r} also cuts off a juggled sphere")

    def move(v):
        return b if v == c else v

    edges = [
        SurfaceEdge(e.id, e.role, e.genus, move(e.tail), move(e.head)) if e.id in moved else e
        for e in g.edges
    ]
    spheres = [
        TrackedSphere(s.id, Hosted(b, s.location.encloses)) if s.id == plan.sphere else s
        for s in g.spheres
    ]
    out = g.replace(edges=edges, spheres=spheres)
    if not out.report.ok:
        raise PatternViolation("; ".join(str(v) for v in out.report))
    return out


@dataclass(frozen=True)
class JuggleReport:
    valid: bool
    thick_genera: bool
    thin_genera: bool
    netchi: bool
    acyclic: Optional[bool]
    cycle_spheres: bool
    locally_thin: Optional[bool]

    @property
    def ok(self) -> bool:
        """Every check that the move guarantees unconditionally.

        ``locally_thin`` is informational: syntactic thinness is only a proxy
        and may be lost when a juggle strips a sphere off a compressionbody.
        """
        return (
            self.valid
            and self.thick_genera
            and self.thin_genera
            and self.netchi
            and self.acyclic is not False
            and self.cycle_spheres
        )


def _bridges(g: GeneralizedSurface, ids) -> bool:
    """True when deleting each edge alone disconnects the graph."""
    for eid in ids:
        rest = [e for e in g.edges if e.id != eid]
        if _is_connected(g.vertices, rest):
            return False
    return True


def check_juggle_preservation(before: GeneralizedSurface, after: GeneralizedSurface,
                              spec: JuggleSpec) -> JuggleReport:
    plan = _plan(before, spec)
    valid = after.report.ok
    if not valid:
        return JuggleReport(False, False, False, False, None, False, None)

    def genera(g, thick):
        return Counter(e.genus for e in g.edges if e.is_thick == thick)

    acyclic = None
    if is_acyclic(before) and _bridges(before, plan.encloses):
        acyclic = is_acyclic(after)
    cycles = (not cycle_sphere_condition(before)) or cycle_sphere_condition(after)
    thin = None
    if is_syntactically_thin(before):
        thin = is_syntactically_thin(after)
    return JuggleReport(
        valid=True,
        thick_genera=genera(before, True) == genera(after, True),
        thin_genera=genera(before, False) == genera(after, False),
        netchi=net_chi(before) == net_chi(after),
        acyclic=acyclic,
        cycle_spheres=cycles,
        locally_thin=thin,
    )


def juggle_candidates(g: GeneralizedSurface, c: str):
    """Every ``(pierced, landing)`` pair usable from vertex ``c``."""
    out = []
    for P in g.incident(c):
        a = P.other(c)
        for R in g.incident(a):
            if R.id == P.id and P.is_thick:
                out.append((P.id, R.id))
            elif R.id != P.id and P.is_thick != R.is_thick:
                out.append((P.id, R.id))
    return sorted(out)
