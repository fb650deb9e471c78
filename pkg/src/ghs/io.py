"""Text formats: surface files, split-tree expressions and move scripts.

Surface file::

    ghs v1
    vertex A
    vertex B
    edge H thick genus=2 tail=A head=B
    boundary dM genus=1 vertex=A
    sphere Q host=A encloses=F1,F2
    sphere Q2 edge=H count=1
    disc D edge=H count=1 boundary=dM

Split trees are written ``[side,kind,child,...]`` with ``.`` for a leaf, for
example ``[below,sep:1,[above,semi,.,.],.]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

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
from .errors import MalformedTree, ParseError
from .thinning import LEAF, Kind, Region, Side, SplitEvent, SplitTree, leaves

HEADER = "ghs v1"
_ID = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*\Z")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _fields(tokens, lineno, required, optional=()):
    out = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        if key not in required and key not in optional:
            raise ParseError(f"unexpected field {key!r}", lineno)
        if key in out:
            raise ParseError(f"field {key!r} given twice", lineno)
        out[key] = value
    missing = [k for k in required if k not in out]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", lineno)
    return out


def _ident(value, lineno):
    if not _ID.match(value):
        raise ParseError(f"bad identifier {value!r}", lineno)
    return value


def _int(value, lineno, what):
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {value!r}", lineno) from None


def _id_list(value, lineno):
    if not value:
        return frozenset()
    return frozenset(_ident(v, lineno) for v in value.split(","))


def parse_surface(text: str, validate: bool = True) -> GeneralizedSurface:
    """Parse a surface file; raises ParseError or ValidationError."""
    vertices, edges, boundaries, spheres, discs = [], [], [], [], []
    seen = {}
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if not header:
            if line != HEADER:
                raise ParseError(f"expected header {HEADER!r}", lineno)
            header = True
            continue
        kind, *rest = line.split()
        if not rest:
            raise ParseError(f"{kind!r} line needs an id", lineno)
        ident = _ident(rest[0], lineno)
        if ident in seen:
            raise ParseError(f"duplicate id {ident!r} (first on line {seen[ident]})", lineno)
        seen[ident] = lineno
        args = rest[1:]
        if kind == "vertex":
            _fields(args, lineno, ())
            vertices.append(ident)
        elif kind == "edge":
            if not args or args[0] not in ("thick", "thin"):
                raise ParseError("edge role must be 'thick' or 'thin'", lineno)
            f = _fields(args[1:], lineno, ("genus", "tail", "head"))
            edges.append(SurfaceEdge(
                ident, Role(args[0]), _int(f["genus"], lineno, "genus"),
                _ident(f["tail"], lineno), _ident(f["head"], lineno)))
        elif kind == "boundary":
            f = _fields(args, lineno, ("genus", "vertex"))
            boundaries.append(BoundaryMark(ident, _int(f["genus"], lineno, "genus"), _ident(f["vertex"], lineno)))
        elif kind == "sphere":
            keys = {a.partition("=")[0] for a in args}
            if "host" in keys:
                f = _fields(args, lineno, ("host",), ("encloses",))
                loc = Hosted(_ident(f["host"], lineno), _id_list(f.get("encloses", ""), lineno))
            else:
                f = _fields(args, lineno, ("edge", "count"), ("encloses",))
                loc = Crossing(_ident(f["edge"], lineno), _int(f["count"], lineno, "count"),
                               _id_list(f.get("encloses", ""), lineno))
            spheres.append(TrackedSphere(ident, loc))
        elif kind == "disc":
            f = _fields(args, lineno, ("edge", "count", "boundary"))
            discs.append(TrackedDisc(ident, _ident(f["edge"], lineno), _int(f["count"], lineno, "count"),
                                     _ident(f["boundary"], lineno)))
        else:
            raise ParseError(f"unknown line kind {kind!r}", lineno)
    if not header:
        raise ParseError(f"missing header {HEADER!r}")
    g = GeneralizedSurface(frozenset(vertices), edges, boundaries, spheres, discs)
    return require_valid(g) if validate else g


def _ids(items) -> str:
    return ",".join(sorted(items))


def serialize_surface(g: GeneralizedSurface) -> str:
    lines = [HEADER]
    lines += [f"vertex {v}" for v in sorted(g.vertices)]
    for e in g.edges:
        lines.append(f"edge {e.id} {e.role.value} genus={e.genus} tail={e.tail} head={e.head}")
    for b in g.boundaries:
        lines.append(f"boundary {b.id} genus={b.genus} vertex={b.vertex}")
    for s in g.spheres:
        loc = s.location
        if isinstance(loc, Hosted):
            lines.append(f"sphere {s.id} host={loc.vertex} encloses={_ids(loc.encloses)}")
        else:
            tail = f" encloses={_ids(loc.encloses)}" if loc.encloses else ""
            lines.append(f"sphere {s.id} edge={loc.edge} count={loc.count}{tail}")
    for d in g.discs:
        lines.append(f"disc {d.id} edge={d.crossing} count={d.count} boundary={d.boundary}")
    return "\n".join(lines) + "\n"


# -- split trees -------------------------------------------------------------


def _split_top(text: str) -> list:
    """Split on commas that are not inside brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise MalformedTree("unbalanced ']'")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise MalformedTree("unbalanced '['")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _parse_region(text: str) -> Region:
    text = text.strip()
    if text == ".":
        return LEAF
    if not (text.startswith("[") and text.endswith("]")):
        raise MalformedTree(f"expected '.' or '[...]', got {text!r}")
    parts = _split_top(text[1:-1])
    if len(parts) < 3:
        raise MalformedTree(f"region {text!r} needs side, kind and children")
    try:
        side = Side(parts[0])
    except ValueError:
        raise MalformedTree(f"unknown side {parts[0]!r}") from None
    kind_text = parts[1]
    if kind_text.startswith("sep:"):
        try:
            event = SplitEvent(side, Kind.SEP, int(kind_text[4:]))
        except ValueError:
            raise MalformedTree(f"bad separating split {kind_text!r}") from None
    elif kind_text in ("nonsep", "semi"):
        event = SplitEvent(side, Kind(kind_text))
    else:
        raise MalformedTree(f"unknown event kind {kind_text!r}")
    children = tuple(_parse_region(p) for p in parts[2:])
    if len(children) != event.arity:
        raise MalformedTree(f"{kind_text} needs {event.arity} children, got {len(children)}")
    return Region(event, children)


def parse_tree(text: str, root_genus: int, assignment=()) -> SplitTree:
    """Parse tree text for a thick edge of genus ``root_genus``."""
    t = SplitTree(root_genus, _parse_region(text), assignment)
    leaves(t)  # genus arithmetic check
    return t


def format_region(r: Region) -> str:
    if r.event is None:
        return "."
    ev = r.event
    kind = f"sep:{ev.first_genus}" if ev.kind is Kind.SEP else ev.kind.value
    return "[" + ",".join([ev.side.value, kind] + [format_region(c) for c in r.children]) + "]"


def format_tree(t: SplitTree) -> str:
    return format_region(t.root)


# -- move scripts ------------------------------------------------------------

VERBS = {
    "consolidate": (("h", "f"), ()),
    "untelescope": (("h", "tree"), ("assign",)),
    "type2": (("h", "tree", "target"), ("assign",)),
    "amalgamate": (("center", "partners"), ("tubes", "side")),
    "selfamalg": (("p",), ()),
    "juggle": (("sphere", "p", "r"), ()),
    "merge": (("s",), ()),
    "fullamalg": ((), ()),
    "amalgobtained": ((), ()),
}


@dataclass(frozen=True)
class Command:
    verb: str
    args: dict = field(default_factory=dict)
    line: int = 0

    def text(self) -> str:
        return " ".join([self.verb] + [f"{k}={v}" for k, v in sorted(self.args.items())])


def _tokens(line: str) -> list:
    """Whitespace split that keeps bracketed tree text in one token."""
    out, depth, cur = [], 0, []
    for ch in line:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def parse_script(text: str) -> list:
    commands = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        verb, *rest = _tokens(line)
        if verb not in VERBS:
            raise ParseError(f"unknown move {verb!r}", lineno)
        required, optional = VERBS[verb]
        args = _fields(rest, lineno, required, optional)
        commands.append(Command(verb, args, lineno))
    return commands


def parse_pairs(value: str, lineno=None) -> dict:
    """``a:1,b:2`` -> {"a": 1, "b": 2}."""
    out = {}
    if not value:
        return out
    for item in value.split(","):
        key, sep, n = item.partition(":")
        if not sep:
            raise ParseError(f"expected id:number, got {item!r}", lineno)
        out[key] = _int(n, lineno, key)
    return out
