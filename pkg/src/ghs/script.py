"""Move-script interpreter and per-step scenario reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .amalgamation import (
    AmalgSide,
    AmalgSpec,
    amalgamate,
    amalgamation_obtained,
    fully_amalgamate,
    merge_tubes,
    self_amalgamate,
)
from .complexity import net_chi, predicted_genus, width
from .core import GeneralizedSurface, Hosted, is_heegaard
from .digraph import is_acyclic
from .errors import ParseError
from .io import Command, parse_pairs, parse_script, parse_tree
from .juggle import JuggleSpec, juggle
from .thinning import consolidate, type_ii_move, untelescope


def tracked_counts(g: GeneralizedSurface) -> dict:
    """Crossing count per tracked object; hosted spheres show as "hosted"."""
    out = {}
    for s in g.spheres:
        out[s.id] = "hosted" if isinstance(s.location, Hosted) else s.location.count
    for d in g.discs:
        out[d.id] = d.count
    return out


def snapshot(step: int, op: str, g: GeneralizedSurface, chi_offset: int = 0) -> dict:
    return {
        "step": step,
        "op": op,
        "width": list(width(g)),
        "netchi": net_chi(g) + chi_offset,
        "acyclic": is_acyclic(g),
        "tracked": tracked_counts(g),
    }


def summary(g: GeneralizedSurface, start: GeneralizedSurface) -> dict:
    heegaard = is_heegaard(g)
    return {
        "final": True,
        "heegaard": heegaard,
        "genus": g.thick_edges[0].genus if heegaard else None,
        "predicted_genus": predicted_genus(start),
        "width": list(width(g)),
        "netchi": net_chi(g),
        "tracked": tracked_counts(g),
    }


@dataclass
class ScenarioReport:
    records: list = field(default_factory=list)
    final: dict = field(default_factory=dict)
    surface: GeneralizedSurface = None

    def lines(self) -> list:
        out = [json.dumps(r, sort_keys=True) for r in self.records]
        if self.final:
            out.append(json.dumps(self.final, sort_keys=True))
        return out

    def to_jsonl(self) -> str:
        return "\n".join(self.lines()) + "\n"

    @property
    def netchi_constant(self) -> bool:
        return len({r["netchi"] for r in self.records}) <= 1


def _ids(value):
    return [v for v in value.split(",") if v]


def _amalg_records(log, step, op, chi_offset_for):
    out = []
    for k, entry in enumerate(log):
        step += 1
        out.append(snapshot(step, f"{op}:{entry.op}", entry.surface, chi_offset_for(k)))
    return out, step


def _offsets(log):
    """netchi of the thin spheres set aside before self-amalgamation."""
    idx = next((k for k, e in enumerate(log) if e.op == "selfamalg"), None)
    if idx is None:
        return lambda k: 0
    extra = 2 * len(log[idx].spec)
    return lambda k: extra if k < idx else 0


def _side(text, line):
    try:
        return AmalgSide(text)
    except ValueError:
        raise ParseError(f"side must be 'above' or 'below', got {text!r}", line) from None


def execute(g: GeneralizedSurface, cmd: Command, step: int = 0):
    """Run one command; returns ``(surface, [records], step)``."""
    a = cmd.args
    if cmd.verb == "consolidate":
        g = consolidate(g, a["h"], a["f"])
    elif cmd.verb == "untelescope":
        t = parse_tree(a["tree"], g.edge(a["h"]).genus, parse_pairs(a.get("assign", ""), cmd.line))
        g = untelescope(g, a["h"], t)
    elif cmd.verb == "type2":
        t = parse_tree(a["tree"], g.edge(a["h"]).genus, parse_pairs(a.get("assign", ""), cmd.line))
        g = type_ii_move(g, a["h"], t, a["target"])
    elif cmd.verb == "amalgamate":
        side = _side(a["side"], cmd.line) if "side" in a else None
        spec = AmalgSpec(a["center"], tuple(_ids(a["partners"])), side,
                         parse_pairs(a.get("tubes", ""), cmd.line))
        g = amalgamate(g, spec)
    elif cmd.verb == "selfamalg":
        g = self_amalgamate(g, _ids(a["p"]))
    elif cmd.verb == "juggle":
        g = juggle(g, JuggleSpec(a["p"], a["r"], sphere=a["sphere"]))
    elif cmd.verb == "merge":
        g = merge_tubes(g, a["s"])
    elif cmd.verb in ("fullamalg", "amalgobtained"):
        run = fully_amalgamate if cmd.verb == "fullamalg" else amalgamation_obtained
        g_out, log = run(g)
        records, step = _amalg_records(log, step, cmd.verb, _offsets(log))
        return g_out, records, step
    else:
        raise ParseError(f"unknown move {cmd.verb!r}", cmd.line)
    step += 1
    return g, [snapshot(step, cmd.verb, g)], step


def run_script(g: GeneralizedSurface, script) -> ScenarioReport:
    """Apply a script (text or parsed commands) and record every step."""
    commands = parse_script(script) if isinstance(script, str) else list(script)
    report = ScenarioReport(records=[snapshot(0, "start", g)])
    start, step = g, 0
    for cmd in commands:
        g, records, step = execute(g, cmd, step)
        report.records.extend(records)
    report.final = summary(g, start)
    report.surface = g
    return report
