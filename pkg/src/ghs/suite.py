"""Seeded property sweep with re-checkable counterexamples.

Every instance is a surface plus a (possibly empty) move script, so a failing
instance can be written out as two text files and checked again later.
"""
from __future__ import annotations

import dataclasses
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .amalgamation import amalgamation_obtained, canonical_data
from .complexity import Order, compare_width, net_chi, predicted_genus, width
from .core import GeneralizedSurface, Hosted, is_heegaard
from .digraph import _cycles, compute_height, verify_height
from .errors import BadIncidence, CyclicInput, GHSError, TrackedObjectConflict
from .generate import (
    Limits,
    insert_product_pair,
    insert_type_two_site,
    random_surface,
    random_type_one_tree,
    type_two_tree,
)
from .io import Command, format_tree, parse_script, parse_surface, serialize_surface
from .juggle import JuggleSpec, check_juggle_preservation, juggle, juggle_candidates
from .script import execute
from .thinning import Side, realizable_assignments

Compare = Callable[[tuple, tuple], Order]


# -- property checks: (surface, commands, compare) -> failure text or None ---


def check_order_laws(g, commands, compare: Compare):
    w = tuple(width(g))
    padded = w + (0,)
    if compare(w, w) is not Order.EQ:
        return f"{w} does not compare equal to itself"
    if compare(w, padded) is not Order.LT or compare(padded, w) is not Order.GT:
        return f"{w} vs {padded}: got {compare(w, padded).name}/{compare(padded, w).name}, expected LT/GT"
    return None


def check_width_decrease(g, commands, compare: Compare):
    current = g
    for cmd in commands:
        after, _, _ = execute(current, cmd)
        before_w, after_w = tuple(width(current)), tuple(width(after))
        if compare(after_w, before_w) is not Order.LT:
            return f"{cmd.text()}: width {before_w} -> {after_w} is not a decrease"
        current = after
    return None


def check_netchi(g, commands, compare: Compare):
    expected = net_chi(g)
    current = g
    for cmd in commands:
        current, records, _ = execute(current, cmd)
        for r in records:
            if r["netchi"] != expected:
                return f"{cmd.text()}: netchi {expected} -> {r['netchi']} at {r['op']}"
    return None


def check_height(g, commands, compare: Compare):
    has_cycle = bool(_cycles(sorted(g.vertices), g.edges))
    try:
        f = compute_height(g)
    except CyclicInput:
        return None if has_cycle else "computed no height on an acyclic digraph"
    if has_cycle:
        return "computed a height on a digraph with a coherent cycle"
    if not verify_height(g, f):
        return f"computed height {dict(f)} fails the axioms"
    return None


def _last_vertex(g, f, candidates):
    return candidates[-1]


def check_amalgamation(g, commands, compare: Compare):
    out, _ = amalgamation_obtained(g)
    if not is_heegaard(out):
        return "amalgamation did not reach a Heegaard digraph"
    if out.thick_edges[0].genus != predicted_genus(g):
        return f"genus {out.thick_edges[0].genus}, netchi predicts {predicted_genus(g)}"
    other, _ = amalgamation_obtained(g, chooser=_last_vertex)
    if canonical_data(other) != canonical_data(out):
        return f"order dependence: {canonical_data(out)} vs {canonical_data(other)}"
    return None


def check_juggle(g, commands, compare: Compare):
    current = g
    for cmd in commands:
        spec = JuggleSpec(cmd.args["p"], cmd.args["r"], sphere=cmd.args["sphere"])
        after = juggle(current, spec)
        report = check_juggle_preservation(current, after, spec)
        if not report.ok:
            return f"{cmd.text()}: {report}"
        current = after
    return None


CHECKS = {
    "order-laws": check_order_laws,
    "width-decrease": check_width_decrease,
    "netchi": check_netchi,
    "height": check_height,
    "amalgamation": check_amalgamation,
    "juggle": check_juggle,
}


# -- instance generation -----------------------------------------------------


@dataclass(frozen=True)
class Instance:
    prop: str
    seed: int
    surface: GeneralizedSurface
    commands: tuple = ()


def _cmd(verb, **args):
    return Command(verb, {k: v for k, v in args.items() if v is not None})


def _assign_text(amap):
    return ",".join(f"{k}:{v}" for k, v in sorted(amap.items())) or None


def thinning_instances(seed: int, g: GeneralizedSurface, rng: random.Random) -> list:
    """One consolidation, one type I and one type II instance (when possible).

    Tracked objects are dropped: thinning refuses to rewrite a thick edge that
    a tracked object lives on.
    """
    g = g.replace(spheres=(), discs=())
    out = []
    if g.thin_edges:
        F = rng.choice(g.thin_edges)
        g2, h, _ = insert_product_pair(g, F.id)
        out.append((g2, (_cmd("consolidate", h=h, f=F.id),)))
    big = [H for H in g.thick_edges if H.genus >= 2]
    if big:
        H = rng.choice(big)
        t = random_type_one_tree(rng, H.genus)
        options = list(realizable_assignments(g, H.id, t))
        if options:
            amap = rng.choice(options)
            out.append((g, (_cmd("untelescope", h=H.id, tree=format_tree(t), assign=_assign_text(amap)),)))
    site = insert_type_two_site(g, rng)
    if site is not None:
        g3, h, target, k = site
        t = type_two_tree(rng, g3.edge(h).genus, Side.BELOW, k)
        lower = g3.vertex(g3.edge(h).tail)
        amap = {e: 1 for e in lower.minus_thin if e != target}
        out.append((g3, (_cmd("type2", h=h, tree=format_tree(t), target=target,
                              assign=_assign_text(amap)),)))
    return out


def juggle_instances(g: GeneralizedSurface, rng: random.Random, tries: int = 4) -> list:
    out = []
    hosted = [s for s in g.spheres if isinstance(s.location, Hosted)]
    for _ in range(tries):
        if not hosted:
            break
        s = rng.choice(hosted)
        pairs = juggle_candidates(g, s.location.vertex)
        if not pairs:
            continue
        p, r = rng.choice(pairs)
        try:
            juggle(g, JuggleSpec(p, r, sphere=s.id))
        except (BadIncidence, TrackedObjectConflict):
            continue
        out.append((g, (_cmd("juggle", sphere=s.id, p=p, r=r),)))
    return out


def instances_for_seed(seed: int, limits: Limits) -> list:
    rng = random.Random(f"suite-{seed}")
    acyclic = random_surface(seed, limits)
    cyclic = random_surface(seed, dataclasses.replace(limits, loops=1 + seed % 2, spheres=max(1, limits.spheres)))
    out = [
        Instance("order-laws", seed, acyclic),
        Instance("height", seed, acyclic),
        Instance("height", seed, cyclic),
        Instance("amalgamation", seed, acyclic),
        Instance("amalgamation", seed, cyclic),
        Instance("netchi", seed, acyclic, (_cmd("amalgobtained"),)),
        Instance("netchi", seed, cyclic, (_cmd("amalgobtained"),)),
    ]
    for g, cmds in thinning_instances(seed, acyclic, rng):
        out.append(Instance("width-decrease", seed, g, cmds))
        out.append(Instance("netchi", seed, g, cmds))
    for g, cmds in juggle_instances(cyclic, rng):
        out.append(Instance("juggle", seed, g, cmds))
        out.append(Instance("netchi", seed, g, cmds))
    return out


# -- driver ------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    prop: str
    seed: int
    surface: str
    script: str
    detail: str


@dataclass
class SuiteReport:
    checked: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = [f"{name}: {n} checked" for name, n in sorted(self.checked.items())]
        for cx in self.failures:
            out.append(f"FAIL {cx.prop} seed={cx.seed}: {cx.detail}")
        return out


def run_check(prop: str, g, commands, compare: Compare = compare_width) -> Optional[str]:
    try:
        return CHECKS[prop](g, list(commands), compare)
    except GHSError as err:
        return f"{type(err).__name__}: {err}"


def verify_suite(seeds, limits: Optional[Limits] = None, compare: Compare = compare_width) -> SuiteReport:
    """Run every property over the instances generated from ``seeds``."""
    limits = limits or Limits(spheres=2, discs=1)
    report = SuiteReport()
    for seed in seeds:
        for inst in instances_for_seed(seed, limits):
            report.checked[inst.prop] += 1
            detail = run_check(inst.prop, inst.surface, inst.commands, compare)
            if detail is not None:
                script = "".join(c.text() + "\n" for c in inst.commands)
                report.failures.append(Counterexample(
                    inst.prop, seed, serialize_surface(inst.surface), script, detail))
    return report


def recheck(cx: Counterexample, compare: Compare = compare_width) -> Optional[str]:
    """Re-run a counterexample from its text form."""
    g = parse_surface(cx.surface)
    return run_check(cx.prop, g, parse_script(cx.script), compare)


def padded_compare(a, b) -> Order:
    """Zero-padding comparison; wrong on sequences differing by trailing zeros."""
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    if a == b:
        return Order.EQ
    return Order.LT if a < b else Order.GT
