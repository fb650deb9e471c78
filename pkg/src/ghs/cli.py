"""Command-line entry point.

Exit status: 0 ok, 1 property or validation failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io
from .amalgamation import amalgamation_obtained, canonical_data
from .complexity import net_chi, predicted_genus, width
from .core import validate
from .digraph import coherent_cycles, compute_height, cycle_sphere_condition
from .errors import CyclicInput, GHSError, MalformedTree, ParseError, PreconditionFailed, ValidationError
from .generate import Limits, random_surface
from .pipeline import run_pipeline_strong_haken
from .script import run_script
from .suite import verify_suite
from .thinning import product_pairs

REPORT_DIR_ENV = "GHS_REPORT_DIR"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _load(path, check=True):
    return io.parse_surface(_read(path), validate=check)


def _emit(args, human, record):
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(human)


def _warnings(g) -> list:
    out = []
    pairs = product_pairs(g)
    if pairs:
        out.append(f"product compressionbodies remain: {pairs}")
    if not cycle_sphere_condition(g):
        out.append("a coherent cycle avoids every thin sphere")
    return out


def cmd_validate(args):
    g = _load(args.file, check=False)
    report = validate(g)
    if not report.ok:
        if args.json:
            print(json.dumps({"valid": False, "violations": [
                {"code": v.code, "subject": v.subject, "message": v.message} for v in report]}, sort_keys=True))
        else:
            for v in report:
                print(f"{v.code}\t{v.subject}\t{v.message}")
        return 1
    warns = _warnings(g)
    _emit(args, "\n".join(["valid"] + [f"warning: {w}" for w in warns]), {"valid": True, "warnings": warns})
    return 1 if warns and args.strict else 0


def cmd_width(args):
    w = list(width(_load(args.file)))
    _emit(args, " ".join(map(str, w)), {"width": w})
    return 0


def cmd_netchi(args):
    g = _load(args.file)
    _emit(args, str(net_chi(g)), {"netchi": net_chi(g), "predicted_genus": predicted_genus(g)})
    return 0


def cmd_height(args):
    g = _load(args.file)
    try:
        f = compute_height(g)
    except CyclicInput:
        cycles = coherent_cycles(g)
        _emit(args, "cyclic: " + "; ".join(" ".join(c) for c in cycles),
              {"acyclic": False, "cycles": cycles})
        return 1
    _emit(args, "\n".join(f"{k}\t{v}" for k, v in sorted(f.items())), {"acyclic": True, "height": dict(sorted(f.items()))})
    return 0


def _report_out(args, report, final_ok=True):
    if args.json:
        sys.stdout.write(report.to_jsonl())
    else:
        for r in report.records:
            print(f"{r['step']:>3} {r['op']:<24} width={tuple(r['width'])} netchi={r['netchi']} "
                  f"acyclic={r['acyclic']} tracked={r['tracked']}")
        print("final " + json.dumps(report.final, sort_keys=True))
    if getattr(args, "output", None):
        Path(args.output).write_text(io.serialize_surface(report.surface))
    return 0 if final_ok else 1


def cmd_apply(args):
    g = _load(args.file)
    report = run_script(g, _read(args.script))
    ok = report.netchi_constant or not args.strict
    return _report_out(args, report, ok)


def cmd_amalg(args):
    g = _load(args.file)
    out, log = amalgamation_obtained(g)
    data = canonical_data(out)
    record = {"genus": data[0], "below": list(data[1]), "above": list(data[2]),
              "tracked": [list(t) for t in data[3]], "steps": len(log)}
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        sys.stdout.write(io.serialize_surface(out))
    return 0


def cmd_pipeline(args):
    g = _load(args.file)
    try:
        report = run_pipeline_strong_haken(g)
    except PreconditionFailed as err:
        print(f"precondition failed: {err}", file=sys.stderr)
        return 1
    return _report_out(args, report, report.final["ok"])


def cmd_gen(args):
    limits = Limits(max_thick=args.max_thick, max_genus=args.max_genus, loops=args.loops,
                    spheres=args.spheres, discs=args.discs)
    sys.stdout.write(io.serialize_surface(random_surface(args.seed, limits)))
    return 0


def _seed_range(text):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return range(int(lo), int(lo) + 1)
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def cmd_verify(args):
    report = verify_suite(args.seeds, Limits(max_thick=args.max_thick, spheres=2, discs=1))
    if args.json:
        print(json.dumps({"checked": dict(sorted(report.checked.items())),
                          "failures": [{"property": c.prop, "seed": c.seed, "detail": c.detail}
                                       for c in report.failures]}, sort_keys=True))
    else:
        print("\n".join(report.lines()))
    out_dir = args.report_dir or os.environ.get(REPORT_DIR_ENV)
    if out_dir and report.failures:
        root = Path(out_dir)
        root.mkdir(parents=True, exist_ok=True)
        for n, cx in enumerate(report.failures):
            stem = f"{cx.prop}-seed{cx.seed}-{n}"
            (root / f"{stem}.ghs").write_text(cx.surface)
            (root / f"{stem}.moves").write_text(cx.script)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghs", description="Generalized Heegaard surface engine")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON records")
    common.add_argument("--strict", action="store_true", help="treat warnings as failures")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("validate", cmd_validate, "check structural invariants"),
        ("width", cmd_width, "print the width sequence"),
        ("netchi", cmd_netchi, "print netchi"),
        ("height", cmd_height, "print the longest-path height function"),
        ("amalg", cmd_amalg, "amalgamate to a Heegaard surface"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.set_defaults(func=fn)

    p = sub.add_parser("apply", parents=[common], help="run a move script")
    p.add_argument("file")
    p.add_argument("script")
    p.add_argument("-o", "--output", help="write the final surface here")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("pipeline", parents=[common], help="scenario pipelines")
    p.add_argument("name", choices=["strong-haken"])
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the final surface here")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("gen", parents=[common], help="generate a random surface")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-thick", type=int, default=4)
    p.add_argument("--max-genus", type=int, default=2)
    p.add_argument("--loops", type=int, default=0)
    p.add_argument("--spheres", type=int, default=0)
    p.add_argument("--discs", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="run the property suite over seeds")
    p.add_argument("--seeds", type=_seed_range, default=range(0, 20), help="A..B inclusive")
    p.add_argument("--max-thick", type=int, default=4)
    p.add_argument("--report-dir", help=f"write counterexamples here (or set {REPORT_DIR_ENV})")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ParseError, MalformedTree, UsageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValidationError as err:
        print(f"invalid: {err}", file=sys.stderr)
        return 1
    except GHSError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
