"""Command-line front end: ``prymlab graph|triple|split|convert|hurwitz|examples``.

Exit codes: 0 success, 1 validation failure, 2 budget exceeded, 3 I/O or
parse error.
"""
from __future__ import annotations

import argparse
import re
import sys

from . import __version__
from .coverings import DEFAULT_BUDGET, count_hurwitz_classes
from .errors import PrymlabError, SpecError, ValidationError
from .examples import EXAMPLE_IDS, run_example
from .permgroups import PermGroup, parse_cycles, symmetric_group
from .report import (
    SCHEMA,
    conversion_section,
    dumps,
    fiber_product_section,
    graph_section,
    render_text,
    split_section,
    triple_report,
    write_report,
)
from .specio import graph_from_spec, load_json, tower_from_spec, triple_from_spec


def _emit(args, report, text=None):
    report.setdefault("schema", SCHEMA)
    report.setdefault("warnings", [])
    if args.out:
        write_report(report, args.out)
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        print(text if text is not None else render_text(report))


def cmd_graph(args):
    if args.spec:
        spec = load_json(args.spec)
    else:
        if not args.kind:
            raise SpecError("missing-field", "graph needs --kind or --spec")
        spec = {"kind": args.kind}
        for key in ("n", "q", "k"):
            if getattr(args, key) is not None:
                spec[key] = getattr(args, key)
        if args.m_copies is not None:
            spec["m_copies"] = args.m_copies
    graph = graph_from_spec(spec)
    section = graph_section(graph)
    warnings = section.pop("warnings", [])
    _emit(args, {"input": spec, "graph": section, "warnings": warnings})
    return 0


def cmd_triple(args):
    spec = load_json(args.path)
    triple = triple_from_spec(spec)
    _emit(args, triple_report(triple, d0=args.d0, input_echo=args.path))
    return 0


def cmd_split(args):
    from .splitting import canonical_split, from_tower

    spec = load_json(args.path)
    if isinstance(spec, dict) and "d" in spec and "matrix" not in spec:
        triple = from_tower(tower_from_spec(spec))
    else:
        triple = triple_from_spec(spec)
    split = canonical_split(triple)
    report = triple_report(triple, input_echo=args.path)
    report["split"] = split_section(split, triple)
    _emit(args, report)
    return 0


def cmd_convert(args):
    from .splitting import analyze_type_l1l2, convert_type_l

    triple = triple_from_spec(load_json(args.path))
    conv = convert_type_l(triple, args.direction)
    report = triple_report(conv.target, input_echo=args.path)
    report["conversion"] = conversion_section(conv)
    source = triple_report(conv.source)["triple"]
    report["conversion"]["preserved"] = {
        key: source[key] == report["triple"][key] for key in ("genus", "d_plus", "d_minus", "fixed_point_free")
    }
    if args.direction == "to_complement":
        report["fiber_product"] = fiber_product_section(analyze_type_l1l2(conv.target))
    _emit(args, report)
    return 0


def _parse_group(text, degree):
    m = re.fullmatch(r"\s*S(\d+)\s*", text)
    if m:
        return symmetric_group(int(m.group(1)))
    if degree is None:
        raise SpecError("missing-field", "--degree is required with an explicit generator list")
    gens = [parse_cycles(g, degree) for g in text.split(";") if g.strip()]
    return PermGroup(gens, degree)


def cmd_hurwitz(args):
    group = _parse_group(args.group, args.degree)
    classes = [parse_cycles(c, group.degree) for c in args.cls]
    res = count_hurwitz_classes(
        group, classes, transitive=args.filter == "transitive", generating=args.filter == "generating", budget=args.budget
    )
    report = {
        "hurwitz": {
            "group_order": group.order(),
            "classes": args.cls,
            "filter": args.filter,
            "tuples": res.tuples,
            "orbits": res.classes,
            "explored": res.explored,
            "budget": args.budget,
        }
    }
    _emit(args, report)
    return 0


def cmd_examples(args):
    ids = EXAMPLE_IDS if args.id == "all" else (args.id,)
    status = 0
    reports = []
    lines = []
    for ex in ids:
        params = {"n": args.n, "l": args.l, "l1": args.l1, "l2": args.l2} if args.id != "all" else {}
        run = run_example(ex, use_cache=not args.no_cache, **params)
        lines.extend(run.lines())
        reports.append(run.report)
        if not run.passed:
            status = 1
    report = reports[0] if len(reports) == 1 else {"examples": reports, "warnings": []}
    _emit(args, report, "\n".join(lines))
    return status


def build_parser():
    parser = argparse.ArgumentParser(prog="prymlab", description="Prym data from graphs and coverings of the line.")
    parser.add_argument("--version", action="version", version=f"prymlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the structured JSON report to PATH")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", parents=[common], help="parameters, spectrum and Prym certificate of a graph")
    g.add_argument("--kind", choices=["lattice", "lattice_complement", "latin_square", "schlaefli", "paley", "complete_union"])
    g.add_argument("--spec", metavar="PATH", help="graph spec JSON file")
    g.add_argument("--n", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m-copies", type=int)
    g.set_defaults(func=cmd_graph)

    t = sub.add_parser("triple", parents=[common], help="analyse a triple spec file")
    t.add_argument("path")
    t.add_argument("--d0", type=int, help="d0 for m >= 2 (default: quotient genus)")
    t.set_defaults(func=cmd_triple)

    s = sub.add_parser("split", parents=[common], help="canonical splitting of a triple or tower spec")
    s.add_argument("path")
    s.set_defaults(func=cmd_split)

    c = sub.add_parser("convert", parents=[common], help="move a nine-point triple across the lattice isomorphism")
    c.add_argument("path")
    c.add_argument("--direction", choices=["to_complement", "to_lattice"], default="to_complement")
    c.set_defaults(func=cmd_convert)

    h = sub.add_parser("hurwitz", parents=[common], help="count tuples with trivial product in given classes")
    h.add_argument("--group", required=True, help='"S3" or generators separated by ";" (with --degree)')
    h.add_argument("--degree", type=int)
    h.add_argument("--class", dest="cls", action="append", required=True, metavar="CYCLES", help="class representative (repeat)")
    h.add_argument("--filter", choices=["none", "transitive", "generating"], default="none")
    h.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    h.set_defaults(func=cmd_hurwitz)

    e = sub.add_parser("examples", parents=[common], help="run a worked family and compare with its closed forms")
    e.add_argument("id", choices=list(EXAMPLE_IDS) + ["all"])
    e.add_argument("--n", type=int)
    e.add_argument("--l", type=int)
    e.add_argument("--l1", type=int)
    e.add_argument("--l2", type=int)
    e.add_argument("--no-cache", action="store_true", help="do not read or write the fixture cache")
    e.set_defaults(func=cmd_examples)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PrymlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except RecursionError:
        print("error: input too large", file=sys.stderr)
        return ValidationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
