"""Command line interface.

Exit codes: 0 when the command succeeds (and any requested check passes),
1 when a requested law/validation/comparison fails, 2 on usage, parse, or
precondition errors.
"""

import argparse
import json
import sys

from . import fixtures
from .connectives import imp_sets, odot_sets
from .errors import OmqlError, ParseError
from .expr import parse_expr
from .frames import chain_frame
from .orders import Rel, cmp_masks, equiv_masks
from .poset import bits
from .reconstruct import build_preference, verify_reconstruction
from .tense import star, tense
from .verify import (
    REL_SYMBOL,
    check_adjointness,
    check_composition_laws,
    check_dynamic_pair,
    check_preservation_transfer,
    compare_setvals,
    eval_inequality,
)

FORMATS = ("table", "tsv", "json")


def fmt_set(poset, mask):
    names = poset.subset_names(mask)
    if len(names) == 1:
        return names[0]
    return "{" + ",".join(names) + "}"


def render_table(rows):
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    )


def emit_rows(args, rows, json_payload):
    if args.format == "json":
        print(json.dumps(json_payload, ensure_ascii=False, indent=2))
    elif args.format == "tsv":
        print("\n".join("\t".join(row) for row in rows))
    else:
        print(render_table(rows))


def parse_subset(poset, text):
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        names = [t.strip() for t in text[1:-1].split(",") if t.strip()]
    else:
        names = [text]
    if not names:
        raise ParseError(f"empty set literal {text!r}")
    mask = 0
    for name in names:
        mask |= 1 << poset.index(name)
    return mask


def _split_inline(text):
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def load_history_file(path, poset, frame):
    """History file: one line per instant, `<time> <elem> [<elem> ...]`."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    cells = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        t = frame.index(parts[0])
        if t in cells:
            raise ParseError(f"instant {parts[0]!r} assigned twice", lineno)
        if len(parts) < 2:
            raise ParseError("missing element names", lineno)
        cells[t] = [poset.index(name) for name in parts[1:]]
    missing = [frame.names[t] for t in range(frame.m) if t not in cells]
    if missing:
        raise ParseError(f"{path}: no value for instant(s) {', '.join(missing)}")
    if all(len(v) == 1 for v in cells.values()):
        return "val", tuple(cells[t][0] for t in range(frame.m))
    out = []
    for t in range(frame.m):
        mask = 0
        for a in cells[t]:
            mask |= 1 << a
        out.append(mask)
    return "set", tuple(out)


def parse_history(text, poset, frame):
    """A path, a fixture shorthand, or inline `v1,v2,...` / `{a,b},...`."""
    short = fixtures.history_shorthand(text)
    if short is not None:
        return load_history_file(fixtures.fixture_path(short), poset, frame)
    if "," not in text and "{" not in text:
        return load_history_file(text, poset, frame)
    parts = _split_inline(text)
    if len(parts) != frame.m:
        raise ParseError(
            f"history {text!r} has {len(parts)} values for {frame.m} instants"
        )
    masks = [parse_subset(poset, part) for part in parts]
    if all(mask.bit_count() == 1 for mask in masks):
        return "val", tuple(mask.bit_length() - 1 for mask in masks)
    return "set", tuple(masks)


def parse_bindings(items, poset, frame):
    bindings = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"binding {item!r} is not name=value")
        bindings[name] = parse_history(value, poset, frame)
    return bindings


def get_poset(args, validate=True):
    return fixtures.resolve_poset(args.poset, validate=validate)


def get_frame(args, parser):
    if getattr(args, "frame", None):
        return fixtures.resolve_frame(args.frame)
    if getattr(args, "relation", None) == "chain-le":
        if args.points < 1:
            parser.error("--points must be at least 1")
        return chain_frame(args.points)
    parser.error("a frame is required: --frame FILE or --relation chain-le")


def reports_exit(args, reports):
    rows = [[r.line()] for r in reports]
    payload = [
        {
            "law": r.law,
            "universe": r.universe,
            "passed": r.passed,
            "vacuous": r.vacuous,
            "checked": r.checked,
            "witness": r.witness,
            "notes": r.notes,
        }
        for r in reports
    ]
    if args.format == "json":
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        for r in reports:
            print(r.line())
            for note in r.notes:
                print(f"    {note}")
    return 0 if all(r.passed for r in reports) else 1


# -- subcommands -----------------------------------------------------------


def cmd_validate(args, parser):
    poset = get_poset(args, validate=False)
    report = poset.validate()
    if args.format == "json":
        payload = {
            "ok": report.ok,
            "checks": [
                {"axiom": c.axiom, "passed": c.passed, "witness": c.witness}
                for c in report.checks
            ],
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(report.summary())
    return 0 if report.ok else 1


def cmd_eval(args, parser):
    poset = get_poset(args)
    lhs = parse_subset(poset, args.lhs)
    rhs = parse_subset(poset, args.rhs)
    fn = odot_sets if args.op == "odot" else imp_sets
    result = fn(poset, lhs, rhs)
    if args.format == "json":
        print(json.dumps(list(poset.subset_names(result)), ensure_ascii=False))
    else:
        print(fmt_set(poset, result))
    return 0


def cmd_cmp(args, parser):
    poset = get_poset(args)
    if args.val:
        frame = get_frame(args, parser)
        bindings = parse_bindings(args.val, poset, frame)
        report = eval_inequality(
            poset,
            frame,
            parse_expr(args.lhs),
            args.kind,
            parse_expr(args.rhs),
            bindings,
        )
        return reports_exit(args, [report])
    lhs = parse_subset(poset, args.lhs)
    rhs = parse_subset(poset, args.rhs)
    if args.kind in ("approx1", "approx2"):
        holds = equiv_masks(poset, 1 if args.kind == "approx1" else 2, lhs, rhs)
    elif args.kind == "eq":
        holds = lhs == rhs
    else:
        holds = cmp_masks(poset, Rel.parse(args.kind), lhs, rhs)
    if args.format == "json":
        print(json.dumps({"holds": holds}))
    else:
        print("true" if holds else "false")
    return 0 if holds else 1


def _setval_rows(poset, frame, label, sv):
    head = ["t"] + list(frame.names)
    row = [label] + [fmt_set(poset, mask) for mask in sv]
    return [head, row]


def _setval_json(poset, frame, sv):
    return [
        {"time": frame.names[t], "value": list(poset.subset_names(mask))}
        for t, mask in enumerate(sv)
    ]


def cmd_tense(args, parser):
    poset = get_poset(args)
    frame = get_frame(args, parser)
    kind, value = parse_history(args.val, poset, frame)
    if kind != "val":
        parser.error("tense takes an exact history; use star/cmp for sets")
    result = tense(poset, frame, args.op, value)
    label = f"{args.op}(q)"
    emit_rows(
        args,
        _setval_rows(poset, frame, label, result),
        {"op": args.op, "result": _setval_json(poset, frame, result)},
    )
    return 0


def cmd_star(args, parser):
    poset = get_poset(args)
    frame = get_frame(args, parser)
    try:
        outer, inner = args.ops.split(",")
    except ValueError:
        parser.error("--ops takes OUTER,INNER (e.g. G,P)")
    for op in (outer, inner):
        if op not in "PFHG" or len(op) != 1:
            parser.error(f"unknown operator {op!r}")
    kind, value = parse_history(args.val, poset, frame)
    if kind != "val":
        parser.error("star takes an exact history")
    result = star(poset, frame, outer, inner, value, cross_check=args.cross_check)
    label = f"{outer}*{inner}(q)"
    emit_rows(
        args,
        _setval_rows(poset, frame, label, result),
        {"ops": f"{outer}*{inner}", "result": _setval_json(poset, frame, result)},
    )
    return 0


def cmd_check(args, parser):
    poset = get_poset(args)
    reports = []
    if args.what == "adjointness":
        reports.append(check_adjointness(poset))
    elif args.what == "dynamic-pair":
        frame = get_frame(args, parser)
        pairs = ("PG", "FH") if args.pair == "both" else (args.pair,)
        for pair in pairs:
            reports += check_dynamic_pair(
                poset,
                frame,
                pair,
                exhaustive=args.exhaustive,
                sample=args.sample,
                seed=args.seed,
            )
    elif args.what == "laws":
        frame = get_frame(args, parser)
        reports += check_composition_laws(
            poset,
            frame,
            exhaustive=args.exhaustive,
            sample=args.sample,
            seed=args.seed,
        )
    else:
        frame = get_frame(args, parser)
        triple = args.triple.upper()
        if len(triple) != 3 or any(op not in "PFHG" for op in triple):
            parser.error("--triple takes three operators, e.g. GGG")
        directions = ("i", "ii") if args.direction == "both" else (args.direction,)
        for direction in directions:
            reports.append(
                check_preservation_transfer(
                    poset,
                    frame,
                    *triple,
                    direction=direction,
                    exhaustive=args.exhaustive,
                    sample=args.sample,
                    seed=args.seed,
                )
            )
    return reports_exit(args, reports)


def cmd_reconstruct(args, parser):
    poset = get_poset(args)
    frame = get_frame(args, parser)
    result = build_preference(
        poset,
        frame,
        mode=args.mode,
        exhaustive=args.exhaustive,
        sample=args.sample,
        seed=args.seed,
    )
    if args.format == "json":
        payload = {
            "mode": result.mode,
            "coverage": result.coverage,
            "pairs": result.pairs(),
            "contains_original": result.contains_original,
            "added": result.added,
            "missing": result.missing,
            "claims": [
                {"claim": c.claim, "level": c.level, "holds": c.holds}
                for c in result.claims
            ],
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(f"mode: {result.mode}  coverage: {result.coverage}")
        head = [""] + list(result.names)
        rows = [head]
        for s, name in enumerate(result.names):
            rows.append(
                [name]
                + [
                    "x" if result.relation[s, t] else "."
                    for t in range(len(result.names))
                ]
            )
        print(render_table(rows))
        print(
            "original relation preserved"
            if result.contains_original
            else f"original pairs lost: {result.missing}"
        )
        if result.added:
            print(f"pairs added beyond the original: {result.added}")
        for c in result.claims:
            print(" ", c.line())
    ok = result.contains_original and all(c.holds for c in result.claims)
    if args.verify:
        report = verify_reconstruction(poset, frame, result)
        if args.format != "json":
            print(report.line())
        ok = ok and report.passed
    return 0 if ok else 1


DEMO_ROWS = [
    "H phi odot p q",
    "odot H p H q",
    "H phi imp p q",
    "imp H p H q",
    "G phi odot p q",
    "odot G p G q",
    "G phi imp p q",
    "imp G p G q",
]

DEMO_CONCLUSIONS = [
    ("H phi odot p q", "le", "odot H p H q"),
    ("H phi imp p q", "le2", "imp H p H q"),
    ("G phi odot p q", "le", "odot G p G q"),
    ("G phi imp p q", "le1", "imp G p G q"),
]


def cmd_demo(args, parser):
    if args.which != "example1":
        parser.error(f"unknown demo {args.which!r}")
    poset = fixtures.fig1()
    frame = fixtures.chain3()
    histories = fixtures.example_histories(poset)
    bindings = {
        "p": ("val", histories["p"]),
        "q": ("val", histories["q"]),
    }
    from .expr import Context, eval_to_setval

    ctx = Context(poset, frame, bindings)
    rows = [["t"] + list(frame.names)]
    json_rows = []
    for text in DEMO_ROWS:
        node = parse_expr(text)
        sv = eval_to_setval(node, ctx)
        rows.append([node.label()] + [fmt_set(poset, mask) for mask in sv])
        json_rows.append(
            {"expr": node.label(), "values": _setval_json(poset, frame, sv)}
        )
    conclusions = []
    all_ok = True
    for left, token, right in DEMO_CONCLUSIONS:
        lnode, rnode = parse_expr(left), parse_expr(right)
        lval = eval_to_setval(lnode, ctx)
        rval = eval_to_setval(rnode, ctx)
        holds, _ = compare_setvals(poset, token, lval, rval)
        converse, _ = compare_setvals(poset, token, rval, lval)
        proper = holds and not converse
        all_ok = all_ok and proper
        conclusions.append(
            {
                "law": f"{lnode.label()} {REL_SYMBOL[token]} {rnode.label()}",
                "holds": holds,
                "proper": proper,
            }
        )
    if args.format == "json":
        print(
            json.dumps(
                {"rows": json_rows, "conclusions": conclusions},
                ensure_ascii=False,
                indent=2,
            )
        )
    else:
        table = render_table(rows)
        lines = [table, ""]
        for c in conclusions:
            tag = "proper" if c["proper"] else ("holds" if c["holds"] else "FAILS")
            lines.append(f"{c['law']}    {tag}")
        out = "\n".join(lines)
        if args.format == "tsv":
            out = "\n".join("\t".join(r) for r in rows) + "\n" + "\n".join(
                f"{c['law']}\t{'proper' if c['proper'] else 'holds' if c['holds'] else 'FAILS'}"
                for c in conclusions
            )
        print(out)
    return 0 if all_ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="omql",
        description=(
            "Evaluate inexact connectives and tense operators over finite "
            "orthomodular posets, and verify their laws."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, frame=True, sweep_opts=False):
        p.add_argument("--poset", required=True, help="poset file or shorthand")
        p.add_argument(
            "--format", choices=FORMATS, default="table", help="output format"
        )
        if frame:
            p.add_argument("--frame", help="frame file or shorthand")
            p.add_argument(
                "--relation",
                choices=["chain-le"],
                help="generate a frame instead of loading one",
            )
            p.add_argument(
                "--points", type=int, default=3, help="instants for --relation"
            )
        if sweep_opts:
            group = p.add_mutually_exclusive_group()
            group.add_argument(
                "--exhaustive",
                action="store_true",
                default=None,
                help="force full enumeration",
            )
            group.add_argument(
                "--sample", type=int, help="force sampling with this many draws"
            )
            p.add_argument("--seed", type=int, default=0, help="sampling seed")

    p = sub.add_parser("validate", help="check the axioms of a poset file")
    add_common(p, frame=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="apply a connective to sets of elements")
    add_common(p, frame=False)
    p.add_argument("--op", choices=["odot", "imp"], required=True)
    p.add_argument("--lhs", required=True, help="element or {set} literal")
    p.add_argument("--rhs", required=True, help="element or {set} literal")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cmp", help="compare subsets or expression values")
    add_common(p)
    p.add_argument(
        "--kind",
        choices=["le", "le1", "le2", "some", "eq", "approx1", "approx2"],
        required=True,
    )
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument(
        "--val",
        action="append",
        metavar="NAME=HISTORY",
        help="bind a history; makes lhs/rhs prefix expressions",
    )
    p.set_defaults(func=cmd_cmp)

    p = sub.add_parser("tense", help="apply one tense operator to a history")
    add_common(p)
    p.add_argument("--op", choices=list("PFHG"), required=True)
    p.add_argument("--val", required=True, help="history file or inline values")
    p.set_defaults(func=cmd_tense)

    p = sub.add_parser("star", help="apply a composite operator to a history")
    add_common(p)
    p.add_argument("--ops", required=True, metavar="OUTER,INNER")
    p.add_argument("--val", required=True)
    p.add_argument(
        "--cross-check",
        action="store_true",
        help="re-evaluate by expanding the family",
    )
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("check", help="run a law suite")
    p.add_argument(
        "what",
        choices=["dynamic-pair", "laws", "adjointness", "theorem14", "transfer"],
    )
    add_common(p, sweep_opts=True)
    p.add_argument("--pair", choices=["PG", "FH", "both"], default="both")
    p.add_argument("--triple", default="GGG", help="operators X,Y,Z for transfer")
    p.add_argument("--direction", choices=["i", "ii", "both"], default="both")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reconstruct", help="rebuild the time relation")
    add_common(p, sweep_opts=True)
    p.add_argument("--mode", choices=["star", "bar"], default="star")
    p.add_argument(
        "--verify",
        action="store_true",
        help="recompute and re-check every claim",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("demo", help="reproduce the worked example")
    p.add_argument("which", choices=["example1"])
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "what", None) == "transfer":
        args.what = "theorem14"
    try:
        return args.func(args, parser)
    except OmqlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
