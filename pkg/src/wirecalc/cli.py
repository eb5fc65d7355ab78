"""Command-line front door: check scripts, compare and normalize named
diagrams, render figures, and run the oracle suites."""

from __future__ import annotations

import argparse
import sys

from .diagram import equivalent, normalize
from .errors import ParseError, WirecalcError
from .parser import parse_script
from .script import check_proof, render_report, resolve


def _load(path):
    with open(path, "r", encoding="utf8") as fh:
        text = fh.read()
    try:
        return resolve(parse_script(text))
    except ParseError as e:
        print("%s:%s" % (path, e), file=sys.stderr)
        raise SystemExit(2)
    except WirecalcError as e:
        print("%s: %s" % (path, e), file=sys.stderr)
        raise SystemExit(2)


def _named_diagram(rs, name, path):
    if name in rs.lets:
        return rs.lets[name]
    if rs.sig.has_family(name):
        from .diagram import from_cell

        return from_cell(rs.sig, name)
    print("%s: no diagram named %r" % (path, name), file=sys.stderr)
    raise SystemExit(2)


def cmd_check(args):
    status = 0
    for path in args.files:
        rs = _load(path)
        reports = [check_proof(rs.sig, p) for p in rs.proofs]
        if args.json:
            for r in reports:
                print(r.summary_line())
        else:
            print(render_report(path, reports, verbose=True))
        if any(not r.ok for r in reports):
            status = 1
    return status


def cmd_eq(args):
    rs = _load(args.file)
    d1 = _named_diagram(rs, args.name1, args.file)
    d2 = _named_diagram(rs, args.name2, args.file)
    if equivalent(d1, d2):
        print("equal")
        return 0
    print("not equal")
    return 1


def cmd_normalize(args):
    rs = _load(args.file)
    d = _named_diagram(rs, args.name, args.file)
    print(normalize(d).to_text())
    return 0


def cmd_render(args):
    from .render import emit_svg, emit_tikz, layout

    rs = _load(args.file)
    d = _named_diagram(rs, args.name, args.file)
    lay = layout(d)
    if args.format == "svg":
        data = emit_svg(lay)
    else:
        data = emit_tikz(lay).encode("utf8")
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        print("wrote %s" % args.out)
    else:
        sys.stdout.write(data.decode("utf8"))
    return 0


def cmd_oracle(args):
    from .oracle import agreement, fixed_signature, interchange_trials

    sig = fixed_signature()
    n, comps, mismatches = agreement(sig, args.max_levels,
                                     word_len=args.word_len)
    print("agreement: %d diagrams, %d components, %d mismatches"
          % (n, comps, len(mismatches)))
    failures = interchange_trials(args.seed, args.trials)
    print("interchange: %d trials, %d failures" % (args.trials, len(failures)))
    return 0 if not mismatches and not failures else 1


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="wirecalc",
        description="String-diagram proof engine for category theory",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check all proofs in script files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true",
                   help="machine-readable summary lines only")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eq", help="compare two named diagrams modulo interchange")
    p.add_argument("file")
    p.add_argument("name1")
    p.add_argument("name2")
    p.set_defaults(fn=cmd_eq)

    p = sub.add_parser("normalize", help="print a named diagram's normal form")
    p.add_argument("file")
    p.add_argument("name")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("render", help="render a named diagram")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--format", choices=("svg", "tikz"), default="svg")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("oracle", help="run the interchange oracle suites")
    p.add_argument("--max-levels", type=int, default=4)
    p.add_argument("--word-len", type=int, default=2)
    p.add_argument("--seed", type=int, default=20240817)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_oracle)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
