"""Command line entry points.

Exit codes: 0 success, 1 domain error (parse failure, rejected move,
failed expectation), 2 usage error.  Canonical text output only; figures
are written as files next to the delimited output when requested.
"""

from __future__ import annotations

import argparse
import os
import sys

from .codes import DiagramError, validate
from .engine import (
    INVARIANT_KEYS,
    MoveScript,
    canonical_recognize,
    canonical_state,
    evaluate_invariant,
    load_diagram,
    run_script,
    simplify_search,
    state_text,
    watch_invariants,
)
from .heegaard import HeegaardDiagram


def _load(path: str):
    if not os.path.exists(path):
        raise DiagramError(f"unreadable file {path!r}")
    return load_diagram(path)


def _emit(pairs, fmt: str):
    if fmt == "machine":
        for k, v in pairs:
            print(f"{k}\t{v}")
    else:
        for k, v in pairs:
            print(f"{k} = {v}")


def _figures(state, outdir: str, stem: str):
    from .render import draw_figure

    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{stem}.png")
    draw_figure(state, path, title=stem)
    print(f"figure\t{path}")


def cmd_validate(args) -> int:
    try:
        d = _load(args.path)
    except (DiagramError, ValueError) as e:
        print(str(e), file=sys.stderr)
        return 1
    problems = validate(d.as_banded() if isinstance(d, HeegaardDiagram) else d)
    if isinstance(d, HeegaardDiagram):
        from .heegaard import validate_heegaard

        problems = validate_heegaard(d)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    print("ok")
    return 0


def _default_keys(state) -> list[str]:
    if isinstance(state, HeegaardDiagram):
        return ["h0", "h1", "h2", "h3", "h4", "h5", "pi1ab", "euler", "recognize"]
    return ["h0", "h1", "h2", "h3", "h4", "pi1ab", "chi", "recognize"]


def cmd_invariants(args) -> int:
    state = canonical_state(_load(args.path))
    keys = args.watch.split(",") if args.watch else _default_keys(state)
    pairs = []
    for key in keys:
        try:
            pairs.append((key, evaluate_invariant(state, key, args.kind)))
        except DiagramError as e:
            pairs.append((key, f"<{e}>"))
    _emit(pairs, args.format)
    if args.figures:
        stem = os.path.splitext(os.path.basename(args.path))[0]
        _figures(state, args.figures, stem)
    return 0


def cmd_run(args) -> int:
    script = MoveScript.parse(open(args.path, encoding="utf-8").read())
    base = os.path.dirname(os.path.abspath(args.path))
    trace = run_script(script, base_dir=base)
    if args.trace:
        print(trace.text())
    for entry in trace.entries:
        if entry.note:
            print(entry.note)
    if args.watch:
        for line in watch_invariants(
            script, watch=tuple(args.watch.split(",")), base_dir=base
        ):
            print(line)
    if trace.final_state is not None:
        print(f"final recognize={canonical_recognize(trace.final_state)}")
        if args.figures:
            stem = os.path.splitext(os.path.basename(args.path))[0]
            _figures(trace.final_state, args.figures, f"{stem}_final")
    if not trace.ok:
        for f in trace.failures:
            print(f"FAIL {f}", file=sys.stderr)
        return 1
    print("PASS")
    return 0


def cmd_simplify(args) -> int:
    state = canonical_state(_load(args.path))
    res = simplify_search(state, budget=args.budget)
    print(f"# expanded {res.expanded} nodes")
    for line in res.script:
        print(line)
    print(f"recognize={canonical_recognize(res.best)}")
    sys.stdout.write(state_text(res.best))
    if args.figures:
        stem = os.path.splitext(os.path.basename(args.path))[0]
        _figures(res.best, args.figures, f"{stem}_simplified")
    return 0


def cmd_compile(args) -> int:
    from .engine import _compile

    state = canonical_state(_load(args.path))
    extra = []
    if args.side:
        extra.append(f"side={args.side}")
    if args.circle:
        extra.append(f"circle={args.circle}")
    if args.framing is not None:
        extra.append(f"framing={args.framing}")
    out = canonical_state(_compile(state, tuple([args.what] + extra)))
    text = state_text(out)
    if args.output:
        open(args.output, "w", encoding="utf-8").write(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    if args.figures:
        stem = os.path.splitext(os.path.basename(args.path))[0]
        _figures(out, args.figures, f"{stem}_{args.what}")
    return 0


def cmd_report(args) -> int:
    state = canonical_state(_load(args.path))
    stem = os.path.splitext(os.path.basename(args.path))[0]
    os.makedirs(args.out, exist_ok=True)
    tsv = os.path.join(args.out, f"{stem}.tsv")
    with open(tsv, "w", encoding="utf-8") as fh:
        for key in _default_keys(state):
            try:
                fh.write(f"{key}\t{evaluate_invariant(state, key, args.kind)}\n")
            except DiagramError as e:
                fh.write(f"{key}\t<{e}>\n")
    print(f"report\t{tsv}")
    _figures(state, args.out, stem)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    app = build_app(ui_dir=args.ui_dir if args.ui else None)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="handlecalc",
        description="diagram calculus for Kirby diagrams, banded unlinks and "
        "5-dimensional Heegaard diagrams",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check a diagram file's invariants hold")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("invariants", help="print homology / pi1 / recognition data")
    p.add_argument("path")
    p.add_argument("--watch", help="comma separated invariant keys")
    p.add_argument("--kind", default="threehandlebody", help="5-manifold kind for .hgd")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--figures", metavar="DIR", help="also render a schematic figure")
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("run", help="run a .kms move script")
    p.add_argument("path")
    p.add_argument("--watch", help="invariants to watch after every step")
    p.add_argument("--trace", action="store_true", help="print every canonical state")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("simplify", help="bounded best-first simplification")
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(fn=cmd_simplify)

    p = sub.add_parser("compile", help="surgery / double / heegaard / gluck compilers")
    p.add_argument(
        "what",
        choices=(
            "surgery",
            "double",
            "heegaard",
            "gluck",
            "one-surgery",
            "s2double",
            "boundary",
        ),
    )
    p.add_argument("path")
    p.add_argument("--side", choices=("alpha", "beta"))
    p.add_argument("--circle")
    p.add_argument("--framing", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("report", help="delimited invariant report plus figure")
    p.add_argument("path")
    p.add_argument("--out", default="report")
    p.add_argument("--kind", default="threehandlebody")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="local HTTP session service")
    p.add_argument("--port", type=int, default=7450)
    p.add_argument("--ui", action="store_true", help="also serve the browser UI")
    p.add_argument(
        "--ui-dir",
        default=os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist"),
    )
    p.set_defaults(fn=cmd_serve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DiagramError, ValueError, OSError) as e:
        print(str(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
