"""Command-line interface.

Exit status: 0 on success, 2 when an input fails validation (or an
operation's precondition on valid data fails), 1 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from . import document as doc
from .covering import compose, homogenize, validate_covering
from .cycle import anchor_choices, external_arguments, homogenize_cycle, return_forest
from .forest import classify_vertices, forest_isomorphic, hull, validate_forest
from .layout import planar_layout
from .report import sorted_report
from .schema import reduce, validate_schema
from .tree import validate_tree

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class Invalid(Exception):
    def __init__(self, violations=(), message=""):
        super().__init__(message)
        self.violations = list(violations)
        self.message = message


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _report(violations) -> dict:
    vs = sorted_report(violations)
    return {"valid": not vs, "violations": [v.to_json() for v in vs]}


def _load_forest(path: str, strict: bool = False, check: bool = True):
    h, marked = doc.parse(_read(path))
    if check:
        problems = validate_forest(h, strict_components=strict)
        if problems:
            raise Invalid(problems)
    return h, marked


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ids(text: str) -> list:
    return [s for s in (part.strip() for part in text.split(",")) if s]


def _tree_arg(h, name):
    if name is None:
        return h.schema.vertices[0]
    if name not in h.trees:
        raise UsageError(f"unknown tree {name!r}")
    return name


def _precondition(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except ValueError as exc:
        raise Invalid(message=str(exc)) from None


# commands -----------------------------------------------------------------


def cmd_validate(args):
    h, _ = _load_forest(args.file, check=False)
    problems = validate_forest(h, strict_components=args.strict_components)
    _emit(args, doc.dumps(_report(problems)))
    return EXIT_INVALID if problems else EXIT_OK


def _load_covering(path):
    text = _read(path)
    if doc.kind_of(text) != "covering":
        raise UsageError(f"{path} is not a covering document")
    c = doc.parse_covering(text)
    problems = validate_tree(c.domain) + validate_tree(c.codomain)
    problems = problems or validate_covering(c)
    if problems:
        raise Invalid(problems)
    return c


def cmd_homogenize(args):
    text = _read(args.file)
    if doc.kind_of(text) == "covering":
        c = _load_covering(args.file)
    else:
        h, _ = _load_forest(args.file)
        c = h.coverings[_tree_arg(h, args.tree)]
        reserved = h.vertices()
        res = _precondition(homogenize, c, reserved)
        _emit(args, doc.dumps(doc.covering_document(res.extended)))
        return EXIT_OK
    res = _precondition(homogenize, c, set(c.domain.vertices) | set(c.codomain.vertices))
    _emit(args, doc.dumps(doc.covering_document(res.extended)))
    return EXIT_OK


def cmd_compose(args):
    if args.second is not None:
        c1, c2 = _load_covering(args.file), _load_covering(args.second)
    else:
        h, _ = _load_forest(args.file)
        u = _tree_arg(h, args.tree)
        c1 = _precondition(homogenize, h.coverings[u], h.vertices()).extended
        c2 = h.coverings[h.schema.F[u]]
    out = _precondition(compose, c2, c1)
    _emit(args, doc.dumps(doc.covering_document(out)))
    return EXIT_OK


def cmd_reduce_schema(args):
    text = _read(args.file)
    if doc.kind_of(text) == "forest":
        s = doc.parse(text)[0].schema
    else:
        s = doc.parse_schema(text)
    problems = validate_schema(s)
    if problems:
        raise Invalid(problems)
    _emit(args, doc.dumps(doc.schema_document(reduce(s))))
    return EXIT_OK


def cmd_iso(args):
    h1, _ = _load_forest(args.file)
    h2, _ = _load_forest(args.second)
    ok, witness = forest_isomorphic(h1, h2)
    _emit(args, doc.dumps({"isomorphic": ok, "witness": witness}))
    return EXIT_OK


def cmd_hull(args):
    h, marked = _load_forest(args.file)
    if args.marked is not None:
        marked = _ids(args.marked)
    if marked is None:
        raise UsageError("no marked set: pass --marked or add a 'marked' section")
    out = _precondition(hull, h, marked)
    problems = validate_forest(out)
    if problems:
        raise Invalid(problems)
    _emit(args, doc.serialize(out))
    return EXIT_OK


def _context(args):
    h, _ = _load_forest(args.file)
    start = None if args.tree is None else _tree_arg(h, args.tree)
    ctx = _precondition(homogenize_cycle, h, start)
    base = args.base
    if base is not None and not 0 <= base < ctx.r:
        raise UsageError(f"--base must lie in 0..{ctx.r - 1}")
    if base:
        ctx = homogenize_cycle(h, ctx.cycle[base], check=False)
    return ctx


def cmd_return_tree(args):
    ctx = _context(args)
    _emit(args, doc.serialize(return_forest(ctx)))
    return EXIT_OK


def cmd_anchors(args):
    ctx = _context(args)
    anchors = anchor_choices(ctx)
    _emit(args, doc.dumps({
        "degree": ctx.m,
        "cycle": list(ctx.cycle),
        "count": len(anchors),
        "anchors": [a.to_json() for a in anchors],
    }))
    return EXIT_OK


def cmd_external_args(args):
    ctx = _context(args)
    n = len(anchor_choices(ctx))
    if not 0 <= args.anchor < n:
        raise UsageError(f"--anchor must lie in 0..{n - 1}")
    table = external_arguments(ctx, args.anchor)
    _emit(args, doc.dumps(table.to_json()))
    return EXIT_OK


def cmd_layout(args):
    h, marked = _load_forest(args.file, check=False)
    bad = [v for u in h.trees for v in validate_tree(h.trees[u])]
    if bad:
        raise Invalid(bad)
    layouts = {u: planar_layout(h.trees[u]) for u in h.schema.vertices}
    out = {
        "version": doc.VERSION,
        "layout": {u: {v: [round(x, 6), round(y, 6)] for v, (x, y) in sorted(pos.items())}
                   for u, pos in layouts.items()},
    }
    if args.figure:
        from .plotting import draw_forest

        crit = [v for v, c in classify_vertices(h).items() if c.critical]
        draw_forest(layouts, h.trees, args.figure, critical=crit, marked=marked or ())
        out["figure"] = args.figure
    _emit(args, doc.dumps(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hubbard-forest", description="Combinatorial Hubbard forests.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, second=None):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("file")
        if second == "required":
            q.add_argument("second")
        elif second == "optional":
            q.add_argument("second", nargs="?")
        q.add_argument("--out", help="write the result here instead of stdout")
        q.set_defaults(func=fn)
        return q

    q = add("validate", cmd_validate, "check every forest condition")
    q.add_argument("--strict-components", action="store_true",
                   help="require a critical vertex in every periodic tree")
    q = add("homogenize", cmd_homogenize, "canonical homogeneous extension of one covering")
    q.add_argument("--tree", help="schema vertex whose covering is extended")
    q = add("compose", cmd_compose, "compose two coverings (first file applied first)", "optional")
    q.add_argument("--tree", help="with a forest: compose this tree's map with the next one")
    add("reduce-schema", cmd_reduce_schema, "remove weight-zero schema vertices")
    add("iso", cmd_iso, "decide whether two forests are isomorphic", "required")
    q = add("hull", cmd_hull, "forest spanned by a marked set")
    q.add_argument("--marked", help="comma-separated vertex ids")
    for name, fn, text in [
        ("return-tree", cmd_return_tree, "first-return tree of a cycle"),
        ("anchors", cmd_anchors, "list the possible zero markings"),
        ("external-args", cmd_external_args, "external arguments of Julia accesses"),
    ]:
        q = add(name, fn, text)
        q.add_argument("--base", type=int, help="cycle position used as base tree")
        q.add_argument("--tree", help="schema vertex selecting the cycle")
        if name == "external-args":
            q.add_argument("--anchor", type=int, default=0, help="index from `anchors`")
    q = add("layout", cmd_layout, "planar coordinates for every tree")
    q.add_argument("--figure", help="also render a PNG (or other matplotlib format)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, doc.DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Invalid as exc:
        if exc.violations:
            sys.stdout.write(doc.dumps(_report(exc.violations)))
        if exc.message:
            print(f"invalid: {exc.message}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
