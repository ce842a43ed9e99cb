"""Command-line front end: ``odp-forge compile|lint|diagram|materialize|query|catalog``.

Exit codes: 0 success, 1 errors in the input (or warnings under ``--strict``),
2 usage problems such as a missing file.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
from pathlib import Path
from typing import TextIO

from . import catalog
from .axioms import DisjointClasses, EquivalentClasses, Ontology, SubClassOf, compile_project
from .dsl import Project, parse_project, print_project, resolve
from .emit import emit_dot, emit_manchester, emit_turtle, read_instance_store
from .errors import ERROR, INFO, WARNING, Diagnostic, OdpError, OdpSyntaxError, ResolutionError
from .model import union
from .reasoner import DEFAULT_DEPTH, Literal, materialize, parse_query, query

EXTENSIONS = {"manchester": "omn", "turtle": "ttl"}
BUILTIN = "builtin:"
_BUILTIN_FILES = {
    "project": {"recipe": "recipe.odp", "movie": "movie.odp"},
    "data": {"recipe": "recipe_data.ttl", "movie": "movie_data.ttl"},
    "query": {"cq7": "cq7.query"},
}
_COLORS = {ERROR: "\033[31m", WARNING: "\033[33m", INFO: "\033[36m"}


class UsageError(Exception):
    pass


class _Failed(Exception):
    """Input was read but is in error; diagnostics were already printed."""


def _use_color(stream: TextIO) -> bool:
    flag = os.environ.get("ODP_FORGE_COLOR")
    if flag is not None:
        return flag == "1"
    return False


def _say(diag: Diagnostic, path: str, stream: TextIO) -> None:
    text = diag.format(path)
    if _use_color(stream):
        text = f"{_COLORS.get(diag.severity, '')}{text}\033[0m"
    print(text, file=stream)


def _read(path: str, kind: str) -> str:
    if path.startswith(BUILTIN):
        name = path[len(BUILTIN):]
        files = _BUILTIN_FILES[kind]
        if name not in files:
            raise UsageError(f"{path}: no such built-in {kind} (choose from {', '.join(sorted(files))})")
        return catalog.resource_text(files[name])
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: file not found")
    return p.read_text(encoding="utf-8")


def _load(path: str, strict: bool, err: TextIO) -> tuple[Project, Ontology, list[Diagnostic]]:
    text = _read(path, "project")
    try:
        project = parse_project(text)
        resolved = resolve(project, catalog.builtin_patterns())
    except OdpSyntaxError as exc:
        print(f"{path}:{exc.line}:{exc.col}: error: {exc}", file=err)
        raise _Failed from exc
    except ResolutionError as exc:
        for d in exc.diagnostics:
            _say(d, path, err)
        raise _Failed from exc
    except OdpError as exc:
        print(f"{path}: error: {exc.code}: {exc}", file=err)
        raise _Failed from exc
    diags = list(resolved.diagnostics)
    if strict and any(d.severity == WARNING for d in diags):
        for d in diags:
            _say(d, path, err)
        raise _Failed
    return project, compile_project(resolved), diags


def _write_tree(files: dict[str, str], out_dir: Path) -> None:
    """Write every file into a temporary directory first, then move them in place."""
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".odp-forge-", dir=out_dir.parent))
    try:
        for name, text in files.items():
            (tmp / name).write_bytes(text.encode("utf-8"))
        if not out_dir.exists():
            os.replace(tmp, out_dir)
            return
        for name in files:
            os.replace(tmp / name, out_dir / name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def _formats(choice: str) -> list[str]:
    return ["manchester", "turtle"] if choice == "both" else [choice]


def cmd_compile(args, out: TextIO, err: TextIO) -> int:
    _, onto, diags = _load(args.project, args.strict, err)
    for d in diags:
        if d.severity != INFO:
            _say(d, args.project, err)
    files: dict[str, str] = {}
    for fmt in _formats(args.format):
        ext = EXTENSIONS[fmt]
        ser = emit_manchester(onto) if fmt == "manchester" else emit_turtle(onto)
        for name, text in ser.per_module.items():
            files[f"{name}.{ext}"] = text
        files[f"{onto.name}.merged.{ext}"] = ser.merged
        files[f"{onto.name}.bridges.{ext}"] = ser.bridges
    _write_tree(files, Path(args.output))

    print("module\tsubclass\tequivalent\tdisjoint", file=out)
    totals = [0, 0, 0]
    for m in onto.modules:
        row = [m.count(SubClassOf), m.count(EquivalentClasses), m.count(DisjointClasses)]
        totals = [a + b for a, b in zip(totals, row)]
        print(f"{m.name}\t" + "\t".join(map(str, row)), file=out)
    print("total\t" + "\t".join(map(str, totals)), file=out)
    print(f"{totals[0]} subclass-family axioms, {totals[2]} disjointness axioms, "
          f"{totals[1]} equivalence bridges", file=out)
    for name in sorted(files):
        print(f"wrote {Path(args.output) / name}", file=out)
    return 0


def cmd_lint(args, out: TextIO, err: TextIO) -> int:
    from .reasoner import lint

    _, onto, diags = _load(args.project, False, err)
    diags = diags + lint(onto)
    for d in diags:
        _say(d, args.project, out)
    warnings = sum(d.severity == WARNING for d in diags)
    print(f"{len(diags)} diagnostics: 0 errors, {warnings} warnings", file=out)
    return 1 if args.strict and warnings else 0


def cmd_diagram(args, out: TextIO, err: TextIO) -> int:
    _, onto, _ = _load(args.project, args.strict, err)
    graphs = {m.name: m.graph for m in onto.modules if m.graph is not None}
    files = {f"{name}.dot": emit_dot(g, name) for name, g in graphs.items()}
    files[f"{onto.name}.merged.dot"] = emit_dot(union(graphs.values()), onto.name)
    _write_tree(files, Path(args.output))
    for name in sorted(files):
        print(f"wrote {Path(args.output) / name}", file=out)
    return 0


def _fmt(node) -> str:
    return str(node) if isinstance(node, Literal) else node


def _saturate(args, err: TextIO):
    _, onto, _ = _load(args.project, False, err)
    text = _read(args.data, "data")
    try:
        store = read_instance_store(text)
    except OdpSyntaxError as exc:
        print(f"{args.data}:{exc.line}:{exc.col}: error: {exc}", file=err)
        raise _Failed from exc
    except OdpError as exc:
        print(f"{args.data}: error: {exc.code}: {exc}", file=err)
        raise _Failed from exc
    return store, materialize(onto, store, args.depth)


def cmd_materialize(args, out: TextIO, err: TextIO) -> int:
    store, sat = _saturate(args, err)
    fresh = sat.fresh_individuals

    def shown(*nodes) -> bool:
        return args.include_fresh or not any(isinstance(n, str) and n in fresh for n in nodes)

    for i, c in sorted(sat.store.class_assertions - store.class_assertions):
        if shown(i):
            print(f"{c}({i})", file=out)
    new_props = sat.store.property_assertions - store.property_assertions
    for s, p, o in sorted(new_props, key=lambda t: (t[0], t[1], str(t[2]))):
        if shown(s, o):
            print(f"{p}({s}, {_fmt(o)})", file=out)
    for clash in sat.clashes:
        print(f"clash: {clash.reason}", file=err)
    return 1 if sat.clashes else 0


def cmd_query(args, out: TextIO, err: TextIO) -> int:
    store, sat = _saturate(args, err)
    text = _read(args.query, "query")
    try:
        atoms = parse_query(text)
        rows = query(sat, atoms, include_fresh=args.include_fresh)
    except OdpSyntaxError as exc:
        print(f"{args.query}:{exc.line}:{exc.col}: error: {exc}", file=err)
        raise _Failed from exc
    except OdpError as exc:
        print(f"{args.query}: error: {exc.code}: {exc}", file=err)
        raise _Failed from exc
    names: list[str] = []
    for atom in atoms:
        for arg in atom.args:
            if isinstance(arg, str) and arg.startswith("?") and arg[1:] not in names:
                names.append(arg[1:])
    print("\t".join(names), file=out)
    for row in rows:
        print("\t".join(_fmt(row[n]) for n in names), file=out)
    return 0


def cmd_catalog(args, out: TextIO, err: TextIO) -> int:
    patterns = catalog.builtin_patterns()
    if args.action == "list":
        for p in patterns:
            print(p.name, file=out)
        return 0
    by_name = {p.name: p for p in patterns}
    if args.name in by_name:
        out.write(print_project(Project(patterns=(by_name[args.name],))))
    elif args.name in _BUILTIN_FILES["project"]:
        out.write(_read(BUILTIN + args.name, "project"))
    else:
        raise UsageError(f"no built-in pattern or project named {args.name!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odp-forge",
        description="Compile schema-diagram projects into modular OWL ontologies.",
        epilog=f"Project, data and query arguments also accept {BUILTIN}NAME for bundled examples.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def project_cmd(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("project", help=f"project file (.odp) or {BUILTIN}recipe|movie")
        return p

    p = project_cmd("compile", "write per-module, merged and bridge ontology files")
    p.add_argument("--format", choices=["manchester", "turtle", "both"], default="both")
    p.add_argument("-o", "--output", default="out", help="output directory (default: out)")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.set_defaults(func=cmd_compile)

    p = project_cmd("lint", "print resolution and axiomatization diagnostics")
    p.add_argument("--strict", action="store_true", help="exit 1 when there are warnings")
    p.set_defaults(func=cmd_lint)

    p = project_cmd("diagram", "write Graphviz DOT files per module and merged")
    p.add_argument("-o", "--output", default="out", help="output directory (default: out)")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.set_defaults(func=cmd_diagram)

    for name, help in (("materialize", "print facts derived from instance data, and clashes"),
                       ("query", "match a pattern against saturated instance data, print TSV")):
        p = project_cmd(name, help)
        p.add_argument("data", help=f"instance data in Turtle, or {BUILTIN}recipe|movie")
        if name == "query":
            p.add_argument("query", help=f"pattern file, one atom per line, or {BUILTIN}cq7")
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="existential depth bound (default: 3)")
        p.add_argument("--include-fresh", action="store_true", help="also show existential witnesses")
        p.set_defaults(func=cmd_materialize if name == "materialize" else cmd_query)

    p = sub.add_parser("catalog", help="list or show built-in patterns", description="list or show built-in patterns")
    actions = p.add_subparsers(dest="action", metavar="action", required=True)
    actions.add_parser("list", help="list pattern names")
    show = actions.add_parser("show", help="print a pattern or bundled project as source")
    show.add_argument("name")
    p.set_defaults(func=cmd_catalog)
    return parser


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if getattr(args, "depth", 0) < 0:
        print("odp-forge: error: --depth must be non-negative", file=err)
        return 2
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"odp-forge: error: {exc}", file=err)
        return 2
    except _Failed:
        return 1
    except OSError as exc:
        print(f"odp-forge: error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())
