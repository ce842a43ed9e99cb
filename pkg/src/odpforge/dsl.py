"""The ``.odp`` project language: parser, pretty-printer and resolver.

Grammar (EBNF, ``#`` comments, statements end with ``.``)::

    project     = { header | pattern | module } ;
    header      = "project" [ NAME ] [ "base" IRI ] "." ;
    pattern     = "pattern" NAME "{" { doc | element } "}" ;
    module      = "module" NAME [ "instantiates" NAME { "," NAME } ]
                  [ "joins" NAME { "," NAME } ] "{" { module_stmt } "}" ;
    doc         = "doc" STRING "." ;
    element     = "class" NAME { "," NAME } "."
                | "object" NAME "-" NAME "->" NAME [ kinds ] "."
                | "data" NAME "-" NAME "->" DATATYPE [ kinds ] "."
                | "individual" NAME ":" NAME "." ;
    kinds       = "[" [ KIND { "," KIND } ] "]" ;
    module_stmt = element
                | "rename" NAME "->" NAME "."
                | "delete" NAME "."
                | "identify" NAME "=" NAME "."
                | "extra" "{" { axiom "." } "}" [ "." ]
                | "disjoint" "{" ( NAME | "*" ) { "," ( NAME | "*" ) } "}" [ "." ]
                | "bridge" NAME "=" MODULE ":" NAME "." ;
    axiom       = expr ( "SubClassOf" | "EquivalentTo" | "DisjointWith" ) expr ;

``KIND`` is one of the fourteen per-edge keywords (``domain``,
``scoped-range``, ``inv-qual-scoped-functional`` ...).  Arrows need
surrounding whitespace because names may contain inner hyphens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .axioms import Axiom, axiom_expressions, parse_axiom, render_axiom
from .errors import (
    ERROR,
    INFO,
    WARNING,
    Diagnostic,
    DuplicateName,
    OdpError,
    OdpSyntaxError,
    ResolutionError,
)
from .expressions import DATATYPE_PREFIXES, THING_NAME, named_classes, properties
from .kinds import KINDS_BY_KEYWORD, AxiomKind
from .lexer import TokenStream, describe, quote, tokenize, unquote
from .model import (
    CLASS,
    DATA,
    INDIVIDUAL,
    OBJECT,
    PROPERTY,
    Edge,
    Identification,
    Instantiation,
    PatternTemplate,
    SchemaGraph,
    instantiate,
    join,
    union,
    validate_graph,
)

DEFAULT_BASE = "http://example.org/ontology/"
RESERVED_MODULE_NAMES = frozenset(DATATYPE_PREFIXES + ("owl",))


@dataclass(frozen=True)
class ModuleDef:
    name: str
    instantiates: tuple[str, ...] = ()
    joins: tuple[str, ...] = ()
    renames: tuple[tuple[str, str], ...] = ()
    deletions: tuple[str, ...] = ()
    identifications: tuple[tuple[str, str], ...] = ()
    local_graph: SchemaGraph = SchemaGraph()
    extra_axioms: tuple[Axiom, ...] = ()
    disjoint_blocks: tuple[tuple[str, ...], ...] = ()
    bridges: tuple[tuple[str, str, str], ...] = ()  # (local class, module, external class)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Project:
    name: str | None = None
    base_iri: str = DEFAULT_BASE
    patterns: tuple[PatternTemplate, ...] = ()
    modules: tuple[ModuleDef, ...] = ()

    def module(self, name: str) -> ModuleDef:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)


@dataclass(frozen=True)
class ResolvedModule:
    name: str
    graph: SchemaGraph
    disjoint_blocks: tuple[tuple[str, ...], ...]
    extra_axioms: tuple[Axiom, ...]
    bridges: tuple[tuple[str, str, str], ...]
    definition: ModuleDef = field(compare=False)


@dataclass(frozen=True)
class ResolvedProject:
    name: str
    base_iri: str
    modules: tuple[ResolvedModule, ...]
    diagnostics: tuple[Diagnostic, ...] = ()

    def module(self, name: str) -> ResolvedModule:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)


# --------------------------------------------------------------------- parsing


def parse_project(text: str) -> Project:
    """Parse ``.odp`` source into a Project (unresolved)."""
    return _Parser(TokenStream(tokenize(text))).project()


class _Parser:
    def __init__(self, stream: TokenStream):
        self.s = stream

    def name(self, what: str = "name") -> str:
        return self.s.expect_kind("name", what).value

    def project(self) -> Project:
        s = self.s
        name, base = None, DEFAULT_BASE
        patterns: list[PatternTemplate] = []
        modules: list[ModuleDef] = []
        while s.peek().kind != "eof":
            tok = s.peek()
            if s.accept("project"):
                if s.peek().kind == "name" and not s.at("base"):
                    name = self.name("project name")
                if s.accept("base"):
                    base = _normalize_base(s.expect_kind("iri", "IRI").value[1:-1])
                s.expect(".")
            elif s.accept("pattern"):
                pattern = self.pattern()
                if any(p.name == pattern.name for p in patterns):
                    raise DuplicateName(f"pattern {pattern.name!r} declared twice (line {tok.line})")
                patterns.append(pattern)
            elif s.accept("module"):
                module = self.module(tok)
                if any(m.name == module.name for m in modules):
                    raise DuplicateName(f"module {module.name!r} declared twice (line {tok.line})")
                modules.append(module)
            else:
                raise s.error(f"unexpected {describe(tok)}", "'project', 'pattern' or 'module'")
        return Project(name, base, tuple(patterns), tuple(modules))

    def pattern(self) -> PatternTemplate:
        s = self.s
        name = self.name("pattern name")
        s.expect("{")
        doc = ""
        parts = _GraphParts()
        while not s.accept("}"):
            if s.accept("doc"):
                doc = unquote(s.expect_kind("string", "documentation string").value)
                s.expect(".")
            elif not self.element(parts):
                raise s.error(f"unexpected {describe(s.peek())}", "pattern statement")
        return PatternTemplate(name, parts.graph(), doc)

    def module(self, start) -> ModuleDef:
        s = self.s
        name = self.name("module name")
        if name in RESERVED_MODULE_NAMES:
            raise OdpSyntaxError(f"module name {name!r} is reserved", start.line, start.col)
        instantiates: list[str] = []
        joins: list[str] = []
        if s.accept("instantiates"):
            instantiates = self.name_list()
        if s.accept("joins"):
            joins = self.name_list()
        s.expect("{")
        parts = _GraphParts()
        renames, deletions, idents = [], [], []
        extras: list[Axiom] = []
        blocks: list[tuple[str, ...]] = []
        bridges: list[tuple[str, str, str]] = []
        while not s.accept("}"):
            if self.element(parts):
                continue
            if s.accept("rename"):
                src = self.name()
                s.expect("->")
                renames.append((src, self.name()))
                s.expect(".")
            elif s.accept("delete"):
                deletions.append(self.name())
                s.expect(".")
            elif s.accept("identify"):
                a = self.name()
                s.expect("=")
                idents.append((a, self.name()))
                s.expect(".")
            elif s.accept("extra"):
                s.expect("{")
                while not s.accept("}"):
                    extras.append(parse_axiom(s))
                    s.expect(".")
                s.accept(".")
            elif s.accept("disjoint"):
                s.expect("{")
                members = [self.member()]
                while s.accept(","):
                    members.append(self.member())
                s.expect("}")
                s.accept(".")
                blocks.append(tuple(members))
            elif s.accept("bridge"):
                local = self.name("class name")
                s.expect("=")
                tok = s.expect_kind("name", "Module:Class")
                other, _, ext = tok.value.rpartition(":")
                if not other:
                    raise OdpSyntaxError("bridge target must be written Module:Class", tok.line, tok.col, "Module:Class")
                bridges.append((local, other, ext))
                s.expect(".")
            else:
                raise s.error(f"unexpected {describe(s.peek())}", "module statement")
        return ModuleDef(
            name, tuple(instantiates), tuple(joins), tuple(renames), tuple(deletions), tuple(idents),
            parts.graph(), tuple(extras), tuple(blocks), tuple(bridges), start.line, start.col,
        )

    def name_list(self) -> list[str]:
        names = [self.name()]
        while self.s.accept(","):
            names.append(self.name())
        return names

    def member(self) -> str:
        if self.s.accept("*"):
            return "*"
        return self.name("class name")

    def element(self, parts: "_GraphParts") -> bool:
        s = self.s
        if s.accept("class"):
            parts.classes += self.name_list()
        elif s.at("object") or s.at("data"):
            kind = s.next().value
            source = self.name("source class")
            s.expect("-")
            prop = self.name("property name")
            s.expect("->")
            tok = s.expect_kind("name", "target")
            target = tok.value
            if kind == DATA:
                if target.partition(":")[0] not in DATATYPE_PREFIXES:
                    raise OdpSyntaxError(f"data edge target {target!r} is not a datatype", tok.line, tok.col,
                                         "datatype such as xsd:string")
                parts.datatypes.append(target)
            parts.edges.append(Edge(prop, source, target, kind, self.kinds()))
        elif s.accept("individual"):
            ind = self.name("individual name")
            s.expect(":")
            parts.individuals.append((ind, self.name("class name")))
        else:
            return False
        s.expect(".")
        return True

    def kinds(self) -> frozenset[AxiomKind]:
        s = self.s
        if not s.accept("["):
            return frozenset()
        out = []
        if not s.at("]"):
            while True:
                tok = s.expect_kind("name", "axiom kind")
                if tok.value not in KINDS_BY_KEYWORD:
                    raise OdpSyntaxError(f"unknown axiom kind {tok.value!r}", tok.line, tok.col,
                                         ", ".join(KINDS_BY_KEYWORD))
                out.append(KINDS_BY_KEYWORD[tok.value])
                if not s.accept(","):
                    break
        s.expect("]")
        return frozenset(out)


@dataclass
class _GraphParts:
    classes: list[str] = field(default_factory=list)
    datatypes: list[str] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    individuals: list[tuple[str, str]] = field(default_factory=list)

    def graph(self) -> SchemaGraph:
        return SchemaGraph(frozenset(self.classes), frozenset(self.datatypes), tuple(self.edges),
                           frozenset(self.individuals))


def _normalize_base(iri: str) -> str:
    return iri if iri.endswith(("/", "#")) else iri + "/"


# -------------------------------------------------------------------- printing


def print_project(project: Project) -> str:
    """Canonical source text for a project; parsing it yields an equal Project."""
    out: list[str] = []
    if project.name is not None or project.base_iri != DEFAULT_BASE:
        head = "project"
        if project.name is not None:
            head += f" {project.name}"
        if project.base_iri != DEFAULT_BASE:
            head += f" base <{project.base_iri}>"
        out.append(head + ".")
        out.append("")
    for p in project.patterns:
        out.append(f"pattern {p.name} {{")
        if p.documentation:
            out.append(f"  doc {quote(p.documentation)}.")
        out += _graph_lines(p.graph)
        out.append("}")
        out.append("")
    for m in project.modules:
        head = f"module {m.name}"
        if m.instantiates:
            head += " instantiates " + ", ".join(m.instantiates)
        if m.joins:
            head += " joins " + ", ".join(m.joins)
        out.append(head + " {")
        out += [f"  rename {a} -> {b}." for a, b in m.renames]
        out += [f"  delete {n}." for n in m.deletions]
        out += [f"  identify {a} = {b}." for a, b in m.identifications]
        out += _graph_lines(m.local_graph)
        if m.extra_axioms:
            out.append("  extra {")
            out += [f"    {render_axiom(ax)}." for ax in m.extra_axioms]
            out.append("  }")
        out += ["  disjoint { " + ", ".join(b) + " }." for b in m.disjoint_blocks]
        out += [f"  bridge {a} = {mod}:{b}." for a, mod, b in m.bridges]
        out.append("}")
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n" if out else ""


def _graph_lines(graph: SchemaGraph) -> list[str]:
    lines = [f"  class {c}." for c in sorted(graph.classes)]
    for e in graph.edges:
        kinds = ""
        if e.selection:
            kinds = " [" + ", ".join(k.keyword for k in sorted(e.selection, key=lambda k: k.number)) + "]"
        lines.append(f"  {e.kind} {e.source} -{e.property}-> {e.target}{kinds}.")
    lines += [f"  individual {i} : {c}." for i, c in sorted(graph.individuals)]
    return lines


# ------------------------------------------------------------------- resolving


def resolve(project: Project, catalog: list[PatternTemplate] | tuple = ()) -> ResolvedProject:
    """Bind pattern references, apply instantiations and joins, check references.

    Errors are collected across all modules and raised together as a
    ``ResolutionError``; warnings and infos stay on the result.
    """
    patterns = {p.name: p for p in catalog}
    patterns.update({p.name: p for p in project.patterns})
    defs = {m.name: m for m in project.modules}
    diags: list[Diagnostic] = []
    resolved: dict[str, ResolvedModule | None] = {}

    def visit(name: str, stack: tuple[str, ...]) -> ResolvedModule | None:
        if name in resolved:
            return resolved[name]
        md = defs[name]
        if name in stack:
            diags.append(_diag(ERROR, "CyclicJoin", name, "module joins itself through " + " -> ".join(stack), md))
            return None
        joined = []
        for j in md.joins:
            if j not in defs:
                diags.append(_diag(ERROR, "UnknownElement", j, f"joined module {j!r} is not declared", md))
                joined.append(None)
            else:
                joined.append((j, visit(j, stack + (name,))))
        resolved[name] = _resolve_module(md, patterns, joined, diags)
        return resolved[name]

    for m in project.modules:
        visit(m.name, ())

    ok = {n: r for n, r in resolved.items() if r is not None}
    for m in project.modules:
        r = ok.get(m.name)
        if r is None:
            continue
        for local, other, ext in r.bridges:
            target = ok.get(other)
            if other not in defs:
                diags.append(_diag(ERROR, "UnknownElement", f"{other}:{ext}", f"bridge refers to unknown module {other!r}", m))
            elif target is not None and ext not in target.graph.classes:
                diags.append(_diag(ERROR, "UnknownElement", f"{other}:{ext}", f"module {other} has no class {ext!r}", m))
        for ax in r.extra_axioms:
            for expr in axiom_expressions(ax):
                for c in named_classes(expr):
                    if c.module and (c.module not in ok or c.name not in ok[c.module].graph.classes):
                        diags.append(_diag(ERROR, "UnknownElement", f"{c.module}:{c.name}",
                                           "extra axiom refers to an unknown external class", m))
    diags += _bridge_suggestions(project, ok)

    modules = tuple(ok[m.name] for m in project.modules if m.name in ok)
    result = ResolvedProject(project.name or "project", project.base_iri, modules, tuple(_order(diags)))
    if any(d.severity == ERROR for d in diags):
        raise ResolutionError(list(result.diagnostics))
    return result


def _order(diags: list[Diagnostic]) -> list[Diagnostic]:
    rank = {ERROR: 0, WARNING: 1, INFO: 2}
    return sorted(set(diags), key=lambda d: (rank[d.severity], d.line or 0, d.code, d.element, d.message))


def _diag(severity: str, code: str, element: str, message: str, md: ModuleDef) -> Diagnostic:
    return Diagnostic(severity, code, element, f"module {md.name}: {message}", md.line, md.col)


def _resolve_module(md: ModuleDef, patterns, joined, diags: list[Diagnostic]) -> ResolvedModule | None:
    failed = False
    templates = []
    for pname in md.instantiates:
        if pname not in patterns:
            diags.append(_diag(ERROR, "UnknownPattern", pname, f"no pattern named {pname!r}", md))
            failed = True
        else:
            templates.append(patterns[pname])
    if failed or any(j is None or j[1] is None for j in joined):
        return None

    local = md.local_graph
    idents = [Identification.of(*md.identifications)] if md.identifications else []
    infos: list[Diagnostic] = []
    try:
        if templates:
            graphs = [t.graph for t in templates]
            if idents:
                graphs.append(SchemaGraph(classes=local.classes))
            combined = join(graphs, idents) if (len(graphs) > 1 or idents) else graphs[0]
            template = PatternTemplate("+".join(t.name for t in templates), combined)
            cats = combined.categories()
            inst = _instantiation(md, template, cats)
            graph = instantiate(template, inst, infos)
        else:
            if md.renames or md.deletions:
                diags.append(_diag(ERROR, "UnknownElement", md.name,
                                   "rename/delete without an instantiated pattern", md))
                return None
            graph = join([local], idents) if idents else local
        bridges = list(md.bridges)
        for jname, jmod in joined:
            structure = SchemaGraph(jmod.graph.classes, jmod.graph.datatypes, jmod.graph.without_selections().edges)
            graph = join([graph, structure])
            bridges += [(c, jname, c) for c in sorted(jmod.graph.classes) if c != THING_NAME]
    except OdpError as exc:
        diags.append(_diag(ERROR, exc.code, md.name, str(exc), md))
        return None
    diags += [_diag(d.severity, d.code, d.element, d.message, md) for d in infos]

    before = len(diags)
    diags += [_diag(d.severity, d.code, d.element, d.message, md) for d in validate_graph(graph)
              if d.severity == ERROR]

    blocks = []
    for block in md.disjoint_blocks:
        members: list[str] = []
        for name in block:
            if name == "*":
                members += sorted(graph.classes)
            elif name not in graph.classes:
                diags.append(_diag(ERROR, "UnknownElement", name, "disjoint block names an unknown class", md))
            else:
                members.append(name)
        members = list(dict.fromkeys(members))
        if len(members) < 2:
            diags.append(_diag(ERROR, "TooFewClasses", ",".join(block), "disjoint block needs two classes", md))
        blocks.append(tuple(members))

    props = graph.properties
    for ax in md.extra_axioms:
        for expr in axiom_expressions(ax):
            for c in named_classes(expr):
                if c.module is None and c.name not in graph.classes:
                    diags.append(_diag(ERROR, "UnknownElement", c.name, "extra axiom uses an unknown class", md))
            for p in properties(expr):
                if p.module is None and p.name not in props:
                    diags.append(_diag(ERROR, "UnknownElement", p.name, "extra axiom uses an unknown property", md))
    for local_name, _, _ in md.bridges:
        if local_name not in graph.classes:
            diags.append(_diag(ERROR, "UnknownElement", local_name, "bridge names an unknown local class", md))
    if len(diags) > before and any(d.severity == ERROR for d in diags[before:]):
        return None
    return ResolvedModule(md.name, graph, tuple(blocks), md.extra_axioms,
                          tuple(dict.fromkeys(bridges)), md)


def _instantiation(md: ModuleDef, template: PatternTemplate, cats) -> Instantiation:
    rc, rp, ri = {}, {}, {}
    for src, dst in md.renames:
        kinds = cats.get(src, set())
        if PROPERTY in kinds:
            rp[src] = dst
        elif INDIVIDUAL in kinds:
            ri[src] = dst
        else:
            rc[src] = dst  # unknown sources are reported by instantiate
    return Instantiation(
        template.name, rc, rp, frozenset(md.deletions), md.local_graph, ri,
    )


def _bridge_suggestions(project: Project, ok: dict[str, ResolvedModule]) -> list[Diagnostic]:
    """Warn when a class name occurs in two modules that no bridge connects."""
    parent: dict[tuple[str, str], tuple[str, str]] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for r in ok.values():
        for local, other, ext in r.bridges:
            a, b = find((r.name, local)), find((other, ext))
            if a != b:
                parent[max(a, b)] = min(a, b)
    owners: dict[str, list[str]] = {}
    for m in project.modules:
        if m.name in ok:
            for c in sorted(ok[m.name].graph.classes):
                owners.setdefault(c, []).append(m.name)
    out = []
    for cls, mods in sorted(owners.items()):
        first = mods[0]
        for other in mods[1:]:
            if find((first, cls)) != find((other, cls)):
                out.append(_diag(WARNING, "SuggestBridge", cls,
                                 f"class {cls} is also declared in module {first}; "
                                 f"consider 'bridge {cls} = {first}:{cls}.'", project.module(other)))
    return out
