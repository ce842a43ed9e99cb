"""Schema diagrams, pattern templates and the instantiate/join algebra.

All values are immutable; operations return new graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    ERROR,
    INFO,
    CategoryMismatch,
    DanglingIdentification,
    Diagnostic,
    InvalidKindForDatatypeEdge,
    NameCollision,
    OdpError,
    UnknownElement,
)
from .expressions import THING_NAME
from .kinds import AxiomKind

OBJECT = "object"
DATA = "data"

CLASS = "class"
PROPERTY = "property"
INDIVIDUAL = "individual"


@dataclass(frozen=True)
class Edge:
    property: str
    source: str
    target: str
    kind: str = OBJECT
    selection: frozenset[AxiomKind] = frozenset()

    def __post_init__(self):
        if self.kind not in (OBJECT, DATA):
            raise ValueError(f"edge kind must be 'object' or 'data', not {self.kind!r}")
        object.__setattr__(self, "selection", frozenset(self.selection))

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.property, self.source, self.target)

    def sort_key(self) -> tuple:
        return (self.property, self.source, self.target, self.kind)

    def with_selection(self, selection: Iterable[AxiomKind]) -> "Edge":
        return Edge(self.property, self.source, self.target, self.kind, frozenset(selection))

    def renamed(self, mapping: Mapping[str, str]) -> "Edge":
        target = self.target if self.kind == DATA else mapping.get(self.target, self.target)
        return Edge(
            mapping.get(self.property, self.property),
            mapping.get(self.source, self.source),
            target,
            self.kind,
            self.selection,
        )


def _merge_edges(edges: Iterable[Edge]) -> tuple[Edge, ...]:
    merged: dict[tuple, Edge] = {}
    for e in edges:
        k = (e.property, e.source, e.target, e.kind)
        if k in merged:
            merged[k] = e.with_selection(merged[k].selection | e.selection)
        else:
            merged[k] = e
    return tuple(sorted(merged.values(), key=Edge.sort_key))


@dataclass(frozen=True)
class SchemaGraph:
    """A schema diagram: classes, datatype nodes, property edges, individuals.

    Duplicate edges (same property, source and target) are merged on
    construction by taking the union of their axiom selections.
    """

    classes: frozenset[str] = frozenset()
    datatypes: frozenset[str] = frozenset()
    edges: tuple[Edge, ...] = ()
    individuals: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(self.classes))
        object.__setattr__(self, "datatypes", frozenset(self.datatypes))
        object.__setattr__(self, "edges", _merge_edges(self.edges))
        object.__setattr__(self, "individuals", frozenset(self.individuals))

    @property
    def object_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind == OBJECT)

    @property
    def data_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind == DATA)

    @property
    def properties(self) -> dict[str, str]:
        """Property name -> kind (``object`` or ``data``)."""
        return {e.property: e.kind for e in self.edges}

    @property
    def individual_names(self) -> frozenset[str]:
        return frozenset(i for i, _ in self.individuals)

    def uses_thing(self) -> bool:
        return any(THING_NAME in (e.source, e.target) for e in self.object_edges) or any(
            e.source == THING_NAME for e in self.data_edges
        )

    def categories(self) -> dict[str, set[str]]:
        cats: dict[str, set[str]] = {}
        for c in self.classes:
            cats.setdefault(c, set()).add(CLASS)
        for e in self.edges:
            cats.setdefault(e.property, set()).add(PROPERTY)
        for i, _ in self.individuals:
            cats.setdefault(i, set()).add(INDIVIDUAL)
        return cats

    def category(self, name: str) -> str | None:
        if name == THING_NAME:
            return CLASS
        cats = self.categories().get(name)
        if not cats:
            return None
        return sorted(cats)[0]

    def names(self) -> frozenset[str]:
        return frozenset(self.categories())

    def without_selections(self) -> "SchemaGraph":
        return SchemaGraph(
            self.classes, self.datatypes, tuple(e.with_selection(()) for e in self.edges), self.individuals
        )


@dataclass(frozen=True)
class PatternTemplate:
    name: str
    graph: SchemaGraph
    documentation: str = ""


@dataclass(frozen=True)
class Instantiation:
    template: str
    rename_classes: Mapping[str, str] = field(default_factory=dict)
    rename_properties: Mapping[str, str] = field(default_factory=dict)
    deletions: frozenset[str] = frozenset()
    additions: SchemaGraph = SchemaGraph()
    rename_individuals: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Identification:
    """Unordered pairs of element names to be unified by ``join``."""

    pairs: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(tuple(sorted(p)) for p in self.pairs))

    @classmethod
    def of(cls, *pairs: tuple[str, str]) -> "Identification":
        return cls(frozenset(pairs))


# ------------------------------------------------------------------ operations


def rename_graph(graph: SchemaGraph, mapping: Mapping[str, str]) -> SchemaGraph:
    """Apply a name substitution to classes, properties and individuals."""
    m = dict(mapping)
    return SchemaGraph(
        frozenset(m.get(c, c) for c in graph.classes if m.get(c, c) != THING_NAME),
        graph.datatypes,
        tuple(e.renamed(m) for e in graph.edges),
        frozenset((m.get(i, i), m.get(c, c)) for i, c in graph.individuals),
    )


def union(graphs: Iterable[SchemaGraph]) -> SchemaGraph:
    graphs = list(graphs)
    return SchemaGraph(
        frozenset().union(*(g.classes for g in graphs)),
        frozenset().union(*(g.datatypes for g in graphs)),
        tuple(e for g in graphs for e in g.edges),
        frozenset().union(*(g.individuals for g in graphs)),
    )


def delete_elements(
    graph: SchemaGraph, names: Iterable[str], diagnostics: list[Diagnostic] | None = None
) -> SchemaGraph:
    """Remove classes, properties or individuals; class deletion cascades to incident edges."""
    names = set(names)
    kept_edges = []
    for e in graph.edges:
        if e.property in names:
            continue
        if e.source in names or (e.kind == OBJECT and e.target in names):
            if diagnostics is not None:
                gone = e.source if e.source in names else e.target
                diagnostics.append(
                    Diagnostic(INFO, "CascadeDelete", e.property,
                               f"edge {e.source} -{e.property}-> {e.target} removed with {gone}")
                )
            continue
        kept_edges.append(e)
    kept_individuals = frozenset((i, c) for i, c in graph.individuals if i not in names and c not in names)
    if diagnostics is not None:
        for i, c in sorted(graph.individuals - kept_individuals):
            if i not in names:
                diagnostics.append(Diagnostic(INFO, "CascadeDelete", i, f"individual removed with {c}"))
    used_datatypes = {e.target for e in kept_edges if e.kind == DATA}
    return SchemaGraph(
        graph.classes - names,
        frozenset(d for d in graph.datatypes if d in used_datatypes or d not in {
            e.target for e in graph.data_edges}),
        tuple(kept_edges),
        kept_individuals,
    )


def instantiate(
    template: PatternTemplate, inst: Instantiation, diagnostics: list[Diagnostic] | None = None
) -> SchemaGraph:
    """Specialize a pattern: apply deletions, then renames, then union the additions."""
    graph = template.graph
    cats = graph.categories()

    def check_source(name: str, category: str) -> None:
        if name == THING_NAME:
            raise CategoryMismatch(f"{THING_NAME} is reserved and cannot be renamed")
        if name not in cats:
            raise UnknownElement(f"{name!r} is not an element of pattern {template.name}")
        if category not in cats[name]:
            raise CategoryMismatch(f"{name!r} is not a {category} of pattern {template.name}")

    for src in inst.rename_classes:
        check_source(src, CLASS)
    for src in inst.rename_properties:
        check_source(src, PROPERTY)
    for src in inst.rename_individuals:
        check_source(src, INDIVIDUAL)
    for name in inst.deletions:
        if name == THING_NAME:
            raise CategoryMismatch(f"{THING_NAME} is reserved and cannot be deleted")
        if name not in cats:
            raise UnknownElement(f"cannot delete {name!r}: not an element of pattern {template.name}")

    mapping = {**inst.rename_classes, **inst.rename_properties, **inst.rename_individuals}
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        dup = sorted({t for t in targets if targets.count(t) > 1})
        raise NameCollision(f"rename is not injective: {', '.join(dup)}")
    surviving = set(cats) - set(inst.deletions) - set(mapping)
    for src, dst in sorted(mapping.items()):
        if dst == THING_NAME or dst in surviving:
            raise NameCollision(f"renaming {src!r} to {dst!r} collides with an existing name")

    graph = delete_elements(graph, inst.deletions, diagnostics)
    graph = rename_graph(graph, mapping)

    base_cats = graph.categories()
    for name, kinds in inst.additions.categories().items():
        if name in base_cats and base_cats[name] != kinds:
            raise NameCollision(f"addition {name!r} collides with a {sorted(base_cats[name])[0]} of the same name")
    result = union([graph, inst.additions])
    _raise_first_error(validate_graph(result))
    return result


def join(graphs: list[SchemaGraph], idents: list[Identification] = ()) -> SchemaGraph:
    """Union graphs, unifying identified elements.

    Elements with equal names are shared.  Each identification group is
    merged onto its lexicographically smallest non-``Thing`` member, so the
    result does not depend on the order of ``graphs`` or ``idents``.
    """
    graphs = list(graphs)
    cats: dict[str, set[str]] = {}
    for g in graphs:
        for name, kinds in g.categories().items():
            cats.setdefault(name, set()).update(kinds)
        if g.uses_thing():
            cats.setdefault(THING_NAME, set()).add(CLASS)
    for name, kinds in sorted(cats.items()):
        if len(kinds) > 1:
            raise CategoryMismatch(f"{name!r} is used as {' and '.join(sorted(kinds))}")
    kinds_by_prop: dict[str, set[str]] = {}
    for g in graphs:
        for e in g.edges:
            kinds_by_prop.setdefault(e.property, set()).add(e.kind)
    for prop, ks in sorted(kinds_by_prop.items()):
        if len(ks) > 1:
            raise CategoryMismatch(f"property {prop!r} is both an object and a data property")

    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for ident in idents:
        for a, b in sorted(ident.pairs):
            for n in (a, b):
                if n not in cats:
                    raise DanglingIdentification(f"identified element {n!r} occurs in no graph")
            if cats[a] != cats[b]:
                raise CategoryMismatch(f"cannot identify {a!r} ({next(iter(cats[a]))}) "
                                       f"with {b!r} ({next(iter(cats[b]))})")
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: dict[str, list[str]] = {}
    for name in cats:
        groups.setdefault(find(name), []).append(name)
    mapping: dict[str, str] = {}
    for members in groups.values():
        if len(members) < 2:
            continue
        named = sorted(m for m in members if m != THING_NAME)
        rep = named[0] if named else THING_NAME
        for m in members:
            if m != rep:
                mapping[m] = rep
    merged = union(rename_graph(g, mapping) for g in graphs)
    merged_cats = merged.categories()
    for name, kinds in sorted(merged_cats.items()):
        if len(kinds) > 1:
            raise CategoryMismatch(f"{name!r} is used as {' and '.join(sorted(kinds))}")
    return merged


def _raise_first_error(diags: list[Diagnostic]) -> None:
    errors = {
        "UnknownElement": UnknownElement,
        "NameCollision": NameCollision,
        "CategoryMismatch": CategoryMismatch,
        "InvalidKindForDatatypeEdge": InvalidKindForDatatypeEdge,
    }
    for d in diags:
        if d.severity == ERROR:
            raise errors.get(d.code, OdpError)(f"{d.element}: {d.message}")


# ------------------------------------------------------------------ validation


def validate_graph(graph: SchemaGraph) -> list[Diagnostic]:
    """Check the SchemaGraph invariants.

    Returns error diagnostics for violated invariants plus ``cycle`` infos
    when the undirected class graph is not a forest.  An empty list means the
    graph is a valid tree.
    """
    diags: list[Diagnostic] = []
    classes = graph.classes

    def err(code: str, element: str, message: str) -> None:
        diags.append(Diagnostic(ERROR, code, element, message))

    if THING_NAME in classes:
        err("CategoryMismatch", THING_NAME, "Thing is reserved and must not be declared")
    for name, kinds in sorted(graph.categories().items()):
        if len(kinds) > 1:
            err("NameCollision", name, f"name used as {' and '.join(sorted(kinds))}")
    kinds_by_prop: dict[str, set[str]] = {}
    for e in graph.edges:
        kinds_by_prop.setdefault(e.property, set()).add(e.kind)
    for prop, ks in sorted(kinds_by_prop.items()):
        if len(ks) > 1:
            err("CategoryMismatch", prop, "property is used both as object and data property")

    for e in graph.edges:
        label = f"{e.source} -{e.property}-> {e.target}"
        if e.source != THING_NAME and e.source not in classes:
            err("UnknownElement", e.source, f"edge {label}: source is not a declared class")
        if e.kind == OBJECT:
            if e.target in graph.datatypes:
                err("CategoryMismatch", e.target, f"object edge {label} points at a datatype")
            elif e.target != THING_NAME and e.target not in classes:
                err("UnknownElement", e.target, f"edge {label}: target is not a declared class")
        else:
            if e.target in classes:
                err("CategoryMismatch", e.target, f"data edge {label} points at a class")
            elif e.target not in graph.datatypes:
                err("UnknownElement", e.target, f"edge {label}: target is not a declared datatype")
            bad = sorted(k for k in e.selection if not k.allowed_on_data)
            if bad:
                err("InvalidKindForDatatypeEdge", e.property,
                    f"data edge {label} cannot carry {', '.join(k.keyword for k in bad)}")
    for ind, cls in sorted(graph.individuals):
        if cls != THING_NAME and cls not in classes:
            err("UnknownElement", cls, f"individual {ind} is typed by an undeclared class")

    diags.extend(find_cycles(graph))
    return sorted(diags, key=lambda d: (d.severity != ERROR, d.code, d.element, d.message))


def find_cycles(graph: SchemaGraph) -> list[Diagnostic]:
    """One ``cycle`` notice per independent cycle of the undirected class graph.

    Datatype nodes are leaves of their own and never close a cycle.
    """
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    tree: dict[str, list[tuple[str, str]]] = {}
    notices = []
    for e in graph.object_edges:
        a, b = e.source, e.target
        if a == b:
            notices.append(Diagnostic(INFO, "cycle", e.property, f"cycle: {a} -{e.property}- {a}"))
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            path = _tree_path(tree, a, b)
            text = path[0]
            for i in range(1, len(path), 2):
                text += f" -{path[i]}- {path[i + 1]}"
            text += f" -{e.property}- {path[0]}"
            notices.append(Diagnostic(INFO, "cycle", e.property, f"cycle: {text}"))
            continue
        parent[ra] = rb
        tree.setdefault(a, []).append((e.property, b))
        tree.setdefault(b, []).append((e.property, a))
    return notices


def _tree_path(tree: dict[str, list[tuple[str, str]]], start: str, goal: str) -> list[str]:
    prev: dict[str, tuple[str, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for prop, nxt in tree.get(node, ()):
            if nxt not in prev:
                prev[nxt] = (prop, node)
                queue.append(nxt)
    path = [goal]
    node = goal
    while prev[node] is not None:
        prop, node = prev[node]
        path += [prop, node]
    return path
