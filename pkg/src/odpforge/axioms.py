"""Axiom generation from schema-diagram edges, and compilation into an Ontology."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Union

from .errors import CompileError, InvalidKindForDatatypeEdge, TooFewClasses
from .expressions import (
    LITERAL,
    THING,
    ClassExpression,
    Datatype,
    Inverse,
    Max,
    Named,
    Only,
    Prop,
    Some,
    default_name,
    map_names,
    named_classes,
    parse_expression,
    properties,
    render,
)
from .kinds import AxiomKind
from .lexer import TokenStream, describe, tokenize
from .model import DATA, Edge, SchemaGraph

if TYPE_CHECKING:
    from .dsl import ResolvedProject

CLASS_DECL = "Class"
OBJECT_PROPERTY_DECL = "ObjectProperty"
DATA_PROPERTY_DECL = "DataProperty"
INDIVIDUAL_DECL = "NamedIndividual"
DECLARATION_CATEGORIES = (CLASS_DECL, OBJECT_PROPERTY_DECL, DATA_PROPERTY_DECL, INDIVIDUAL_DECL)


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class DisjointClasses:
    classes: frozenset[Named]

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(self.classes))
        if len(self.classes) < 2:
            raise TooFewClasses("a disjointness axiom needs at least two distinct classes")

    def members(self) -> list[Named]:
        return sorted(self.classes, key=default_name)

    def pairs(self) -> list[tuple[Named, Named]]:
        m = self.members()
        return [(a, b) for i, a in enumerate(m) for b in m[i + 1:]]


@dataclass(frozen=True)
class EquivalentClasses:
    first: ClassExpression
    second: ClassExpression


@dataclass(frozen=True)
class Declaration:
    entity: str
    category: str

    def __post_init__(self):
        if self.category not in DECLARATION_CATEGORIES:
            raise ValueError(f"unknown declaration category {self.category!r}")


@dataclass(frozen=True)
class ClassAssertion:
    individual: str
    cls: Named


Axiom = Union[SubClassOf, DisjointClasses, EquivalentClasses, Declaration, ClassAssertion]

_CATEGORY_ORDER = {Declaration: 0, SubClassOf: 1, EquivalentClasses: 2, DisjointClasses: 3, ClassAssertion: 4}


def render_axiom(ax: Axiom, name=default_name, qualify_top: bool = False) -> str:
    """One-line Manchester rendering of an axiom."""
    if isinstance(ax, SubClassOf):
        return f"{render(ax.sub, name, qualify_top)} SubClassOf {render(ax.sup, name, qualify_top)}"
    if isinstance(ax, EquivalentClasses):
        return f"{render(ax.first, name, qualify_top)} EquivalentTo {render(ax.second, name, qualify_top)}"
    if isinstance(ax, DisjointClasses):
        members = [name(c) for c in ax.members()]
        if len(members) == 2:
            return f"{members[0]} DisjointWith {members[1]}"
        return "DisjointClasses: " + ", ".join(members)
    if isinstance(ax, Declaration):
        return f"{ax.category}: {ax.entity}"
    return f"Individual: {ax.individual} Types: {name(ax.cls)}"


def axiom_sort_key(ax: Axiom) -> tuple:
    return (_CATEGORY_ORDER[type(ax)], render_axiom(ax))


def is_logical(ax: Axiom) -> bool:
    return not isinstance(ax, Declaration)


def rename_axiom(ax: Axiom, fn: Callable[[str], str]) -> Axiom:
    if isinstance(ax, SubClassOf):
        return SubClassOf(map_names(ax.sub, fn), map_names(ax.sup, fn))
    if isinstance(ax, EquivalentClasses):
        return EquivalentClasses(map_names(ax.first, fn), map_names(ax.second, fn))
    if isinstance(ax, DisjointClasses):
        return DisjointClasses(frozenset(map_names(c, fn) for c in ax.classes))
    if isinstance(ax, Declaration):
        return Declaration(fn(ax.entity), ax.category)
    return ClassAssertion(fn(ax.individual), map_names(ax.cls, fn))


def axiom_expressions(ax: Axiom) -> list[ClassExpression]:
    if isinstance(ax, SubClassOf):
        return [ax.sub, ax.sup]
    if isinstance(ax, EquivalentClasses):
        return [ax.first, ax.second]
    if isinstance(ax, DisjointClasses):
        return ax.members()
    if isinstance(ax, ClassAssertion):
        return [ax.cls]
    return []


def parse_axiom(stream: TokenStream) -> Axiom:
    """Parse ``X SubClassOf Y``, ``X EquivalentTo Y`` or ``A DisjointWith B``."""
    left = parse_expression(stream)
    tok = stream.peek()
    if stream.accept("SubClassOf"):
        return SubClassOf(left, parse_expression(stream))
    if stream.accept("EquivalentTo"):
        return EquivalentClasses(left, parse_expression(stream))
    if stream.accept("DisjointWith"):
        right = parse_expression(stream)
        if not (isinstance(left, Named) and isinstance(right, Named)):
            raise stream.error("DisjointWith takes two class names", "class name")
        return DisjointClasses(frozenset({left, right}))
    raise stream.error(f"unexpected {describe(tok)}", "'SubClassOf', 'EquivalentTo' or 'DisjointWith'")


def parse_axiom_text(text: str) -> Axiom:
    stream = TokenStream(tokenize(text))
    ax = parse_axiom(stream)
    stream.accept(".")
    if stream.peek().kind != "eof":
        raise stream.error(f"unexpected {describe(stream.peek())}", "end of axiom")
    return ax


# ------------------------------------------------------------------ generation


def axiom_kind_catalog() -> list[tuple[AxiomKind, str, str]]:
    """The fifteen catalog entries as (kind, DL template, Manchester template)."""
    return [(k, k.dl, k.manchester) for k in sorted(AxiomKind, key=lambda k: k.number)]


def generate_edge_axioms(edge: Edge, selection: Iterable[AxiomKind] | None = None) -> list[Axiom]:
    """Instantiate the catalog templates for one edge, in catalog order."""
    kinds = sorted(edge.selection if selection is None else selection, key=lambda k: k.number)
    is_data = edge.kind == DATA
    if is_data:
        bad = [k for k in kinds if not k.allowed_on_data]
        if bad:
            raise InvalidKindForDatatypeEdge(
                f"{edge.property} is a data property; {', '.join(k.keyword for k in bad)} not applicable"
            )
    a = Named(edge.source) if edge.source != THING.name else THING
    b: ClassExpression
    if is_data:
        b = Datatype(edge.target)
    else:
        b = Named(edge.target) if edge.target != THING.name else THING
    r = Prop(edge.property)
    inv = Inverse(r)
    top = LITERAL if is_data else THING
    K = AxiomKind
    templates = {
        K.DOMAIN: lambda: SubClassOf(Some(r, top), a),
        K.SCOPED_DOMAIN: lambda: SubClassOf(Some(r, b), a),
        K.RANGE: lambda: SubClassOf(THING, Only(r, b)),
        K.SCOPED_RANGE: lambda: SubClassOf(a, Only(r, b)),
        K.EXISTENTIAL: lambda: SubClassOf(a, Some(r, b)),
        K.INVERSE_EXISTENTIAL: lambda: SubClassOf(b, Some(inv, a)),
        K.FUNCTIONALITY: lambda: SubClassOf(THING, Max(1, r, top)),
        K.QUALIFIED_FUNCTIONALITY: lambda: SubClassOf(THING, Max(1, r, b)),
        K.SCOPED_FUNCTIONALITY: lambda: SubClassOf(a, Max(1, r, top)),
        K.QUALIFIED_SCOPED_FUNCTIONALITY: lambda: SubClassOf(a, Max(1, r, b)),
        K.INVERSE_FUNCTIONALITY: lambda: SubClassOf(THING, Max(1, inv, THING)),
        K.INVERSE_QUALIFIED_FUNCTIONALITY: lambda: SubClassOf(THING, Max(1, inv, a)),
        K.INVERSE_SCOPED_FUNCTIONALITY: lambda: SubClassOf(b, Max(1, inv, THING)),
        K.INVERSE_QUALIFIED_SCOPED_FUNCTIONALITY: lambda: SubClassOf(b, Max(1, inv, a)),
    }
    out: list[Axiom] = []
    for k in kinds:
        if k is K.DISJOINTNESS:
            out.append(generate_disjointness([edge.source, edge.target]))
        else:
            out.append(templates[k]())
    return out


def generate_disjointness(classes: Iterable[str | Named]) -> DisjointClasses:
    members = frozenset(c if isinstance(c, Named) else Named(c) for c in classes)
    if len(members) < 2:
        raise TooFewClasses(f"disjointness needs at least two classes, got {len(members)}")
    return DisjointClasses(members)


# ------------------------------------------------------------------- ontology


@dataclass(frozen=True)
class OntologyModule:
    name: str
    namespace: str
    axioms: tuple[Axiom, ...]
    graph: SchemaGraph | None = field(default=None, compare=False)

    @property
    def iri(self) -> str:
        return self.namespace[:-1]

    def declared(self) -> dict[str, str]:
        return {ax.entity: ax.category for ax in self.axioms if isinstance(ax, Declaration)}

    def logical_axioms(self) -> list[Axiom]:
        return [ax for ax in self.axioms if is_logical(ax)]

    def count(self, kind: type) -> int:
        return sum(isinstance(ax, kind) for ax in self.axioms)


@dataclass(frozen=True)
class Ontology:
    name: str
    base_iri: str
    modules: tuple[OntologyModule, ...] = ()

    @property
    def iri(self) -> str:
        return self.base_iri.rstrip("/#")

    def module(self, name: str) -> OntologyModule:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)

    @property
    def merged_axioms(self) -> list[Axiom]:
        return [ax for m in self.modules for ax in m.axioms]

    def iter_axioms(self) -> Iterator[tuple[str, Axiom]]:
        for m in self.modules:
            for ax in m.axioms:
                yield m.name, ax

    @property
    def entity_index(self) -> dict[str, str]:
        """``Module:name`` -> IRI for every declared entity."""
        return {
            f"{m.name}:{ax.entity}": m.namespace + ax.entity
            for m in self.modules
            for ax in m.axioms
            if isinstance(ax, Declaration)
        }

    def axiom_multiset(self) -> Counter:
        return Counter(self.iter_axioms())

    def bridges(self) -> list[tuple[str, EquivalentClasses]]:
        return [(m, ax) for m, ax in self.iter_axioms() if isinstance(ax, EquivalentClasses)]


def module_namespace(base_iri: str, module: str) -> str:
    return base_iri + module + "/"


def compile_module(module, base_iri: str) -> OntologyModule:
    """Compile one resolved module: declarations, edge axioms, disjointness, extras, bridges."""
    graph: SchemaGraph = module.graph
    axioms: list[Axiom] = []
    axioms += [Declaration(c, CLASS_DECL) for c in sorted(graph.classes)]
    for prop, kind in sorted(graph.properties.items()):
        axioms.append(Declaration(prop, DATA_PROPERTY_DECL if kind == DATA else OBJECT_PROPERTY_DECL))
    axioms += [Declaration(i, INDIVIDUAL_DECL) for i in sorted(graph.individual_names)]
    for edge in graph.edges:
        axioms += generate_edge_axioms(edge)
    for block in module.disjoint_blocks:
        axioms.append(generate_disjointness(block))
    axioms += list(module.extra_axioms)
    axioms += [ClassAssertion(i, Named(c) if c != THING.name else THING) for i, c in sorted(graph.individuals)]
    for local, other, external in module.bridges:
        axioms.append(EquivalentClasses(Named(local), Named(external, other)))
    unique = list(dict.fromkeys(axioms))
    unique.sort(key=axiom_sort_key)
    return OntologyModule(module.name, module_namespace(base_iri, module.name), tuple(unique), graph)


def compile_project(resolved: "ResolvedProject") -> Ontology:
    """Compile a resolved project into an Ontology; raises rather than return partial output."""
    errors = [d for d in resolved.diagnostics if d.severity == "error"]
    if errors:
        raise CompileError(f"project has {len(errors)} resolution error(s)")
    modules = tuple(compile_module(m, resolved.base_iri) for m in resolved.modules)
    ontology = Ontology(resolved.name, resolved.base_iri, modules)
    problems = undeclared_references(ontology)
    if problems:
        raise CompileError("undeclared entities: " + ", ".join(problems))
    return ontology


def undeclared_references(ontology: Ontology) -> list[str]:
    declared = {m.name: m.declared() for m in ontology.modules}
    problems = []
    for mod, ax in ontology.iter_axioms():
        refs: list[tuple[str | None, str, tuple[str, ...]]] = []
        for expr in axiom_expressions(ax):
            refs += [(c.module, c.name, (CLASS_DECL,)) for c in named_classes(expr)]
            refs += [(p.module, p.name, (OBJECT_PROPERTY_DECL, DATA_PROPERTY_DECL)) for p in properties(expr)]
        if isinstance(ax, ClassAssertion):
            refs.append((None, ax.individual, (INDIVIDUAL_DECL,)))
        for owner, name, cats in refs:
            table = declared.get(owner or mod, {})
            if table.get(name) not in cats:
                problems.append(f"{owner or mod}:{name}")
    return sorted(set(problems))
