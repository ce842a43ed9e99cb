"""Prefix handling and other helpers shared by the serializers."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..axioms import (
    ClassAssertion,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    Ontology,
    SubClassOf,
)
from ..expressions import And, Datatype, Inverse, Max, Named, Only, Prop, Some

OWL = "http://www.w3.org/2002/07/owl#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
DCTERMS = "http://purl.org/dc/terms/"

STANDARD_PREFIXES = (("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD), ("dcterms", DCTERMS))


@dataclass(frozen=True)
class SerializedOntology:
    format: str
    per_module: dict[str, str] = field(default_factory=dict)
    merged: str = ""
    bridges: str = ""


def module_prefixes(names: list[str]) -> dict[str, str]:
    """Module name -> prefix: lowercased, made unique, never clashing with standard prefixes."""
    taken = {p for p, _ in STANDARD_PREFIXES}
    out: dict[str, str] = {}
    for name in names:
        base = re.sub(r"[^A-Za-z0-9_-]", "", name.lower()) or "m"
        if not base[0].isalpha():
            base = "m" + base
        candidate, n = base, 2
        while candidate in taken:
            candidate = f"{base}{n}"
            n += 1
        taken.add(candidate)
        out[name] = candidate
    return out


def split_prefixed(text: str) -> tuple[str, str]:
    prefix, _, local = text.partition(":")
    return prefix, local


def bridges_ontology(ontology: Ontology) -> Ontology:
    """Only the equivalence bridges, kept apart as a mapping file."""
    from ..axioms import OntologyModule

    modules = tuple(
        OntologyModule(m.name, m.namespace, tuple(ax for ax in m.axioms if isinstance(ax, EquivalentClasses)))
        for m in ontology.modules
    )
    return Ontology(ontology.name, ontology.base_iri, modules)


def map_modules(expr, fn):
    """Rewrite the module qualifier of every class and property name with ``fn``."""
    if isinstance(expr, Named):
        return expr if expr.is_thing else Named(expr.name, fn(expr.module))
    if isinstance(expr, Datatype):
        return expr
    if isinstance(expr, And):
        return And(tuple(map_modules(op, fn) for op in expr.operands))
    p = expr.prop
    prop = Inverse(Prop(p.prop.name, fn(p.prop.module))) if isinstance(p, Inverse) else Prop(p.name, fn(p.module))
    filler = map_modules(expr.filler, fn)
    if isinstance(expr, Max):
        return Max(expr.n, prop, filler)
    return type(expr)(prop, filler)


def map_axiom(ax, fn):
    """Apply an expression rewrite to every class expression of an axiom."""
    if isinstance(ax, SubClassOf):
        return SubClassOf(fn(ax.sub), fn(ax.sup))
    if isinstance(ax, EquivalentClasses):
        return EquivalentClasses(fn(ax.first), fn(ax.second))
    if isinstance(ax, DisjointClasses):
        return DisjointClasses(frozenset(fn(c) for c in ax.classes))
    if isinstance(ax, ClassAssertion):
        return ClassAssertion(ax.individual, fn(ax.cls))
    return ax


def absolute(ax, owner: str):
    return map_axiom(ax, lambda e: map_modules(e, lambda m: owner if m is None else m))


def relative(ax, owner: str):
    return map_axiom(ax, lambda e: map_modules(e, lambda m: None if m == owner else m))


def fix_data_top(expr, data_props: set[tuple[str | None, str]]):
    """Unqualified cardinalities on data properties range over rdfs:Literal."""
    from ..expressions import LITERAL, THING

    if isinstance(expr, (Named, Datatype)):
        return expr
    if isinstance(expr, And):
        return And(tuple(fix_data_top(op, data_props) for op in expr.operands))
    filler = fix_data_top(expr.filler, data_props)
    p = expr.prop
    if isinstance(expr, Max):
        if filler == THING and isinstance(p, Prop) and (p.module, p.name) in data_props:
            filler = LITERAL
        return Max(expr.n, p, filler)
    return type(expr)(p, filler)


def declaration_index(ontology: Ontology) -> dict[tuple[str, str], str]:
    """(module, name) -> declaration category."""
    return {
        (m.name, ax.entity): ax.category
        for m in ontology.modules
        for ax in m.axioms
        if isinstance(ax, Declaration)
    }
