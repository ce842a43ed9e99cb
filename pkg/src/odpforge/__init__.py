"""odpforge: schema diagrams and ontology design patterns compiled to modular OWL."""

from .axioms import (
    ClassAssertion,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    Ontology,
    OntologyModule,
    SubClassOf,
    axiom_kind_catalog,
    compile_project,
    generate_disjointness,
    generate_edge_axioms,
    parse_axiom_text,
    render_axiom,
)
from .catalog import builtin_patterns, recipe_example_project
from .dsl import parse_project, print_project, resolve
from .emit import emit_dot, emit_manchester, emit_turtle, read_turtle_subset
from .kinds import AxiomKind
from .model import Edge, Identification, Instantiation, PatternTemplate, SchemaGraph, instantiate, join
from .reasoner import InstanceStore, entails, lint, materialize, query

__version__ = "0.1.0"


def compile_source(text: str) -> Ontology:
    """Parse, resolve against the built-in catalog, and compile a project."""
    return compile_project(resolve(parse_project(text), builtin_patterns()))


__all__ = [
    "AxiomKind", "ClassAssertion", "Declaration", "DisjointClasses", "Edge", "EquivalentClasses",
    "Identification", "InstanceStore", "Instantiation", "Ontology", "OntologyModule", "PatternTemplate",
    "SchemaGraph", "SubClassOf", "axiom_kind_catalog", "builtin_patterns", "compile_project",
    "compile_source", "emit_dot", "emit_manchester", "emit_turtle", "entails", "generate_disjointness",
    "generate_edge_axioms", "instantiate", "join", "lint", "materialize", "parse_axiom_text",
    "parse_project", "print_project", "query", "read_turtle_subset", "recipe_example_project",
    "render_axiom", "resolve",
]
