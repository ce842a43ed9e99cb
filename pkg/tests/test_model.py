import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odpforge.catalog import builtin_patterns, pattern
from odpforge.errors import CategoryMismatch, DanglingIdentification, NameCollision, UnknownElement
from odpforge.kinds import AxiomKind
from odpforge.model import (
    DATA,
    Edge,
    Identification,
    Instantiation,
    PatternTemplate,
    SchemaGraph,
    find_cycles,
    instantiate,
    join,
    rename_graph,
    validate_graph,
)

from strategies import graphs, injective_renamings

# The movie snippet: AgentRole without time, renamed, joined with NameStub on Person.
MOVIE_CLASSES = {"Movie", "MovieRole", "Person", "Character", "Name"}
MOVIE_EDGES = {
    ("hasActor", "Movie", "MovieRole"),
    ("assumedBy", "MovieRole", "Person"),
    ("asCharacter", "MovieRole", "Character"),
    ("hasName", "Person", "Name"),
    ("hasNameAsString", "Name", "xsd:string"),
}
MOVIE_RENAMES = {
    "Entity": "Movie",
    "AgentRole": "MovieRole",
    "Agent": "Person",
    "Role": "Character",
}
MOVIE_PROP_RENAMES = {"performsAgentRole": "hasActor", "hasRole": "asCharacter"}


def edge_set(graph):
    return {(e.property, e.source, e.target) for e in graph.edges}


def test_movie_snippet_from_agent_role_and_name_stub():
    inst = Instantiation("AgentRole", MOVIE_RENAMES, MOVIE_PROP_RENAMES, frozenset({"TimeInstant"}))
    movie = instantiate(pattern("AgentRole"), inst)
    assert "TimeInstant" not in movie.classes
    assert not {"startsAtTime", "endsAtTime"} & {e.property for e in movie.edges}
    joined = join([movie, pattern("NameStub").graph], [Identification.of(("Person", "Thing"))])
    assert joined.classes == MOVIE_CLASSES
    assert edge_set(joined) == MOVIE_EDGES
    assert joined.datatypes == {"xsd:string"}


def test_identity_instantiation_returns_template_graph():
    for template in builtin_patterns():
        assert instantiate(template, Instantiation(template.name)) == template.graph


def test_unknown_rename_source():
    with pytest.raises(UnknownElement):
        instantiate(pattern("Plan"), Instantiation("Plan", {"Plann": "Recipe"}))


def test_unknown_deletion():
    with pytest.raises(UnknownElement):
        instantiate(pattern("Plan"), Instantiation("Plan", deletions=frozenset({"Nope"})))


def test_rename_must_be_injective():
    with pytest.raises(NameCollision):
        instantiate(pattern("Plan"), Instantiation("Plan", {"Plan": "X", "Description": "X"}))


def test_rename_onto_surviving_name_collides():
    with pytest.raises(NameCollision):
        instantiate(pattern("Plan"), Instantiation("Plan", {"Plan": "Situation"}))


def test_rename_with_wrong_category():
    with pytest.raises(CategoryMismatch):
        instantiate(pattern("Plan"), Instantiation("Plan", rename_properties={"Plan": "x"}))


def test_delete_cascades_to_edges():
    g = instantiate(pattern("Plan"), Instantiation("Plan", deletions=frozenset({"Description"})))
    assert "satisfies" not in {e.property for e in g.edges}
    diags = []
    instantiate(pattern("Plan"), Instantiation("Plan", deletions=frozenset({"Description"})), diags)
    assert [d.code for d in diags] == ["CascadeDelete"]


def test_additions_are_unioned():
    extra = SchemaGraph(frozenset({"Plan", "Step"}), edges=(Edge("hasStep", "Plan", "Step"),))
    g = instantiate(pattern("Plan"), Instantiation("Plan", additions=extra))
    assert "Step" in g.classes
    assert ("hasStep", "Plan", "Step") in edge_set(g)


def test_selections_survive_renaming():
    sel = frozenset({AxiomKind.EXISTENTIAL})
    template = PatternTemplate("T", SchemaGraph(frozenset({"A", "B"}), edges=(Edge("r", "A", "B", selection=sel),)))
    g = instantiate(template, Instantiation("T", {"A": "X"}, {"r": "q"}))
    assert g.edges == (Edge("q", "X", "B", selection=sel),)


def test_join_singleton_is_identity():
    g = pattern("Provenance").graph
    assert join([g]) == g


def test_join_merges_duplicate_edge_selections():
    a = SchemaGraph(frozenset({"A", "B"}), edges=(Edge("r", "A", "B", selection=frozenset({AxiomKind.RANGE})),))
    b = SchemaGraph(frozenset({"A", "B"}), edges=(Edge("r", "A", "B", selection=frozenset({AxiomKind.DOMAIN})),))
    (edge,) = join([a, b]).edges
    assert edge.selection == {AxiomKind.RANGE, AxiomKind.DOMAIN}


def test_join_identification_must_exist():
    with pytest.raises(DanglingIdentification):
        join([pattern("Plan").graph], [Identification.of(("Plan", "Missing"))])


def test_join_rejects_category_clash():
    a = SchemaGraph(frozenset({"r"}))
    b = SchemaGraph(frozenset({"A", "B"}), edges=(Edge("r", "A", "B"),))
    with pytest.raises(CategoryMismatch):
        join([a, b])


def test_join_order_independent_on_recipe_modules(recipe_resolved):
    module_graphs = [m.graph for m in recipe_resolved.modules if m.name != "Merge"]
    assert join(module_graphs) == join(list(reversed(module_graphs)))


def test_validate_empty_graph():
    assert validate_graph(SchemaGraph()) == []


def test_validate_undeclared_target():
    g = SchemaGraph(frozenset({"A"}), edges=(Edge("r", "A", "B"),))
    diags = validate_graph(g)
    assert [(d.code, d.element) for d in diags] == [("UnknownElement", "B")]


def test_validate_inverse_kind_on_data_edge():
    g = SchemaGraph(frozenset({"A"}), frozenset({"xsd:string"}),
                    (Edge("p", "A", "xsd:string", DATA, frozenset({AxiomKind.INVERSE_EXISTENTIAL})),))
    assert [d.code for d in validate_graph(g)] == ["InvalidKindForDatatypeEdge"]


def test_validate_name_used_twice():
    g = SchemaGraph(frozenset({"A", "r"}), edges=(Edge("r", "A", "A"),))
    assert "NameCollision" in [d.code for d in validate_graph(g)]


def test_recipe_merged_graph_has_cycles_and_no_errors(recipe_resolved):
    merged = next(m for m in recipe_resolved.modules if m.name == "Merge").graph
    diags = validate_graph(merged)
    assert not [d for d in diags if d.severity == "error"]
    assert any(d.code == "cycle" for d in diags)
    assert find_cycles(merged)


def test_tree_has_no_cycle_notice():
    g = SchemaGraph(frozenset({"A", "B", "C"}), edges=(Edge("r", "A", "B"), Edge("s", "B", "C")))
    assert find_cycles(g) == []


@settings(max_examples=100, deadline=None)
@given(graphs(), st.data())
def test_instantiate_commutes_with_renaming(graph, data):
    """instantiate(T, sigma . rho) equals rename(instantiate(T, rho), sigma)."""
    if validate_graph(graph):
        return
    template = PatternTemplate("T", graph)
    classes = sorted(graph.classes)
    rho = data.draw(injective_renamings(classes))
    stage = instantiate(template, Instantiation("T", rho))
    sigma = data.draw(injective_renamings(sorted(stage.classes)).map(
        lambda m: {k: v.replace("N", "M") for k, v in m.items()}))
    composed = {c: sigma.get(rho[c], rho[c]) for c in classes}
    assert instantiate(template, Instantiation("T", composed)) == rename_graph(stage, sigma)


@settings(max_examples=100, deadline=None)
@given(graphs(), graphs(), graphs())
def test_join_commutative_and_associative(g1, g2, g3):
    try:
        left = join([join([g1, g2]), g3])
    except CategoryMismatch:
        return
    assert join([g2, g1]) == join([g1, g2])
    assert left == join([g1, join([g2, g3])]) == join([g3, g2, g1])


@settings(max_examples=100, deadline=None)
@given(graphs(), st.data())
def test_instantiate_never_adds_elements(graph, data):
    if validate_graph(graph):
        return
    names = sorted(graph.classes)
    doomed = frozenset(data.draw(st.lists(st.sampled_from(names), unique=True))) if names else frozenset()
    out = instantiate(PatternTemplate("T", graph), Instantiation("T", deletions=doomed))
    assert len(out.classes) <= len(graph.classes)
    assert len(out.edges) <= len(graph.edges)
