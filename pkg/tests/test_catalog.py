from odpforge.axioms import ClassAssertion
from odpforge.catalog import (
    builtin_patterns,
    competency_query,
    movie_sample_data,
    pattern,
    recipe_example_project,
)
from odpforge.dsl import parse_project
from odpforge.emit import read_instance_store

NUTRIENTS = {
    "Fat", "SaturatedFat", "TransFat", "Cholesterol", "Sodium", "Carbs", "DietaryFiber",
    "Sugars", "Protein", "VitaminA", "VitaminC", "Calcium", "Iron",
}


def edges_of(name):
    return {(e.property, e.source, e.target) for e in pattern(name).graph.edges}


def test_seven_patterns_in_stable_order():
    names = [p.name for p in builtin_patterns()]
    assert names == ["AgentRole", "NameStub", "Stub", "Plan", "Quantity", "QuantityOfStuff", "Provenance"]
    assert names == [p.name for p in builtin_patterns()]


def test_plan_pattern():
    assert pattern("Plan").graph.classes == {"Plan", "Situation", "Description"}
    assert {("requires", "Plan", "Situation"), ("produces", "Plan", "Situation")} <= edges_of("Plan")


def test_provenance_pattern():
    edges = edges_of("Provenance")
    assert ("wasDerivedFrom", "Entity", "Source") in edges
    assert ("wasGeneratedBy", "Entity", "Activity") in edges


def test_agent_role_pattern():
    assert pattern("AgentRole").graph.classes == {"Entity", "AgentRole", "Agent", "Role", "TimeInstant"}
    assert ("assumedBy", "AgentRole", "Agent") in edges_of("AgentRole")


def test_name_stub_uses_thing():
    assert ("hasName", "Thing", "Name") in edges_of("NameStub")
    assert pattern("NameStub").graph.uses_thing()


def test_patterns_are_valid_graphs():
    from odpforge.model import validate_graph

    for p in builtin_patterns():
        assert not [d for d in validate_graph(p.graph) if d.severity == "error"], p.name


def test_nutritional_content_types(recipe_ontology):
    module = recipe_ontology.module("NutritionalInformation")
    found = {a.individual for a in module.axioms if isinstance(a, ClassAssertion)}
    assert found == NUTRIENTS
    assert len(found) == 13


def test_us_label_name(recipe_ontology):
    assert "US-2014-Nutrition-Label" in recipe_ontology.module("NutritionalInformation").graph.classes


def test_merged_graph_has_name_on_recipe(recipe_resolved):
    merge = next(m for m in recipe_resolved.modules if m.name == "Merge")
    assert any(e.property == "hasName" and e.source == "Recipe" and e.kind == "data" for e in merge.graph.edges)


def test_recipe_source_parses_into_six_modules():
    assert len(parse_project(recipe_example_project()).modules) == 6


def test_movie_resolves_to_snippet(movie_resolved):
    (module,) = movie_resolved.modules
    assert module.graph.classes == {"Movie", "MovieRole", "Person", "Character", "Name"}


def test_sample_data_has_three_recipes(recipe_store):
    recipes = {s for s, p, o in recipe_store.property_assertions if p == "hasRecipeDifficultyLevel"}
    assert recipes == {"pulledPork", "scallionPancakes", "beefStew"}


def test_movie_sample_data():
    store = read_instance_store(movie_sample_data())
    assert ("myMovieMissXRole", "assumedBy", "janeSmith1") in store.property_assertions


def test_competency_query_is_nonempty():
    lines = [l for l in competency_query().splitlines() if l.strip() and not l.startswith("#")]
    assert len(lines) == 7
