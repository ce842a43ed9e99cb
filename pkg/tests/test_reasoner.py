import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from odpforge.axioms import Ontology, OntologyModule, generate_edge_axioms, parse_axiom_text
from odpforge.catalog import competency_query
from odpforge.errors import UnknownEntity
from odpforge.kinds import AxiomKind
from odpforge.model import Edge
from odpforge.reasoner import (
    InstanceStore,
    entails,
    lint,
    materialize,
    parse_query,
    query,
)

from reference_reasoner import engine_facts, reference_facts
from strategies import small_ontology_axioms, small_stores

ITEM_9 = parse_axiom_text("RecipeInstructions SubClassOf inverse hasCookingInstructions max 1 Recipe")
SHARED_INSTRUCTIONS = InstanceStore.of(
    [("r1", "Recipe"), ("r2", "Recipe")],
    [("r1", "hasCookingInstructions", "i"), ("r2", "hasCookingInstructions", "i")],
)
PROPS = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_existential_creates_one_witness():
    ax = [parse_axiom_text("Recipe SubClassOf requires some Situation")]
    sat = materialize(ax, InstanceStore.of([("r", "Recipe")]), 1)
    (fresh,) = sat.fresh_individuals
    assert fresh == "_ex:0:r"
    assert ("r", "requires", fresh) in sat.store.property_assertions
    assert (fresh, "Situation") in sat.store.class_assertions


def test_depth_zero_leaves_store_unchanged():
    ax = [parse_axiom_text("Recipe SubClassOf requires some Situation")]
    store = InstanceStore.of([("r", "Recipe")])
    sat = materialize(ax, store, 0)
    assert sat.store == store
    assert sat.fresh_individuals == frozenset()


def test_depth_bounds_chains():
    ax = [parse_axiom_text("A SubClassOf r some A")]
    for depth in range(4):
        sat = materialize(ax, InstanceStore.of([("x", "A")]), depth)
        assert len(sat.fresh_individuals) == depth
        assert sat.depth_used == depth


def test_recipe_and_situation_clash(recipe_ontology):
    sat = materialize(recipe_ontology, InstanceStore.of([("x", "Recipe"), ("x", "Situation")]))
    assert len(sat.clashes) == 1
    clash = sat.clashes[0]
    assert clash.individual == "x"
    assert set(clash.classes) == {"Recipe", "Situation"}
    assert "Recipe" in clash.reason and "Situation" in clash.reason


def test_item_9_merges_typed_instructions():
    store = InstanceStore.of(
        [("r1", "Recipe"), ("r2", "Recipe"), ("i", "RecipeInstructions")],
        [("r1", "hasCookingInstructions", "i"), ("r2", "hasCookingInstructions", "i")],
    )
    sat = materialize([ITEM_9], store, 1)
    assert sat.same("r1", "r2")
    assert sat.equivalence_classes() == [("r1", "r2")]


def test_item_9_alone_needs_the_instructions_typed():
    sat = materialize([ITEM_9], SHARED_INSTRUCTIONS, 1)
    assert not sat.same("r1", "r2")


def test_recipe_ontology_merges_recipes_sharing_instructions(recipe_ontology):
    sat = materialize(recipe_ontology, SHARED_INSTRUCTIONS)
    assert sat.equivalence_classes() == [("r1", "r2")]
    assert sat.clashes == ()


def test_merge_then_clash():
    axioms = [ITEM_9, parse_axiom_text("A DisjointWith B")]
    store = InstanceStore.of(
        [("r1", "Recipe"), ("r2", "Recipe"), ("i", "RecipeInstructions"), ("r1", "A"), ("r2", "B")],
        [("r1", "hasCookingInstructions", "i"), ("r2", "hasCookingInstructions", "i")],
    )
    sat = materialize(axioms, store, 1)
    (clash,) = sat.clashes
    assert clash.members == ("r1", "r2")


def test_only_propagates_to_fillers():
    ax = [parse_axiom_text("Recipe SubClassOf requires only Situation")]
    sat = materialize(ax, InstanceStore.of([("r", "Recipe")], [("r", "requires", "s")]), 0)
    assert sat.classes_of("s") == {"Situation"}


def test_domain_and_range():
    axioms = generate_edge_axioms(Edge("r", "A", "B"), [AxiomKind.DOMAIN, AxiomKind.RANGE])
    sat = materialize(axioms, InstanceStore.of([], [("x", "r", "y")]), 0)
    assert sat.classes_of("x") == {"A"}
    assert sat.classes_of("y") == {"B"}


def test_entails_existential_filler(recipe_ontology):
    assert entails(recipe_ontology, InstanceStore.of([("r", "Recipe")]), "requires(r, ?s)", 1)


def test_entails_on_empty_ontology():
    assert not entails([], InstanceStore(), "Recipe(r)")


def test_entails_unknown_entity(recipe_ontology):
    with pytest.raises(UnknownEntity):
        entails(recipe_ontology, InstanceStore(), "Banana(r)")


def test_query_competency_question_7(recipe_ontology, recipe_store):
    sat = materialize(recipe_ontology, recipe_store)
    rows = query(sat, parse_query(competency_query()))
    assert {row["r"] for row in rows} == {"pulledPork"}


def test_query_basic_pattern(recipe_ontology, recipe_store):
    pattern = "Recipe(?r)\nrequires(?r, ?s)\nhasConstituent(?s, ?q)\nofFoodType(?q, porkShoulder)"
    rows = query(materialize(recipe_ontology, recipe_store), pattern)
    assert [row["r"] for row in rows] == ["pulledPork"]


def test_query_empty_pattern():
    sat = materialize([], InstanceStore.of([("a", "A")]))
    assert query(sat, []) == [{}]


def test_query_over_empty_store(recipe_ontology):
    assert query(materialize(recipe_ontology, InstanceStore()), "Recipe(?r)") == []


def test_query_hides_fresh_unless_asked():
    ax = [parse_axiom_text("Recipe SubClassOf requires some Situation")]
    sat = materialize(ax, InstanceStore.of([("r", "Recipe")]), 1)
    assert query(sat, "requires(?r, ?s)") == []
    assert query(sat, "requires(?r, ?s)", include_fresh=True) == [{"r": "r", "s": "_ex:0:r"}]


def test_query_sees_through_equality():
    store = InstanceStore.of(
        [("r1", "Recipe"), ("r2", "Recipe"), ("i", "RecipeInstructions"), ("r2", "Tasty")],
        [("r1", "hasCookingInstructions", "i"), ("r2", "hasCookingInstructions", "i")],
    )
    sat = materialize([ITEM_9], store, 0)
    assert query(sat, "Tasty(r1)") == [{}]


def test_lint_flags_required_time_as_range_only(recipe_ontology):
    diags = lint(recipe_ontology)
    notes = [d for d in diags if d.element == "hasRequiredTime" and d.code == "RangeOnly"]
    assert notes and notes[0].message == "range-family only"
    assert all(d.severity != "error" for d in diags)


def test_lint_fully_axiomatized_edge_is_quiet():
    axioms = generate_edge_axioms(Edge("r", "A", "B"), [AxiomKind.DOMAIN, AxiomKind.RANGE])
    axioms.append(parse_axiom_text("A DisjointWith B"))
    onto = _ontology(axioms, ["A", "B"], ["r"])
    assert [d for d in lint(onto) if d.severity == "warning"] == []


def test_lint_class_outside_disjointness():
    axioms = generate_edge_axioms(Edge("r", "A", "B"), [AxiomKind.DOMAIN, AxiomKind.RANGE])
    axioms.append(parse_axiom_text("A DisjointWith B"))
    onto = _ontology(axioms, ["A", "B", "C"], ["r"])
    warnings = [d for d in lint(onto) if d.severity == "warning"]
    assert [(d.code, d.element) for d in warnings] == [("NoDisjointness", "C")]


def _ontology(axioms, classes, props):
    from odpforge.axioms import Declaration, axiom_sort_key

    decls = [Declaration(c, "Class") for c in classes] + [Declaration(p, "ObjectProperty") for p in props]
    module = OntologyModule("M", "http://x/M/", tuple(sorted(decls + axioms, key=axiom_sort_key)))
    return Ontology("X", "http://x/", (module,))


def _store(pair):
    types, facts = pair
    return InstanceStore.of(types, facts)


@PROPS
@given(small_ontology_axioms(), small_stores(), st.integers(0, 3))
def test_matches_reference_materializer(axioms, pair, depth):
    sat = materialize(axioms, _store(pair), depth)
    assert engine_facts(sat) == reference_facts(axioms, pair[0], pair[1], depth)


@PROPS
@given(small_ontology_axioms(), small_stores(), st.integers(0, 3))
def test_saturation_is_idempotent(axioms, pair, depth):
    sat = materialize(axioms, _store(pair), depth)
    again = materialize(axioms, sat.store, depth)
    assert again.store == sat.store


@PROPS
@given(small_ontology_axioms(), small_stores(), small_stores(), st.integers(0, 2))
def test_monotone_in_the_store(axioms, pair, extra, depth):
    small = materialize(axioms, _store(pair), depth)
    big = materialize(axioms, InstanceStore.of(pair[0] | extra[0], pair[1] | extra[1]), depth)
    for x, y in zip(engine_facts(small), engine_facts(big)):
        assert x <= y


@PROPS
@given(small_ontology_axioms(), small_stores(), st.integers(0, 2))
def test_monotone_in_depth(axioms, pair, depth):
    low = engine_facts(materialize(axioms, _store(pair), depth))
    high = engine_facts(materialize(axioms, _store(pair), depth + 1))
    assert all(x <= y for x, y in zip(low, high))


@PROPS
@given(small_ontology_axioms(max_axioms=8), small_stores(), st.sampled_from("ABC"), st.sampled_from("ABC"),
       st.sampled_from(["r", "s"]),
       st.sampled_from([(AxiomKind.SCOPED_RANGE, AxiomKind.RANGE), (AxiomKind.SCOPED_DOMAIN, AxiomKind.DOMAIN)]),
       st.integers(0, 3))
def test_scoped_derivations_subset_of_unscoped(axioms, pair, a, b, r, kinds, depth):
    edge = Edge(r, a, b)
    scoped = materialize(axioms + generate_edge_axioms(edge, [kinds[0]]), _store(pair), depth)
    plain = materialize(axioms + generate_edge_axioms(edge, [kinds[1]]), _store(pair), depth)
    assert all(x <= y for x, y in zip(engine_facts(scoped), engine_facts(plain)))


@PROPS
@given(small_ontology_axioms(), small_stores(), st.integers(0, 2))
def test_every_clash_cites_a_disjointness_axiom(axioms, pair, depth):
    sat = materialize(axioms, _store(pair), depth)
    for clash in sat.clashes:
        assert clash.axiom in axioms
        assert {c for c in clash.classes} <= {c.name for c in clash.axiom.classes}
        assert set(clash.classes) <= sat.classes_of(clash.individual)


@PROPS
@given(small_ontology_axioms(), small_stores())
def test_merged_individuals_answer_alike(axioms, pair):
    sat = materialize(axioms, _store(pair), 1)
    for group in sat.equivalence_classes():
        for pattern in ("r({x}, ?y)", "s(?y, {x})", "A({x})", "B({x})"):
            answers = {tuple(tuple(sorted(row.items())) for row in query(sat, pattern.format(x=x))) for x in group}
            assert len(answers) == 1
