import pytest

from odpforge.axioms import compile_project
from odpforge.catalog import (
    builtin_patterns,
    movie_example_project,
    recipe_example_project,
    recipe_sample_data,
)
from odpforge.dsl import parse_project, resolve
from odpforge.emit import read_instance_store


@pytest.fixture(scope="session")
def recipe_project():
    return parse_project(recipe_example_project())


@pytest.fixture(scope="session")
def recipe_resolved(recipe_project):
    return resolve(recipe_project, builtin_patterns())


@pytest.fixture(scope="session")
def recipe_ontology(recipe_resolved):
    return compile_project(recipe_resolved)


@pytest.fixture(scope="session")
def movie_resolved():
    return resolve(parse_project(movie_example_project()), builtin_patterns())


@pytest.fixture(scope="session")
def recipe_store():
    return read_instance_store(recipe_sample_data())
