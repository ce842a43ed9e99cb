"""Built-in pattern templates, example projects and sample instance data.

Everything is shipped as ``.odp``/``.ttl`` source and loaded through the DSL.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..model import PatternTemplate

PROJECTS = ("recipe", "movie")


def resource_text(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _patterns() -> tuple[PatternTemplate, ...]:
    from ..dsl import parse_project

    return parse_project(resource_text("patterns.odp")).patterns


def builtin_patterns() -> list[PatternTemplate]:
    """The seven built-in templates, in a fixed order."""
    return list(_patterns())


def pattern(name: str) -> PatternTemplate:
    for p in _patterns():
        if p.name == name:
            return p
    raise KeyError(name)


def recipe_example_project() -> str:
    return resource_text("recipe.odp")


def movie_example_project() -> str:
    return resource_text("movie.odp")


def recipe_sample_data() -> str:
    """Three recipes in Turtle; only one uses pork shoulder."""
    return resource_text("recipe_data.ttl")


def movie_sample_data() -> str:
    return resource_text("movie_data.ttl")


def competency_query() -> str:
    """Atoms for "a simple recipe with pork shoulder and spring onions"."""
    return resource_text("cq7.query")
