"""Serializers: Manchester syntax, Turtle, Graphviz DOT."""

from .common import SerializedOntology, module_prefixes
from .dot import emit_dot
from .manchester import emit_manchester, read_manchester
from .turtle import emit_instance_store, emit_turtle, parse_turtle, read_instance_store, read_turtle_subset

__all__ = [
    "SerializedOntology",
    "emit_dot",
    "emit_instance_store",
    "emit_manchester",
    "emit_turtle",
    "module_prefixes",
    "parse_turtle",
    "read_instance_store",
    "read_manchester",
    "read_turtle_subset",
]
