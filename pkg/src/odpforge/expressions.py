"""Class expressions over the Manchester-syntax subset used by the catalog.

Expressions are immutable trees.  ``Named("Thing")`` stands for ``owl:Thing``;
datatype fillers of data properties are ``Datatype`` leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import OdpSyntaxError
from .lexer import TokenStream, describe, tokenize

THING_NAME = "Thing"
DATATYPE_PREFIXES = ("xsd", "rdfs", "rdf")
KEYWORDS = frozenset(
    {"some", "only", "max", "inverse", "and", "SubClassOf", "EquivalentTo", "DisjointWith"}
)


@dataclass(frozen=True)
class Named:
    name: str
    module: str | None = None

    @property
    def is_thing(self) -> bool:
        return self.name == THING_NAME and self.module is None


@dataclass(frozen=True)
class Datatype:
    name: str


@dataclass(frozen=True)
class Prop:
    name: str
    module: str | None = None


@dataclass(frozen=True)
class Inverse:
    prop: Prop

    @property
    def name(self) -> str:
        return self.prop.name


@dataclass(frozen=True)
class Some:
    prop: Prop | Inverse
    filler: "ClassExpression"


@dataclass(frozen=True)
class Only:
    prop: Prop | Inverse
    filler: "ClassExpression"


@dataclass(frozen=True)
class Max:
    n: int
    prop: Prop | Inverse
    filler: "ClassExpression"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("max cardinality must be non-negative")


@dataclass(frozen=True)
class And:
    operands: tuple["ClassExpression", ...]


ClassExpression = Union[Named, Datatype, Some, Only, Max, And]
PropertyExpression = Union[Prop, Inverse]

THING = Named(THING_NAME)
LITERAL = Datatype("rdfs:Literal")


def is_top(expr: ClassExpression) -> bool:
    return expr == THING or expr == LITERAL


def base_prop(prop: PropertyExpression) -> Prop:
    return prop.prop if isinstance(prop, Inverse) else prop


# --------------------------------------------------------------------- walking


def named_classes(expr: ClassExpression) -> set[Named]:
    """Named classes occurring in ``expr`` (``Thing`` excluded)."""
    out: set[Named] = set()
    _collect(expr, out, set())
    return out


def properties(expr: ClassExpression) -> set[Prop]:
    out: set[Prop] = set()
    _collect(expr, set(), out)
    return out


def _collect(expr, classes: set, props: set) -> None:
    if isinstance(expr, Named):
        if not expr.is_thing:
            classes.add(expr)
    elif isinstance(expr, (Some, Only, Max)):
        props.add(base_prop(expr.prop))
        _collect(expr.filler, classes, props)
    elif isinstance(expr, And):
        for op in expr.operands:
            _collect(op, classes, props)


def map_names(expr: ClassExpression, fn: Callable[[str], str]) -> ClassExpression:
    """Rename every class and property name in ``expr``; Thing and datatypes are fixed."""
    if isinstance(expr, Named):
        return expr if expr.is_thing else Named(fn(expr.name), expr.module)
    if isinstance(expr, Datatype):
        return expr
    if isinstance(expr, And):
        return And(tuple(map_names(op, fn) for op in expr.operands))
    prop = _map_prop(expr.prop, fn)
    filler = map_names(expr.filler, fn)
    if isinstance(expr, Max):
        return Max(expr.n, prop, filler)
    return type(expr)(prop, filler)


def _map_prop(prop: PropertyExpression, fn) -> PropertyExpression:
    if isinstance(prop, Inverse):
        return Inverse(Prop(fn(prop.prop.name), prop.prop.module))
    return Prop(fn(prop.name), prop.module)


# -------------------------------------------------------------------- printing


def default_name(entity: Named | Prop | Datatype) -> str:
    if isinstance(entity, Named) and entity.is_thing:
        return "owl:Thing"
    module = getattr(entity, "module", None)
    return f"{module}:{entity.name}" if module else entity.name


def render(
    expr: ClassExpression,
    name: Callable[[Named | Prop | Datatype], str] = default_name,
    qualify_top: bool = False,
) -> str:
    """Render ``expr`` in Manchester syntax.

    Cardinalities over ``owl:Thing`` (or ``rdfs:Literal``) print unqualified
    unless ``qualify_top`` is set.
    """
    if isinstance(expr, (Named, Datatype)):
        return name(expr)
    if isinstance(expr, And):
        return " and ".join(
            f"({render(op, name, qualify_top)})" if isinstance(op, And) else render(op, name, qualify_top)
            for op in expr.operands
        )
    prop = render_prop(expr.prop, name)
    if isinstance(expr, Max):
        head = f"{prop} max {expr.n}"
        if is_top(expr.filler) and not qualify_top:
            return head
        return f"{head} {_filler(expr.filler, name, qualify_top)}"
    keyword = "some" if isinstance(expr, Some) else "only"
    return f"{prop} {keyword} {_filler(expr.filler, name, qualify_top)}"


def render_prop(prop: PropertyExpression, name=default_name) -> str:
    if isinstance(prop, Inverse):
        return f"inverse {name(prop.prop)}"
    return name(prop)


def _filler(expr, name, qualify_top) -> str:
    text = render(expr, name, qualify_top)
    return text if isinstance(expr, (Named, Datatype)) else f"({text})"


# --------------------------------------------------------------------- parsing


def parse_class_expression(text: str) -> ClassExpression:
    """Parse a Manchester-style class expression.

    Supports ``some``, ``only``, ``max n``, ``inverse``, ``and`` and
    parentheses.  A restriction filler is a name or a parenthesized
    expression, so nesting has to be written with parentheses.
    """
    stream = TokenStream(tokenize(text))
    expr = parse_expression(stream)
    if stream.peek().kind != "eof":
        raise stream.error(f"unexpected {describe(stream.peek())}", "end of expression")
    return expr


def parse_expression(stream: TokenStream) -> ClassExpression:
    operands = [_primary(stream)]
    while stream.accept("and"):
        operands.append(_primary(stream))
    return operands[0] if len(operands) == 1 else And(tuple(operands))


def _primary(stream: TokenStream) -> ClassExpression:
    if stream.accept("("):
        expr = parse_expression(stream)
        stream.expect(")")
        return expr
    tok = stream.peek()
    if tok.kind != "name":
        raise stream.error(f"unexpected {describe(tok)}", "class expression")
    if tok.value == "inverse" or stream.peek(1).value in ("some", "only", "max"):
        return _restriction(stream)
    return _atom(stream)


def _restriction(stream: TokenStream) -> ClassExpression:
    prop: PropertyExpression
    if stream.accept("inverse"):
        if stream.accept("("):
            prop = Inverse(_prop_name(stream))
            stream.expect(")")
        else:
            prop = Inverse(_prop_name(stream))
    else:
        prop = _prop_name(stream)
    tok = stream.peek()
    if stream.accept("some"):
        return Some(prop, _filler_expr(stream))
    if stream.accept("only"):
        return Only(prop, _filler_expr(stream))
    if stream.accept("max"):
        n = int(stream.expect_kind("int", "cardinality").value)
        nxt = stream.peek()
        if nxt.value == "(" or (nxt.kind == "name" and nxt.value not in KEYWORDS):
            return Max(n, prop, _filler_expr(stream))
        return Max(n, prop, THING)
    raise OdpSyntaxError(f"unexpected {describe(tok)}", tok.line, tok.col, "'some', 'only' or 'max'")


def _filler_expr(stream: TokenStream) -> ClassExpression:
    if stream.accept("("):
        expr = parse_expression(stream)
        stream.expect(")")
        return expr
    return _atom(stream)


def _prop_name(stream: TokenStream) -> Prop:
    tok = stream.expect_kind("name", "property name")
    if tok.value in KEYWORDS:
        raise OdpSyntaxError(f"keyword {tok.value!r} used as a name", tok.line, tok.col, "property name")
    prefix, _, local = tok.value.rpartition(":")
    return Prop(local, prefix or None)


def _atom(stream: TokenStream) -> ClassExpression:
    tok = stream.expect_kind("name", "class name")
    if tok.value in KEYWORDS:
        raise OdpSyntaxError(f"keyword {tok.value!r} used as a name", tok.line, tok.col, "class name")
    return atom(tok.value)


def atom(text: str) -> Named | Datatype:
    if text in (THING_NAME, "owl:Thing"):
        return THING
    prefix, _, local = text.rpartition(":")
    if prefix in DATATYPE_PREFIXES:
        return Datatype(text)
    return Named(local, prefix or None)
