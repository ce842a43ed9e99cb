"""Manchester-syntax writer and the matching reader.

Frames list each entity with its provenance annotation; the axioms about an
entity are printed under its frame as full sentences, the same way the
catalog writes them (``Recipe SubClassOf requires only Situation``).
Disjointness over three or more classes is a top-level ``DisjointClasses:``
frame.
"""

from __future__ import annotations

import re

from ..axioms import (
    CLASS_DECL,
    DATA_PROPERTY_DECL,
    INDIVIDUAL_DECL,
    OBJECT_PROPERTY_DECL,
    Axiom,
    ClassAssertion,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    Ontology,
    OntologyModule,
    SubClassOf,
    axiom_sort_key,
    parse_axiom,
    render_axiom,
)
from ..errors import OdpSyntaxError, UnsupportedConstruct
from ..expressions import Datatype, Named, Prop, atom, named_classes, properties
from ..lexer import TokenStream, tokenize
from .common import (
    STANDARD_PREFIXES,
    SerializedOntology,
    absolute,
    bridges_ontology,
    fix_data_top,
    map_axiom,
    module_prefixes,
    relative,
)

_FRAME_KEYWORD = {
    CLASS_DECL: "Class",
    OBJECT_PROPERTY_DECL: "ObjectProperty",
    DATA_PROPERTY_DECL: "DataProperty",
    INDIVIDUAL_DECL: "Individual",
}
_DECL_BY_FRAME = {v: k for k, v in _FRAME_KEYWORD.items()}
INDENT = "    "


def emit_manchester(ontology: Ontology) -> SerializedOntology:
    per_module = {m.name: _document(ontology, [m], single=m.name) for m in ontology.modules}
    merged = _document(ontology, list(ontology.modules))
    bridges = bridges_ontology(ontology)
    return SerializedOntology(
        "manchester", per_module, merged, _document(bridges, list(bridges.modules), iri_suffix="/bridges")
    )


def _document(ontology: Ontology, modules: list[OntologyModule], single: str | None = None,
              iri_suffix: str = "") -> str:
    names = [m.name for m in ontology.modules]
    prefixes = module_prefixes(names)
    ns = {m.name: m.namespace for m in ontology.modules}
    lines: list[str] = []
    if single is not None:
        lines.append(f"Prefix: : <{ns[single]}>")
    lines += [f"Prefix: {p}: <{iri}>" for p, iri in STANDARD_PREFIXES]
    used = _referenced_modules(modules) if single is not None else names
    lines += [f"Prefix: {prefixes[n]}: <{ns[n]}>" for n in names if n in used and n != single]
    lines.append("")

    if single is not None:
        module = modules[0]
        lines.append(f"Ontology: <{module.iri}>")
        lines += _annotations([f'rdfs:label "{module.name}"', f"dcterms:isPartOf <{ontology.iri}>"], 1)
    else:
        lines.append(f"Ontology: <{ontology.iri}{iri_suffix}>")
        lines += _annotations([f'rdfs:label "{ontology.name}"'] +
                              [f"dcterms:hasPart <{m.iri}>" for m in modules], 1)

    def name_for(owner: str):
        def name(entity) -> str:
            if isinstance(entity, Named) and entity.is_thing:
                return "owl:Thing"
            if isinstance(entity, Datatype):
                return entity.name
            mod = entity.module or owner
            if single is not None and mod == single:
                return entity.name
            return f"{prefixes[mod]}:{entity.name}"
        return name

    top_level: list[str] = []
    for module in modules:
        name = name_for(module.name)
        frames: dict[tuple[str, str], list[str]] = {}
        order: list[tuple[str, str]] = []
        for ax in module.axioms:
            if isinstance(ax, Declaration):
                key = (ax.category, ax.entity)
                frames.setdefault(key, [])
                order.append(key)
        cat_rank = {c: i for i, c in enumerate(_FRAME_KEYWORD)}
        order.sort(key=lambda k: (cat_rank[k[0]], k[1]))
        types: dict[str, list[str]] = {}
        for ax in module.axioms:
            if isinstance(ax, Declaration):
                continue
            if isinstance(ax, ClassAssertion):
                types.setdefault(ax.individual, []).append(name(ax.cls))
                continue
            if isinstance(ax, DisjointClasses) and len(ax.classes) > 2:
                top_level.append(render_axiom(ax, name))
                continue
            key = _frame_of(ax, frames)
            if key is None:
                raise UnsupportedConstruct(f"axiom has no local subject: {render_axiom(ax)}")
            frames[key].append(render_axiom(ax, name))
        for key in order:
            category, entity = key
            lines.append("")
            lines.append(f"{_FRAME_KEYWORD[category]}: {name(Named(entity))}")
            lines += _annotations([f"rdfs:isDefinedBy <{module.iri}>"], 1)
            if entity in types and category == INDIVIDUAL_DECL:
                lines.append(f"{INDENT}Types: " + ", ".join(types[entity]))
            lines += [INDENT + text for text in frames[key]]
        # bridges-only documents carry axioms without declarations
        orphans = [t for k, v in frames.items() if k not in order for t in v]
        if orphans:
            lines.append("")
            lines += orphans
    if top_level:
        lines.append("")
        lines += top_level
    return "\n".join(lines) + "\n"


def _annotations(entries: list[str], depth: int) -> list[str]:
    pad = INDENT * depth
    out = [f"{pad}Annotations:"]
    for i, e in enumerate(entries):
        out.append(f"{pad}{INDENT}{e}" + ("," if i < len(entries) - 1 else ""))
    return out


def _referenced_modules(modules: list[OntologyModule]) -> set[str]:
    used = set()
    for m in modules:
        for ax in m.axioms:
            for expr in _expressions(ax):
                used |= {c.module for c in named_classes(expr) if c.module}
                used |= {p.module for p in properties(expr) if p.module}
    return used


def _expressions(ax: Axiom) -> list:
    if isinstance(ax, SubClassOf):
        return [ax.sub, ax.sup]
    if isinstance(ax, EquivalentClasses):
        return [ax.first, ax.second]
    if isinstance(ax, DisjointClasses):
        return list(ax.classes)
    if isinstance(ax, ClassAssertion):
        return [ax.cls]
    return []


def _frame_of(ax: Axiom, frames: dict[tuple[str, str], list[str]]) -> tuple[str, str] | None:
    """The local entity whose frame an axiom is listed under."""
    candidates: list[tuple[str, str]] = []
    if isinstance(ax, SubClassOf):
        exprs = [ax.sub, ax.sup]
    elif isinstance(ax, EquivalentClasses):
        exprs = [ax.first, ax.second]
    else:
        exprs = [c for c in ax.members()]
    for e in exprs:
        if isinstance(e, Named) and not e.is_thing and e.module is None:
            candidates.append((CLASS_DECL, e.name))
    for e in exprs:
        for p in sorted(properties(e), key=lambda p: p.name):
            if p.module is None:
                candidates += [(OBJECT_PROPERTY_DECL, p.name), (DATA_PROPERTY_DECL, p.name)]
        for c in sorted(named_classes(e), key=lambda c: c.name):
            if c.module is None:
                candidates.append((CLASS_DECL, c.name))
    for key in candidates:
        if key in frames:
            return key
    if candidates:
        key = candidates[0]
        frames[key] = []
        return key
    return None


# ---------------------------------------------------------------------- reading

_PREFIX_RE = re.compile(r"^Prefix:\s*([A-Za-z][\w-]*)?:\s*<([^>]*)>\s*$")
_FRAME_RE = re.compile(r"^(Class|ObjectProperty|DataProperty|Individual):\s*(\S+)\s*$")


def read_manchester(text: str) -> Ontology:
    """Read a document written by ``emit_manchester`` back into an Ontology."""
    prefixes: dict[str, str] = {}
    onto_iri = None
    labels: list[str] = []
    parts: list[str] = []
    part_of = None
    raw: list[tuple[str | None, Axiom, int]] = []  # (owner qualifier, axiom with raw qualifiers, line)
    frame: tuple[str, str | None, str] | None = None  # (category, qualifier, name)
    in_annotations = False
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip(" "))
        if indent == 0:
            in_annotations = False
            m = _PREFIX_RE.match(stripped)
            if m:
                prefixes[m.group(1) or ""] = m.group(2)
                continue
            if stripped.startswith("Ontology:"):
                onto_iri = stripped[len("Ontology:"):].strip().strip("<>")
                frame = ("Ontology", None, "")
                continue
            m = _FRAME_RE.match(stripped)
            if m:
                qual, name = _split(m.group(2))
                frame = (_DECL_BY_FRAME[m.group(1)], qual, name)
                raw.append((qual, Declaration(name, frame[0]), lineno))
                continue
            if stripped.startswith("DisjointClasses:"):
                members = [atom(t.strip()) for t in stripped[len("DisjointClasses:"):].split(",")]
                owner = members[0].module if isinstance(members[0], Named) else None
                raw.append((owner, DisjointClasses(frozenset(members)), lineno))
                continue
            frame = None
            raw.append((None, _parse_sentence(stripped, lineno), lineno))
            continue
        if frame is None:
            raise OdpSyntaxError(f"indented line outside a frame: {stripped!r}", lineno, indent + 1)
        if stripped == "Annotations:":
            in_annotations = True
            continue
        if in_annotations and indent >= 2 * len(INDENT):
            entry = stripped.rstrip(",")
            key, _, value = entry.partition(" ")
            value = value.strip()
            if frame[0] == "Ontology":
                if key == "rdfs:label":
                    labels.append(value.strip('"'))
                elif key == "dcterms:hasPart":
                    parts.append(value.strip("<>"))
                elif key == "dcterms:isPartOf":
                    part_of = value.strip("<>")
            continue
        in_annotations = False
        if stripped.startswith("Types:"):
            for t in stripped[len("Types:"):].split(","):
                raw.append((frame[1], ClassAssertion(frame[2], atom(t.strip())), lineno))
            continue
        raw.append((frame[1], _parse_sentence(stripped, lineno), lineno))

    if onto_iri is None:
        return Ontology("", "", ())
    default_ns = prefixes.get("")
    if part_of is not None:
        module_iris = [onto_iri]
        project = labels[0] if labels else ""
    else:
        module_iris = parts
        project = labels[0] if labels else ""
    base = _base_of(module_iris[0]) if module_iris else onto_iri + "/"
    mod_by_ns = {iri + "/": iri[len(base):] for iri in module_iris}

    def module_of(qual: str | None) -> str:
        if qual is None:
            if default_ns is None or default_ns not in mod_by_ns:
                raise UnsupportedConstruct("unqualified name without a module default prefix")
            return mod_by_ns[default_ns]
        iri = prefixes.get(qual)
        if iri is not None and iri not in mod_by_ns and iri.startswith(base) and iri.endswith("/"):
            local = iri[len(base):-1]
            if re.fullmatch(r"[A-Za-z_][\w-]*", local):
                return local
        if iri not in mod_by_ns:
            raise UnsupportedConstruct(f"prefix {qual!r} does not name a module namespace")
        return mod_by_ns[iri]

    resolved: list[tuple[str, Axiom]] = []
    for qual, ax, lineno in raw:
        if isinstance(ax, Declaration):
            resolved.append((module_of(qual), ax))
            continue
        owner = module_of(qual) if qual is not None or default_ns else _first_module(ax, module_of)
        ax = map_axiom(ax, lambda e: _resolve_expr(e, module_of))
        resolved.append((owner, ax))
    data_props = {(m, ax.entity) for m, ax in resolved
                  if isinstance(ax, Declaration) and ax.category == DATA_PROPERTY_DECL}
    axioms: dict[str, list[Axiom]] = {mod_by_ns[iri + "/"]: [] for iri in module_iris}
    for owner, ax in resolved:
        if not isinstance(ax, Declaration):
            ax = absolute(ax, owner)
            ax = map_axiom(ax, lambda e: fix_data_top(e, data_props))
            ax = relative(ax, owner)
        axioms.setdefault(owner, []).append(ax)
    modules = tuple(
        OntologyModule(name, base + name + "/", tuple(sorted(dict.fromkeys(axs), key=axiom_sort_key)))
        for name, axs in axioms.items()
    )
    return Ontology(project, base, modules)


def _split(text: str) -> tuple[str | None, str]:
    if ":" in text:
        qual, _, name = text.partition(":")
        return qual, name
    return None, text


def _parse_sentence(text: str, lineno: int) -> Axiom:
    stream = TokenStream(tokenize(text))
    try:
        ax = parse_axiom(stream)
    except OdpSyntaxError as exc:
        raise OdpSyntaxError(str(exc).split(" at line")[0], lineno, exc.col, exc.expected) from None
    if stream.peek().kind != "eof":
        raise OdpSyntaxError(f"trailing text in axiom {text!r}", lineno, stream.peek().col)
    return ax


def _resolve_expr(expr, module_of):
    from .common import map_modules

    return map_modules(expr, lambda q: None if q is None else module_of(q))


def _base_of(module_iri: str) -> str:
    cut = max(module_iri.rfind("/"), module_iri.rfind("#"))
    return module_iri[: cut + 1]


def _first_module(ax: Axiom, module_of) -> str:
    for e in _expressions(ax):
        for q in _qualifiers(e):
            if q:
                return module_of(q)
    raise UnsupportedConstruct("cannot tell which module an axiom belongs to")


def _qualifiers(expr):
    """Module qualifiers in reading order."""
    from ..expressions import And, Inverse

    if isinstance(expr, Named):
        yield expr.module
    elif isinstance(expr, And):
        for op in expr.operands:
            yield from _qualifiers(op)
    elif not isinstance(expr, Datatype):
        p = expr.prop.prop if isinstance(expr.prop, Inverse) else expr.prop
        yield p.module
        yield from _qualifiers(expr.filler)
