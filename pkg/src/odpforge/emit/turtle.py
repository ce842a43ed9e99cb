"""Turtle output following the OWL 2 to RDF mapping, and a reader for that subset.

Blank nodes get labels ``_:b0, _:b1, ...`` in the order they are first
written, so equal ontologies give byte-equal files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

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
)
from ..errors import OdpSyntaxError, UnsupportedConstruct
from ..expressions import (
    LITERAL,
    THING,
    And,
    ClassExpression,
    Datatype,
    Inverse,
    Max,
    Named,
    Only,
    Prop,
    Some,
    is_top,
)
from ..reasoner import SAME_AS, InstanceStore, Literal
from .common import (
    DCTERMS,
    OWL,
    RDF,
    RDFS,
    STANDARD_PREFIXES,
    XSD,
    SerializedOntology,
    absolute,
    bridges_ontology,
    fix_data_top,
    map_axiom,
    module_prefixes,
    relative,
)

INDENT = "  "
_DECL_TYPE = {
    CLASS_DECL: "owl:Class",
    OBJECT_PROPERTY_DECL: "owl:ObjectProperty",
    DATA_PROPERTY_DECL: "owl:DatatypeProperty",
    INDIVIDUAL_DECL: "owl:NamedIndividual",
}
_PN_LOCAL = re.compile(r"^[A-Za-z_][\w-]*$")


def emit_turtle(ontology: Ontology) -> SerializedOntology:
    per_module = {m.name: _Writer(ontology, [m], single=m.name).document() for m in ontology.modules}
    merged = _Writer(ontology, list(ontology.modules)).document()
    bridges = bridges_ontology(ontology)
    return SerializedOntology(
        "turtle", per_module, merged, _Writer(bridges, list(bridges.modules), iri_suffix="/bridges").document()
    )


class _Writer:
    def __init__(self, ontology: Ontology, modules: list[OntologyModule], single: str | None = None,
                 iri_suffix: str = ""):
        self.ontology = ontology
        self.modules = modules
        self.single = single
        self.iri_suffix = iri_suffix
        self.prefixes = module_prefixes([m.name for m in ontology.modules])
        self.ns = {m.name: m.namespace for m in ontology.modules}
        self.counter = 0
        self.used_modules: set[str] = set()

    def term(self, entity, owner: str) -> str:
        if isinstance(entity, Named) and entity.is_thing:
            return "owl:Thing"
        if isinstance(entity, Datatype):
            return entity.name
        mod = entity.module or owner
        if not _PN_LOCAL.match(entity.name):
            return f"<{self.ns[mod]}{entity.name}>"
        if self.single is not None and mod == self.single:
            return f":{entity.name}"
        self.used_modules.add(mod)
        return f"{self.prefixes[mod]}:{entity.name}"

    def blank(self) -> str:
        label = f"_:b{self.counter}"
        self.counter += 1
        return label

    def document(self) -> str:
        body: list[str] = []
        for module in self.modules:
            for ax in module.axioms:
                body += self.axiom(ax, module)
        head: list[str] = []
        if self.single is not None:
            head.append(f"@prefix : <{self.ns[self.single]}> .")
        head += [f"@prefix {p}: <{iri}> ." for p, iri in STANDARD_PREFIXES]
        names = [m.name for m in self.ontology.modules]
        wanted = names if self.single is None else [n for n in names if n in self.used_modules]
        head += [f"@prefix {self.prefixes[n]}: <{self.ns[n]}> ." for n in wanted if n != self.single]
        head.append("")
        if self.single is not None:
            module = self.modules[0]
            head += [
                f"<{module.iri}> a owl:Ontology ;",
                f'{INDENT}rdfs:label "{module.name}" ;',
                f"{INDENT}dcterms:isPartOf <{self.ontology.iri}> .",
            ]
        else:
            lines = [f"<{self.ontology.iri}{self.iri_suffix}> a owl:Ontology ;",
                     f'{INDENT}rdfs:label "{self.ontology.name}"']
            if self.modules:
                lines[-1] += " ;"
                parts = [f"<{m.iri}>" for m in self.modules]
                lines.append(f"{INDENT}dcterms:hasPart " + ", ".join(parts))
            lines[-1] += " ."
            head += lines
        out = head + ([""] + body if body else [])
        return "\n".join(out) + "\n"

    def axiom(self, ax: Axiom, module: OntologyModule) -> list[str]:
        owner = module.name
        pending: list[tuple[str, object]] = []

        def t(expr) -> str:
            if isinstance(expr, (Named, Datatype)):
                return self.term(expr, owner)
            label = self.blank()
            pending.append((label, expr))
            return label

        if isinstance(ax, Declaration):
            entity = self.term(Named(ax.entity), owner)
            lines = [f"{entity} a {_DECL_TYPE[ax.category]} .", f"{entity} rdfs:isDefinedBy <{module.iri}> ."]
        elif isinstance(ax, SubClassOf):
            lines = [f"{t(ax.sub)} rdfs:subClassOf {t(ax.sup)} ."]
        elif isinstance(ax, EquivalentClasses):
            lines = [f"{t(ax.first)} owl:equivalentClass {t(ax.second)} ."]
        elif isinstance(ax, DisjointClasses):
            members = [self.term(c, owner) for c in ax.members()]
            if len(members) == 2:
                lines = [f"{members[0]} owl:disjointWith {members[1]} ."]
            else:
                lines = [f"{self.blank()} a owl:AllDisjointClasses ;",
                         f"{INDENT}owl:members ( {' '.join(members)} ) ."]
        else:
            lines = [f"{self.term(Named(ax.individual), owner)} a {self.term(ax.cls, owner)} ."]

        while pending:
            label, expr = pending.pop(0)
            lines += self.block(label, expr, owner, t)
        return lines

    def block(self, label: str, expr, owner: str, t) -> list[str]:
        if isinstance(expr, Inverse):
            return [f"{label} owl:inverseOf {self.term(expr.prop, owner)} ."]
        if isinstance(expr, And):
            items = " ".join(t(op) for op in expr.operands)
            return [f"{label} a owl:Class ;", f"{INDENT}owl:intersectionOf ( {items} ) ."]
        prop = t(expr.prop) if isinstance(expr.prop, Inverse) else self.term(expr.prop, owner)
        parts = [f"{label} a owl:Restriction", f"owl:onProperty {prop}"]
        if isinstance(expr, Some):
            parts.append(f"owl:someValuesFrom {t(expr.filler)}")
        elif isinstance(expr, Only):
            parts.append(f"owl:allValuesFrom {t(expr.filler)}")
        else:
            n = f'"{expr.n}"^^xsd:nonNegativeInteger'
            if is_top(expr.filler):
                parts.append(f"owl:maxCardinality {n}")
            else:
                parts.append(f"owl:maxQualifiedCardinality {n}")
                on = "owl:onDataRange" if isinstance(expr.filler, Datatype) else "owl:onClass"
                parts.append(f"{on} {t(expr.filler)}")
        return [parts[0] + " ;"] + [f"{INDENT}{p} ;" for p in parts[1:-1]] + [f"{INDENT}{parts[-1]} ."]


# ------------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<directive>@prefix|@base|PREFIX\b|BASE\b)
  | (?P<bnode>_:[A-Za-z0-9_][\w.-]*(?<!\.))
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<number>[+-]?(?:\d+\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<pname>(?:[A-Za-z][\w.-]*)?:(?:[\w-](?:[\w.-]*[\w-])?)?)
  | (?P<keyword>a\b|true\b|false\b)
  | (?P<punct>[.;,\[\]()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out: list[_Tok] = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise OdpSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        if m.lastgroup not in ("ws", "comment"):
            out.append(_Tok(m.lastgroup, m.group(), line, pos - start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


# Terms: ("iri", iri) | ("bnode", id) | ("lit", value, datatype-iri)
Term = tuple


class _TurtleParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[tuple[Term, Term, Term]] = []
        self.fresh = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, value: str) -> None:
        tok = self.next()
        if tok.value != value:
            raise OdpSyntaxError(f"unexpected {tok.value or 'end of input'!r}", tok.line, tok.col, repr(value))

    def parse(self) -> list[tuple[Term, Term, Term]]:
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "directive":
                self.next()
                if tok.value.lower().endswith("base"):
                    raise UnsupportedConstruct("base directives are outside the supported subset")
                name = self.next()
                if name.kind != "pname" or not name.value.endswith(":"):
                    raise OdpSyntaxError("expected a prefix name", name.line, name.col, "prefix:")
                iri = self.next()
                if iri.kind != "iri":
                    raise OdpSyntaxError("expected an IRI", iri.line, iri.col, "<iri>")
                self.prefixes[name.value[:-1]] = iri.value[1:-1]
                if tok.value.startswith("@"):
                    self.expect(".")
                continue
            subject = self.subject()
            if not (self.peek().value == "." and subject[0] == "bnode" and subject[1].startswith("[")):
                self.predicate_objects(subject)
            self.expect(".")
        return self.triples

    def subject(self) -> Term:
        tok = self.peek()
        if tok.value == "[":
            return self.blank_property_list()
        if tok.value == "(":
            return self.collection()
        return self.named_or_blank()

    def named_or_blank(self) -> Term:
        tok = self.next()
        if tok.kind == "iri":
            return ("iri", tok.value[1:-1])
        if tok.kind == "pname":
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise OdpSyntaxError(f"undeclared prefix {prefix!r}", tok.line, tok.col)
            return ("iri", self.prefixes[prefix] + local)
        if tok.kind == "bnode":
            return ("bnode", tok.value[2:])
        raise OdpSyntaxError(f"unexpected {tok.value or 'end of input'!r}", tok.line, tok.col, "subject or object")

    def predicate_objects(self, subject: Term) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "keyword" and tok.value == "a":
                self.next()
                pred: Term = ("iri", RDF + "type")
            else:
                pred = self.named_or_blank()
            while True:
                self.triples.append((subject, pred, self.object()))
                if self.peek().value != ",":
                    break
                self.next()
            if self.peek().value != ";":
                return
            while self.peek().value == ";":
                self.next()
            if self.peek().value in (".", "]"):
                return

    def object(self) -> Term:
        tok = self.peek()
        if tok.value == "[":
            return self.blank_property_list()
        if tok.value == "(":
            return self.collection()
        if tok.kind == "string":
            self.next()
            value = re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), tok.value[1:-1])
            if self.peek().kind == "dtype":
                self.next()
                dt = self.named_or_blank()
                return ("lit", value, dt[1])
            if self.peek().kind == "lang":
                self.next()
                return ("lit", value, RDF + "langString")
            return ("lit", value, XSD + "string")
        if tok.kind == "number":
            self.next()
            kind = "decimal" if "." in tok.value else "integer"
            if "e" in tok.value.lower():
                kind = "double"
            return ("lit", tok.value, XSD + kind)
        if tok.kind == "keyword" and tok.value in ("true", "false"):
            self.next()
            return ("lit", tok.value, XSD + "boolean")
        return self.named_or_blank()

    def new_blank(self) -> Term:
        self.fresh += 1
        return ("bnode", f"[{self.fresh}")

    def blank_property_list(self) -> Term:
        self.expect("[")
        node = self.new_blank()
        if self.peek().value != "]":
            self.predicate_objects(node)
        self.expect("]")
        return node

    def collection(self) -> Term:
        self.expect("(")
        items = []
        while self.peek().value != ")":
            if self.peek().kind == "eof":
                raise OdpSyntaxError("unterminated collection", self.peek().line, self.peek().col, "')'")
            items.append(self.object())
        self.expect(")")
        if not items:
            return ("iri", RDF + "nil")
        head = self.new_blank()
        node = head
        for k, item in enumerate(items):
            self.triples.append((node, ("iri", RDF + "first"), item))
            nxt = self.new_blank() if k < len(items) - 1 else ("iri", RDF + "nil")
            self.triples.append((node, ("iri", RDF + "rest"), nxt))
            node = nxt
        return head


def parse_turtle(text: str) -> tuple[list[tuple[Term, Term, Term]], dict[str, str]]:
    """Triples of a Turtle document in the supported subset, in document order."""
    parser = _TurtleParser(text)
    return parser.parse(), parser.prefixes


# ---------------------------------------------------------------------- reading

_TYPE = ("iri", RDF + "type")
_DECL_BY_IRI = {
    OWL + "Class": CLASS_DECL,
    OWL + "ObjectProperty": OBJECT_PROPERTY_DECL,
    OWL + "DatatypeProperty": DATA_PROPERTY_DECL,
    OWL + "NamedIndividual": INDIVIDUAL_DECL,
}
_STRUCTURAL = {OWL + n for n in ("Restriction", "AllDisjointClasses", "Ontology")}
_UNSUPPORTED = {OWL + n for n in ("unionOf", "complementOf", "oneOf", "hasValue", "minCardinality",
                                  "cardinality", "hasSelf", "propertyChainAxiom", "disjointUnionOf")}


def read_turtle_subset(text: str) -> Ontology:
    """Read a document written by ``emit_turtle`` back into an Ontology."""
    triples, _ = parse_turtle(text)
    for s, p, o in triples:
        if p[1] in _UNSUPPORTED or (p == _TYPE and o[0] == "iri" and o[1].startswith(OWL)
                                    and o[1] not in _DECL_BY_IRI and o[1] not in _STRUCTURAL
                                    and o[1] != OWL + "Class"):
            raise UnsupportedConstruct(f"{_short(p[1] if p != _TYPE else o[1])} is outside the supported subset")
    return _OntologyReader(triples).read()


def _short(iri: str) -> str:
    for p, ns in STANDARD_PREFIXES:
        if iri.startswith(ns):
            return f"{p}:{iri[len(ns):]}"
    return f"<{iri}>"


class _OntologyReader:
    def __init__(self, triples):
        self.triples = triples
        self.used = [False] * len(triples)
        self.by_subject: dict[Term, list[int]] = {}
        for k, (s, _, _) in enumerate(triples):
            self.by_subject.setdefault(s, []).append(k)
        self.module_ns: dict[str, str] = {}
        self.base = ""

    def take(self, subject: Term, pred: str, required: bool = True):
        for k in self.by_subject.get(subject, []):
            s, p, o = self.triples[k]
            if p[1] == pred and not self.used[k]:
                self.used[k] = True
                return o
        if required:
            raise UnsupportedConstruct(f"blank node lacks {_short(pred)}")
        return None

    def read(self) -> Ontology:
        name, module_iris, single, onto_iri = "", [], False, ""
        for k, (s, p, o) in enumerate(self.triples):
            if p == _TYPE and o == ("iri", OWL + "Ontology"):
                self.used[k] = True
                onto_iri = s[1]
                label = self.take(s, RDFS + "label", required=False)
                part_of = self.take(s, DCTERMS + "isPartOf", required=False)
                if part_of is not None:
                    single = True
                    module_iris.append(s[1])
                    name = label[1] if label else ""
                else:
                    name = label[1] if label else ""
                    while True:
                        part = self.take(s, DCTERMS + "hasPart", required=False)
                        if part is None:
                            break
                        module_iris.append(part[1])
        if not module_iris and not any(not u for u in self.used):
            return Ontology(name, onto_iri + "/" if onto_iri else "", ())
        if module_iris:
            first = module_iris[0]
            self.base = first[: max(first.rfind("/"), first.rfind("#")) + 1]
        self.module_ns = {iri[len(self.base):]: iri + "/" for iri in module_iris}
        self.single = module_iris[0][len(self.base):] if single else None

        found: list[tuple[str, Axiom]] = []
        for k, (s, p, o) in enumerate(self.triples):
            if self.used[k]:
                continue
            if p == _TYPE and o[0] == "iri" and o[1] in _DECL_BY_IRI and s[0] == "iri":
                self.used[k] = True
                mod, local = self.entity(s[1])
                found.append((mod, Declaration(local, _DECL_BY_IRI[o[1]])))
                self.take(s, RDFS + "isDefinedBy", required=False)
        for k, (s, p, o) in enumerate(self.triples):
            if self.used[k]:
                continue
            pred = p[1]
            if pred == RDFS + "subClassOf":
                self.used[k] = True
                found.append(self.owned(SubClassOf(self.expr(s), self.expr(o))))
            elif pred == OWL + "equivalentClass":
                self.used[k] = True
                found.append(self.owned(EquivalentClasses(self.expr(s), self.expr(o))))
            elif pred == OWL + "disjointWith":
                self.used[k] = True
                found.append(self.owned(DisjointClasses(frozenset({self.expr(s), self.expr(o)}))))
            elif p == _TYPE and o == ("iri", OWL + "AllDisjointClasses"):
                self.used[k] = True
                members = [self.expr(m) for m in self.collection(self.take(s, OWL + "members"))]
                found.append(self.owned(DisjointClasses(frozenset(members)), members))
            elif p == _TYPE and s[0] == "iri" and o[0] == "iri" and not o[1].startswith(OWL):
                self.used[k] = True
                mod, local = self.entity(s[1])
                cls = self.expr(o)
                found.append((mod, ClassAssertion(local, cls)))
        leftovers = [self.triples[k] for k, u in enumerate(self.used) if not u]
        if leftovers:
            s, p, o = leftovers[0]
            raise UnsupportedConstruct(f"unexpected triple with predicate {_short(p[1])}")

        data_props = {(m, ax.entity) for m, ax in found
                      if isinstance(ax, Declaration) and ax.category == DATA_PROPERTY_DECL}
        axioms: dict[str, list[Axiom]] = {n: [] for n in self.module_ns}
        for owner, ax in found:
            if not isinstance(ax, Declaration):
                ax = map_axiom(ax, lambda e: fix_data_top(e, data_props))
                ax = relative(ax, owner)
            axioms.setdefault(owner, []).append(ax)
        modules = tuple(
            OntologyModule(n, self.base + n + "/", tuple(sorted(dict.fromkeys(axs), key=axiom_sort_key)))
            for n, axs in axioms.items()
        )
        return Ontology(name, self.base, modules)

    def entity(self, iri: str) -> tuple[str, str]:
        best = None
        for mod, ns in self.module_ns.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(self.module_ns[best])):
                best = mod
        if best is not None:
            return best, iri[len(self.module_ns[best]):]
        if self.base and iri.startswith(self.base):
            rest = iri[len(self.base):]
            mod, sep, local = rest.partition("/")
            if sep and local:
                return mod, local
        raise UnsupportedConstruct(f"<{iri}> is not in a module namespace")

    def owned(self, ax: Axiom, order: list | None = None) -> tuple[str, Axiom]:
        """Attach an axiom to the module of its first named entity."""
        if self.single is not None:
            owner = self.single
        else:
            owner = None
            for e in order or _exprs(ax):
                owner = _first_module(e)
                if owner:
                    break
            if owner is None:
                raise UnsupportedConstruct("axiom mentions no module entity")
        return owner, ax

    def collection(self, head: Term) -> list[Term]:
        items = []
        while head != ("iri", RDF + "nil"):
            items.append(self.take(head, RDF + "first"))
            head = self.take(head, RDF + "rest")
        return items

    def expr(self, node: Term) -> ClassExpression:
        if node[0] == "iri":
            iri = node[1]
            if iri == OWL + "Thing":
                return THING
            if iri == RDFS + "Literal":
                return LITERAL
            if iri.startswith(XSD):
                return Datatype("xsd:" + iri[len(XSD):])
            if iri.startswith(RDF) or iri.startswith(RDFS):
                prefix = "rdf" if iri.startswith(RDF) else "rdfs"
                return Datatype(f"{prefix}:{iri.rsplit('#', 1)[1]}")
            mod, local = self.entity(iri)
            return Named(local, mod)
        if node[0] != "bnode":
            raise UnsupportedConstruct("literal used where a class expression was expected")
        kind = self.take(node, RDF + "type", required=False)
        if kind == ("iri", OWL + "Class"):
            ops = self.collection(self.take(node, OWL + "intersectionOf"))
            return And(tuple(self.expr(op) for op in ops))
        if kind != ("iri", OWL + "Restriction"):
            raise UnsupportedConstruct("blank node is neither a restriction nor an intersection")
        prop = self.prop(self.take(node, OWL + "onProperty"))
        some = self.take(node, OWL + "someValuesFrom", required=False)
        if some is not None:
            return Some(prop, self.expr(some))
        only = self.take(node, OWL + "allValuesFrom", required=False)
        if only is not None:
            return Only(prop, self.expr(only))
        card = self.take(node, OWL + "maxCardinality", required=False)
        if card is not None:
            return Max(int(card[1]), prop, THING)
        card = self.take(node, OWL + "maxQualifiedCardinality", required=False)
        if card is not None:
            filler = self.take(node, OWL + "onClass", required=False)
            if filler is None:
                filler = self.take(node, OWL + "onDataRange")
            return Max(int(card[1]), prop, self.expr(filler))
        raise UnsupportedConstruct("restriction of an unsupported kind")

    def prop(self, node: Term):
        if node[0] == "bnode":
            inner = self.take(node, OWL + "inverseOf")
            return Inverse(self.prop(inner))
        mod, local = self.entity(node[1])
        return Prop(local, mod)


def _exprs(ax: Axiom) -> list:
    if isinstance(ax, SubClassOf):
        return [ax.sub, ax.sup]
    if isinstance(ax, EquivalentClasses):
        return [ax.first, ax.second]
    if isinstance(ax, DisjointClasses):
        return ax.members()
    return []


def _first_module(expr) -> str | None:
    if isinstance(expr, Named):
        return expr.module
    if isinstance(expr, Datatype):
        return None
    if isinstance(expr, And):
        for op in expr.operands:
            m = _first_module(op)
            if m:
                return m
        return None
    p = expr.prop.prop if isinstance(expr.prop, Inverse) else expr.prop
    return p.module or _first_module(expr.filler)


# --------------------------------------------------------------- instance data


def _local(iri: str) -> str:
    return re.split(r"[/#]", iri)[-1]


def _datatype_name(iri: str) -> str:
    for p, ns in STANDARD_PREFIXES:
        if iri.startswith(ns):
            return f"{p}:{iri[len(ns):]}"
    return iri


def read_instance_store(text: str) -> InstanceStore:
    """Instance data in the Turtle subset; entities are matched by local name."""
    triples, _ = parse_turtle(text)
    classes, props = set(), set()
    for s, p, o in triples:
        if s[0] != "iri" or p[0] != "iri" or o[0] == "bnode":
            raise UnsupportedConstruct("blank nodes are not supported in instance data")
        subject = _local(s[1])
        if p == _TYPE:
            if o[1] in (OWL + "NamedIndividual",):
                continue
            classes.add((subject, _local(o[1])))
        elif o[0] == "lit":
            props.add((subject, _local(p[1]), Literal(o[1], _datatype_name(o[2]))))
        else:
            pred = SAME_AS if p[1] == OWL + "sameAs" else _local(p[1])
            props.add((subject, pred, _local(o[1])))
    return InstanceStore(frozenset(), frozenset(classes), frozenset(props))


def _pname(name: str) -> str:
    return f":{name}" if _PN_LOCAL.match(name) else f"<urn:odp:{name}>"


def emit_instance_store(store: InstanceStore, namespace: str = "http://example.org/data/") -> str:
    """One triple per line, sorted; plain strings print without a datatype."""
    lines = [f"@prefix : <{namespace}> .", f"@prefix owl: <{OWL}> .", f"@prefix xsd: <{XSD}> .", ""]
    body = []
    for ind, cls in store.class_assertions:
        body.append(f"{_pname(ind)} a {_pname(cls)} .")
    for s, p, o in store.property_assertions:
        pred = "owl:sameAs" if p == SAME_AS else _pname(p)
        if isinstance(o, Literal):
            text = '"' + o.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
            obj = text if o.datatype == "xsd:string" else f"{text}^^{o.datatype}"
        else:
            obj = _pname(o)
        body.append(f"{_pname(s)} {pred} {obj} .")
    return "\n".join(lines + sorted(body)) + "\n"
