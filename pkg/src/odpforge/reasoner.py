"""Bounded forward-chaining materializer, entailment, queries and lint.

The rule reading of the catalog fragment:

* a ``SubClassOf`` fires for every node whose type facts satisfy the left
  side; ``only`` and ``max`` on the left never fire (no tableau reasoning);
* on the right, class names add types, ``only`` types the existing fillers,
  ``max 1`` merges fillers (no unique-name assumption) and ``some`` creates
  one fresh filler per (node, position) when none exists and the node's
  creation depth is below the bound;
* disjointness never blocks anything, it records clashes after saturation.

Entities are matched by local name, so the per-module namespaces of a
merged ontology collapse into one signature.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .axioms import (
    CLASS_DECL,
    ClassAssertion,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    Ontology,
    SubClassOf,
    generate_edge_axioms,
    render_axiom,
)
from .errors import INFO, WARNING, Diagnostic, OdpSyntaxError, UnknownEntity
from .expressions import (
    LITERAL,
    THING_NAME,
    And,
    ClassExpression,
    Datatype,
    Inverse,
    Max,
    Named,
    Only,
    Prop,
    Some,
    base_prop,
)
from .kinds import AxiomKind

DEFAULT_DEPTH = 3
SAME_AS = "sameAs"
FRESH_PREFIX = "_ex:"


@dataclass(frozen=True, order=True)
class Literal:
    value: str
    datatype: str = "xsd:string"

    def __str__(self) -> str:
        return f'"{self.value}"^^{self.datatype}'


Node = Union[str, Literal]


@dataclass(frozen=True)
class InstanceStore:
    """ABox: class and property assertions by local name.

    ``fresh`` maps existential witnesses to their creation depth so that a
    saturated store can be fed back in unchanged.
    """

    individuals: frozenset[str] = frozenset()
    class_assertions: frozenset[tuple[str, str]] = frozenset()
    property_assertions: frozenset[tuple[str, str, Node]] = frozenset()
    fresh: frozenset[tuple[str, int]] = frozenset()

    def __post_init__(self):
        ca = frozenset(self.class_assertions)
        pa = frozenset(self.property_assertions)
        inds = set(self.individuals) | {i for i, _ in ca} | {s for s, _, _ in pa}
        inds |= {o for _, _, o in pa if isinstance(o, str)}
        object.__setattr__(self, "individuals", frozenset(inds))
        object.__setattr__(self, "class_assertions", ca)
        object.__setattr__(self, "property_assertions", pa)
        object.__setattr__(self, "fresh", frozenset(self.fresh))

    @classmethod
    def of(cls, classes: Iterable[tuple[str, str]] = (), props: Iterable[tuple[str, str, Node]] = ()) -> "InstanceStore":
        return cls(frozenset(), frozenset(classes), frozenset(props))

    def fresh_depths(self) -> dict[str, int]:
        return dict(self.fresh)

    def facts(self) -> frozenset:
        return frozenset(("type", i, c) for i, c in self.class_assertions) | frozenset(
            ("prop", s, p, o) for s, p, o in self.property_assertions
        )

    def __len__(self) -> int:
        return len(self.class_assertions) + len(self.property_assertions)


@dataclass(frozen=True)
class Clash:
    axiom: DisjointClasses
    individual: str
    classes: tuple[str, str]
    members: tuple[str, ...]

    @property
    def reason(self) -> str:
        who = self.individual if len(self.members) == 1 else f"{self.individual} (= {', '.join(self.members)})"
        return f"{who} is both {self.classes[0]} and {self.classes[1]}, violating {render_axiom(self.axiom)}"


@dataclass(frozen=True)
class Saturation:
    store: InstanceStore
    equality: dict[str, str] = field(compare=False)
    clashes: tuple[Clash, ...]
    fresh_individuals: frozenset[str]
    depth_used: int
    vocabulary: frozenset[str] = field(default=frozenset(), compare=False)

    def rep(self, node: Node) -> Node:
        if isinstance(node, Literal):
            return node
        return self.equality.get(node, node)

    def same(self, a: str, b: str) -> bool:
        return self.rep(a) == self.rep(b)

    def classes_of(self, node: Node) -> set[str]:
        r = self.rep(node)
        return {c for i, c in self.store.class_assertions if i == r}

    def equivalence_classes(self) -> list[tuple[str, ...]]:
        groups: dict[str, list[str]] = {}
        for name, rep in self.equality.items():
            groups.setdefault(rep, []).append(name)
        return sorted(tuple(sorted(g)) for g in groups.values() if len(g) > 1)


# ---------------------------------------------------------------- rule loading


@dataclass(frozen=True)
class RuleSet:
    inclusions: tuple[SubClassOf, ...]
    disjointness: tuple[DisjointClasses, ...]
    facts: tuple[ClassAssertion, ...]
    vocabulary: frozenset[str]


def _strip(expr: ClassExpression) -> ClassExpression:
    if isinstance(expr, Named):
        return Named(expr.name)
    if isinstance(expr, Datatype):
        return expr
    if isinstance(expr, And):
        return And(tuple(_strip(op) for op in expr.operands))
    p = expr.prop
    prop = Inverse(Prop(p.prop.name)) if isinstance(p, Inverse) else Prop(p.name)
    if isinstance(expr, Max):
        return Max(expr.n, prop, _strip(expr.filler))
    return type(expr)(prop, _strip(expr.filler))


def rules_of(ontology: Ontology | Iterable) -> RuleSet:
    """Flatten an ontology (or a plain axiom list) into local-name rules."""
    axioms = ontology.merged_axioms if isinstance(ontology, Ontology) else list(ontology)
    inclusions: list[SubClassOf] = []
    disjoint: list[DisjointClasses] = []
    facts: list[ClassAssertion] = []
    vocab: set[str] = set()
    for ax in axioms:
        if isinstance(ax, Declaration):
            vocab.add(ax.entity)
        elif isinstance(ax, SubClassOf):
            inclusions.append(SubClassOf(_strip(ax.sub), _strip(ax.sup)))
        elif isinstance(ax, EquivalentClasses):
            a, b = _strip(ax.first), _strip(ax.second)
            inclusions += [SubClassOf(a, b), SubClassOf(b, a)]
        elif isinstance(ax, DisjointClasses):
            disjoint.append(DisjointClasses(frozenset(Named(c.name) for c in ax.classes)))
        elif isinstance(ax, ClassAssertion):
            facts.append(ClassAssertion(ax.individual, _strip(ax.cls)))
    return RuleSet(
        tuple(dict.fromkeys(inclusions)), tuple(dict.fromkeys(disjoint)), tuple(dict.fromkeys(facts)),
        frozenset(vocab),
    )


def class_key(expr: Named | Datatype) -> str:
    return expr.name


# ------------------------------------------------------------------ the engine


class _Engine:
    def __init__(self, rules: RuleSet, store: InstanceStore, bound: int):
        self.rules = rules
        self.bound = bound
        self.depth: dict[str, int] = {i: 0 for i in store.individuals}
        for name, d in store.fresh:
            self.depth[name] = d
        self.parent: dict[str, str] = {}
        self.types: dict[Node, set[str]] = {}
        self.edges: set[tuple[Node, str, Node]] = set()
        for ind in store.individuals:
            self.types.setdefault(ind, set())
        for ca in rules.facts:
            self.depth.setdefault(ca.individual, 0)
            self.add_type(ca.individual, class_key(ca.cls))
        for ind, cls in store.class_assertions:
            self.add_type(ind, cls)
        pending_same = []
        for s, p, o in store.property_assertions:
            if p == SAME_AS and isinstance(o, str):
                pending_same.append((s, o))
            else:
                self.add_edge(s, p, o)
        for a, b in pending_same:
            self.merge(a, b)
        self._reindex()

    # -- equality

    def find(self, x: Node) -> Node:
        if isinstance(x, Literal):
            return x
        while self.parent.get(x, x) != x:
            x = self.parent[x]
        return x

    def _better(self, a: str, b: str) -> bool:
        fa, fb = a.startswith(FRESH_PREFIX), b.startswith(FRESH_PREFIX)
        if fa != fb:
            return fb
        return a < b

    def merge(self, a: Node, b: Node) -> bool:
        if isinstance(a, Literal) or isinstance(b, Literal):
            return False
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        keep, drop = (ra, rb) if self._better(ra, rb) else (rb, ra)
        self.parent[drop] = keep
        self.types.setdefault(keep, set()).update(self.types.pop(drop, set()))
        self.depth[keep] = min(self.depth.get(keep, 0), self.depth.get(drop, 0))
        self.edges = {(self.find(s), p, self.find(o)) for s, p, o in self.edges}
        self._reindex()
        return True

    # -- facts

    def add_type(self, node: Node, cls: str) -> bool:
        if cls == THING_NAME:
            return False
        node = self.find(node)
        if isinstance(node, Literal) and cls == node.datatype:
            return False
        bucket = self.types.setdefault(node, set())
        if cls in bucket:
            return False
        bucket.add(cls)
        return True

    def add_edge(self, s: Node, p: str, o: Node) -> bool:
        fact = (self.find(s), p, self.find(o))
        if fact in self.edges:
            return False
        self.edges.add(fact)
        for node in (fact[0], fact[2]):
            self.types.setdefault(node, set())
            if isinstance(node, str):
                self.depth.setdefault(node, 0)
        if hasattr(self, "succ"):
            self.succ.setdefault((fact[0], p), set()).add(fact[2])
            self.pred.setdefault((fact[2], p), set()).add(fact[0])
        return True

    def _reindex(self) -> None:
        self.succ: dict[tuple[Node, str], set[Node]] = {}
        self.pred: dict[tuple[Node, str], set[Node]] = {}
        for s, p, o in self.edges:
            self.succ.setdefault((s, p), set()).add(o)
            self.pred.setdefault((o, p), set()).add(s)

    def neighbours(self, node: Node, prop) -> list[Node]:
        if isinstance(prop, Inverse):
            found = self.pred.get((node, prop.prop.name), ())
        else:
            found = self.succ.get((node, prop.name), ())
        return sorted(found, key=_node_key)

    def nodes(self) -> list[Node]:
        return sorted({self.find(n) for n in self.types}, key=_node_key)

    # -- rule semantics

    def holds(self, node: Node, expr: ClassExpression) -> bool:
        if isinstance(expr, Named):
            if expr.is_thing:
                return True
            return expr.name in self.types.get(node, ())
        if isinstance(expr, Datatype):
            if expr == LITERAL:
                return isinstance(node, Literal)
            if isinstance(node, Literal) and node.datatype == expr.name:
                return True
            return expr.name in self.types.get(node, ())
        if isinstance(expr, And):
            return all(self.holds(node, op) for op in expr.operands)
        if isinstance(expr, Some):
            return any(self.holds(y, expr.filler) for y in self.neighbours(node, expr.prop))
        return False  # only / max on the left are not used

    def apply(self, node: Node, expr: ClassExpression, path: str, create: bool) -> bool:
        """Make ``node`` satisfy ``expr``; returns True if anything changed."""
        if isinstance(expr, (Named, Datatype)):
            if expr == LITERAL or (isinstance(expr, Named) and expr.is_thing):
                return False
            return self.add_type(node, expr.name)
        if isinstance(expr, And):
            changed = False
            for k, op in enumerate(expr.operands):
                changed |= self.apply(self.find(node), op, f"{path}.{k}", create)
            return changed
        if isinstance(expr, Only):
            changed = False
            for y in self.neighbours(node, expr.prop):
                changed |= self.apply(y, expr.filler, f"{path}.0", create)
            return changed
        if isinstance(expr, Max):
            if expr.n != 1:
                return False
            fillers = [y for y in self.neighbours(node, expr.prop) if self.holds(y, expr.filler)]
            changed = False
            for y in fillers[1:]:
                changed |= self.merge(fillers[0], y)
            return changed
        # Some
        if not create or isinstance(node, Literal):
            return False
        if any(self.holds(y, expr.filler) for y in self.neighbours(node, expr.prop)):
            return False
        name = f"{FRESH_PREFIX}{path}:{node}"
        existing = self.find(name) if name in self.depth else None
        if existing is None:
            if self.depth.get(node, 0) >= self.bound:
                return False
            self.depth[name] = self.depth.get(node, 0) + 1
            self.types.setdefault(name, set())
            target: Node = name
        else:
            target = existing
        changed = self._link(node, expr.prop, target)
        changed |= self.apply(self.find(target), expr.filler, f"{path}.0", create)
        return changed

    def _link(self, node: Node, prop, target: Node) -> bool:
        if isinstance(prop, Inverse):
            return self.add_edge(target, prop.prop.name, node)
        return self.add_edge(node, prop.name, target)

    # -- driver

    def closure(self) -> None:
        changed = True
        while changed:
            changed = False
            for i, ax in enumerate(self.rules.inclusions):
                for node in self.nodes():
                    node = self.find(node)
                    if self.holds(node, ax.sub):
                        changed |= self.apply(node, ax.sup, str(i), create=False)

    def existential_round(self) -> bool:
        demands = [
            (node, i, ax)
            for i, ax in enumerate(self.rules.inclusions)
            for node in self.nodes()
            if isinstance(node, str) and self.holds(node, ax.sub)
        ]
        changed = False
        for node, i, ax in demands:
            changed |= self.apply(self.find(node), ax.sup, str(i), create=True)
        return changed

    def run(self) -> None:
        while True:
            self.closure()
            if not self.existential_round():
                break

    def clashes(self) -> list[Clash]:
        members: dict[str, list[str]] = {}
        for n in self.depth:
            members.setdefault(self.find(n), []).append(n)
        seen: set[tuple] = set()
        out = []
        for ax in self.rules.disjointness:
            for node in self.nodes():
                types = self.types.get(node, set())
                for a, b in ax.pairs():
                    key = (node, a.name, b.name)
                    if a.name in types and b.name in types and key not in seen:
                        seen.add(key)
                        group = tuple(sorted(members.get(node, [node]))) if isinstance(node, str) else (str(node),)
                        out.append(Clash(ax, str(node), (a.name, b.name), group))
        return out

    def saturation(self) -> Saturation:
        classes = set()
        for node, types in self.types.items():
            if isinstance(node, str):
                classes |= {(node, c) for c in types}
        props: set[tuple[str, str, Node]] = {(s, p, o) for s, p, o in self.edges if isinstance(s, str)}
        equality = {n: self.find(n) for n in self.depth}
        props |= {(n, SAME_AS, r) for n, r in equality.items() if n != r}
        fresh = {n for n in self.depth if n.startswith(FRESH_PREFIX)}
        inds = frozenset(self.depth)
        store = InstanceStore(inds, frozenset(classes), frozenset(props),
                              frozenset((n, self.depth[n]) for n in fresh))
        used = max((self.depth[n] for n in fresh), default=0)
        vocab = self.rules.vocabulary
        return Saturation(store, equality, tuple(self.clashes()), frozenset(fresh), used, vocab)


def _node_key(node: Node) -> tuple:
    if isinstance(node, Literal):
        return (1, node.value, node.datatype)
    return (0, node, "")


# ------------------------------------------------------------------ public API


def materialize(ontology: Ontology | Iterable, store: InstanceStore, depth: int = DEFAULT_DEPTH) -> Saturation:
    """Saturate ``store`` under ``ontology`` with existential witnesses up to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    engine = _Engine(rules_of(ontology), store, depth)
    engine.run()
    return engine.saturation()


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Union[str, Literal], ...]

    def __str__(self) -> str:
        return f"{self.predicate}({', '.join(str(a) if isinstance(a, Literal) else a for a in self.args)})"


_ATOM_RE = re.compile(r"^\s*([A-Za-z_][\w:-]*)\s*\((.*)\)\s*\.?\s*$")
_LITERAL_RE = re.compile(r'^"((?:[^"\\]|\\.)*)"(?:\^\^([\w-]+:[\w-]+))?$')


def parse_atom(text: str, line: int = 1) -> Atom:
    """``Recipe(?r)``, ``requires(?r, ?s)``, ``hasName(?r, "Pulled pork")``."""
    m = _ATOM_RE.match(text)
    if not m:
        raise OdpSyntaxError(f"malformed atom {text.strip()!r}", line, 1, "predicate(arg, ...)")
    pred = m.group(1).rpartition(":")[2]
    args: list[Union[str, Literal]] = []
    for raw in _split_args(m.group(2)):
        raw = raw.strip()
        lit = _LITERAL_RE.match(raw)
        if lit:
            args.append(Literal(lit.group(1), lit.group(2) or "xsd:string"))
        elif re.fullmatch(r"\?[\w-]+|[\w:-]+", raw):
            keep = raw.startswith(("?", FRESH_PREFIX))
            args.append(raw if keep else raw.rpartition(":")[2])
        else:
            raise OdpSyntaxError(f"bad argument {raw!r}", line, 1, "variable, name or literal")
    if len(args) not in (1, 2):
        raise OdpSyntaxError(f"atom {text.strip()!r} needs one or two arguments", line, 1)
    return Atom(pred, tuple(args))


def _split_args(text: str) -> list[str]:
    out, cur, quoted = [], "", False
    for ch in text:
        if ch == '"' and not cur.endswith("\\"):
            quoted = not quoted
        if ch == "," and not quoted:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_query(text: str) -> list[Atom]:
    """One atom per line; ``#`` starts a comment."""
    atoms = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            atoms.append(parse_atom(line, n))
    return atoms


def _check_vocabulary(atoms: list[Atom], sat: Saturation) -> None:
    if not sat.vocabulary:
        return
    known = set(sat.vocabulary) | {c for _, c in sat.store.class_assertions}
    known |= {p for _, p, _ in sat.store.property_assertions}
    for a in atoms:
        if a.predicate not in known and a.predicate != THING_NAME:
            raise UnknownEntity(f"unknown predicate {a.predicate!r}")


def query(saturation: Saturation, pattern: list[Atom] | str, include_fresh: bool = False) -> list[dict[str, Node]]:
    """All matches of the conjunctive pattern, as sorted variable bindings."""
    atoms = parse_query(pattern) if isinstance(pattern, str) else list(pattern)
    _check_vocabulary(atoms, saturation)
    sat = saturation
    types: dict[str, set[str]] = {}
    for i, c in sat.store.class_assertions:
        types.setdefault(c, set()).add(i)
    edges: dict[str, set[tuple[str, Node]]] = {}
    for s, p, o in sat.store.property_assertions:
        if p != SAME_AS:
            edges.setdefault(p, set()).add((s, o))
    fresh = sat.fresh_individuals
    results: list[dict[str, Node]] = []

    def value(arg, binding):
        if isinstance(arg, str) and arg.startswith("?"):
            return binding.get(arg)
        return sat.rep(arg)

    def search(k: int, binding: dict[str, Node]) -> None:
        if k == len(atoms):
            if include_fresh or not any(isinstance(v, str) and v in fresh for v in binding.values()):
                results.append({name[1:]: v for name, v in binding.items()})
            return
        atom = atoms[k]
        if len(atom.args) == 1:
            arg = atom.args[0]
            members = types.get(atom.predicate, set())
            if atom.predicate == THING_NAME:
                members = {i for i, _ in sat.store.class_assertions} | set(sat.equality.values())
            bound = value(arg, binding)
            if bound is not None:
                if bound in members:
                    search(k + 1, binding)
                return
            for m in sorted(members):
                search(k + 1, {**binding, arg: m})
            return
        s_arg, o_arg = atom.args
        for s, o in sorted(edges.get(atom.predicate, ()), key=lambda e: (e[0], _node_key(e[1]))):
            b = dict(binding)
            ok = True
            for arg, val in ((s_arg, s), (o_arg, o)):
                cur = value(arg, b)
                if cur is None:
                    b[arg] = val
                elif cur != val:
                    ok = False
                    break
            if ok:
                search(k + 1, b)

    search(0, {})
    unique = {tuple(sorted(r.items(), key=lambda kv: kv[0])): r for r in results}
    return [unique[k] for k in sorted(unique, key=lambda t: [(n, _node_key(v)) for n, v in t])]


def entails(ontology: Ontology | Iterable, store: InstanceStore, assertion: Atom | str | list,
            depth: int = DEFAULT_DEPTH) -> bool:
    """True when the (possibly variable-bearing) assertion holds after saturation.

    Variables are read existentially, so ``requires(r, ?s)`` asks whether
    some filler exists, fresh witnesses included.
    """
    if isinstance(assertion, str):
        atoms = parse_query(assertion)
    elif isinstance(assertion, Atom):
        atoms = [assertion]
    else:
        atoms = list(assertion)
    sat = materialize(ontology, store, depth)
    return bool(query(sat, atoms, include_fresh=True))


# ------------------------------------------------------------------------ lint


def lint(ontology: Ontology) -> list[Diagnostic]:
    """Axiomatization checklist and coverage warnings; never errors."""
    diags: list[Diagnostic] = []
    per_edge = [k for k in sorted(AxiomKind, key=lambda k: k.number) if k.per_edge]
    for module in ontology.modules:
        if module.graph is None:
            continue
        present = set(module.axioms)
        for edge in module.graph.edges:
            allowed = [k for k in per_edge if edge.kind == "object" or k.allowed_on_data]
            chosen = [k.keyword for k in allowed if generate_edge_axioms(edge, [k])[0] in present]
            missing = [k.keyword for k in allowed if k.keyword not in chosen]
            diags.append(Diagnostic(
                INFO, "Checklist", edge.property,
                f"{module.name}: {edge.source} -{edge.property}-> {edge.target}: "
                f"selected [{', '.join(chosen)}]; not selected [{', '.join(missing)}]",
            ))

    classes: set[str] = set()
    props: set[str] = set()
    disjoint: set[str] = set()
    domain: set[str] = set()
    range_: set[str] = set()
    for ax in ontology.merged_axioms:
        if isinstance(ax, Declaration):
            if ax.category == CLASS_DECL:
                classes.add(ax.entity)
            elif ax.category != "NamedIndividual":
                props.add(ax.entity)
        elif isinstance(ax, DisjointClasses):
            disjoint |= {c.name for c in ax.classes}
        elif isinstance(ax, SubClassOf):
            if isinstance(ax.sub, Some) and isinstance(ax.sup, Named) and not ax.sup.is_thing \
                    and isinstance(ax.sub.prop, Prop):
                domain.add(ax.sub.prop.name)
            if isinstance(ax.sup, Only) and isinstance(ax.sup.prop, Prop):
                range_.add(ax.sup.prop.name)
    for c in sorted(classes - disjoint):
        diags.append(Diagnostic(WARNING, "NoDisjointness", c, "class is in no disjointness axiom"))
    for p in sorted(props):
        if p not in domain and p not in range_:
            diags.append(Diagnostic(WARNING, "NoDomainOrRange", p,
                                    "property has neither a domain-family nor a range-family axiom"))
        elif p in range_ and p not in domain:
            diags.append(Diagnostic(INFO, "RangeOnly", p, "range-family only"))
        elif p in domain and p not in range_:
            diags.append(Diagnostic(INFO, "DomainOnly", p, "domain-family only"))
    return diags
