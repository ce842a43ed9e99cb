"""Naive reference materializer used as a test oracle.

Written without union-find or indexes: equality is an explicit set of
pairs closed after every merge, and every lookup scans all facts.  It follows
the same staging as the production engine (closure to fixpoint, then one
round of existential demands collected up front) so that witness names line
up, but shares no code with it.
"""

from __future__ import annotations

from odpforge.axioms import DisjointClasses, EquivalentClasses, SubClassOf
from odpforge.expressions import And, Inverse, Max, Named, Only, Some

FRESH = "_ex:"


def _local(expr):
    if isinstance(expr, Named):
        return Named(expr.name)
    if isinstance(expr, And):
        return And(tuple(_local(o) for o in expr.operands))
    p = expr.prop
    prop = Inverse(type(p.prop)(p.prop.name)) if isinstance(p, Inverse) else type(p)(p.name)
    if isinstance(expr, Max):
        return Max(expr.n, prop, _local(expr.filler))
    return type(expr)(prop, _local(expr.filler))


class Reference:
    def __init__(self, axioms, classes, props, bound):
        self.rules = []
        for ax in axioms:
            if isinstance(ax, SubClassOf):
                self.rules.append((_local(ax.sub), _local(ax.sup)))
            elif isinstance(ax, EquivalentClasses):
                a, b = _local(ax.first), _local(ax.second)
                self.rules += [(a, b), (b, a)]
        self.rules = list(dict.fromkeys(self.rules))
        self.disjoint = [ax for ax in axioms if isinstance(ax, DisjointClasses)]
        self.bound = bound
        self.types = set(classes)
        self.edges = set(props)
        self.inds = {i for i, _ in classes} | {s for s, _, _ in props} | {o for _, _, o in props}
        self.depth0 = {i: 0 for i in self.inds}
        self.same = {(i, i) for i in self.inds}

    # equality as an explicit relation

    def members(self, x):
        return {b for a, b in self.same if a == x}

    def rep(self, x):
        return min(self.members(x), key=lambda n: (n.startswith(FRESH), n))

    def depth(self, x):
        return min(self.depth0[m] for m in self.members(x))

    def merge(self, a, b):
        if b in self.members(a):
            return False
        group = self.members(a) | self.members(b)
        self.same |= {(x, y) for x in group for y in group}
        return True

    def reps(self):
        return sorted({self.rep(i) for i in self.inds})

    # semantics

    def holds(self, x, e):
        if isinstance(e, Named):
            return e.name == "Thing" or any((m, e.name) in self.types for m in self.members(x))
        if isinstance(e, And):
            return all(self.holds(x, o) for o in e.operands)
        if isinstance(e, Some):
            return any(self.holds(y, e.filler) for y in self.neighbours(x, e.prop))
        return False

    def neighbours(self, x, prop):
        group = self.members(x)
        if isinstance(prop, Inverse):
            found = {self.rep(s) for s, p, o in self.edges if p == prop.prop.name and o in group}
        else:
            found = {self.rep(o) for s, p, o in self.edges if p == prop.name and s in group}
        return sorted(found)

    def add_type(self, x, name):
        if name == "Thing" or self.holds(x, Named(name)):
            return False
        self.types.add((self.rep(x), name))
        return True

    def add_edge(self, s, p, o):
        for s2, p2, o2 in self.edges:
            if p2 == p and s2 in self.members(s) and o2 in self.members(o):
                return False
        self.edges.add((s, p, o))
        return True

    def apply(self, x, e, path, create):
        x = self.rep(x)
        if isinstance(e, Named):
            return self.add_type(x, e.name)
        if isinstance(e, And):
            changed = False
            for k, o in enumerate(e.operands):
                changed |= self.apply(x, o, f"{path}.{k}", create)
            return changed
        if isinstance(e, Only):
            changed = False
            for y in self.neighbours(x, e.prop):
                changed |= self.apply(y, e.filler, f"{path}.0", create)
            return changed
        if isinstance(e, Max):
            if e.n != 1:
                return False
            fillers = [y for y in self.neighbours(x, e.prop) if self.holds(y, e.filler)]
            changed = False
            for y in fillers[1:]:
                changed |= self.merge(fillers[0], y)
            return changed
        if not create:
            return False
        if any(self.holds(y, e.filler) for y in self.neighbours(x, e.prop)):
            return False
        name = f"{FRESH}{path}:{x}"
        if name in self.inds:
            target = self.rep(name)
        else:
            if self.depth(x) >= self.bound:
                return False
            self.inds.add(name)
            self.depth0[name] = self.depth(x) + 1
            self.same.add((name, name))
            target = name
        if isinstance(e.prop, Inverse):
            changed = self.add_edge(target, e.prop.prop.name, x)
        else:
            changed = self.add_edge(x, e.prop.name, target)
        return self.apply(target, e.filler, f"{path}.0", create) or changed

    def run(self):
        while True:
            changed = True
            while changed:
                changed = False
                for i, (sub, sup) in enumerate(self.rules):
                    for x in self.reps():
                        if self.holds(x, sub):
                            changed |= self.apply(x, sup, str(i), False)
            demands = [(x, i, sup) for i, (sub, sup) in enumerate(self.rules)
                       for x in self.reps() if self.holds(x, sub)]
            created = False
            for x, i, sup in demands:
                created |= self.apply(x, sup, str(i), True)
            if not created:
                return self

    # observable facts, expanded over equality, fresh witnesses left out

    def named_facts(self):
        named = sorted(i for i in self.inds if not i.startswith(FRESH))
        types = {(x, c) for x in named for m in self.members(x) for (y, c) in self.types if y == m}
        edges = set()
        for s, p, o in self.edges:
            for s2 in self.members(s):
                for o2 in self.members(o):
                    if not s2.startswith(FRESH) and not o2.startswith(FRESH):
                        edges.add((s2, p, o2))
        same = {(a, b) for a, b in self.same if a < b and not a.startswith(FRESH) and not b.startswith(FRESH)}
        return types, edges, same


def reference_facts(axioms, classes, props, bound):
    return Reference(list(axioms), classes, props, bound).run().named_facts()


def engine_facts(saturation):
    """The same observable facts read off a production Saturation."""
    fresh = saturation.fresh_individuals
    named = sorted(i for i in saturation.store.individuals if i not in fresh)
    groups = {}
    for x in saturation.store.individuals:
        groups.setdefault(saturation.rep(x), set()).add(x)
    types = {(x, c) for x in named for c in saturation.classes_of(x)}
    edges = set()
    for s, p, o in saturation.store.property_assertions:
        if p == "sameAs":
            continue
        for s2 in groups.get(s, {s}):
            for o2 in groups.get(o, {o}):
                if s2 not in fresh and o2 not in fresh:
                    edges.add((s2, p, o2))
    same = {(a, b) for a in named for b in named if a < b and saturation.same(a, b)}
    return types, edges, same
