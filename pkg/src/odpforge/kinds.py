"""The fifteen axiom kinds a single schema-diagram edge can give rise to."""

from __future__ import annotations

from enum import Enum


class AxiomKind(Enum):
    # number, keyword, label, description-logic template, Manchester template
    DISJOINTNESS = (1, "disjointness", "disjointness", "A ⊓ B ⊑ ⊥", "A DisjointWith B")
    DOMAIN = (2, "domain", "domain", "∃R.⊤ ⊑ A", "R some owl:Thing SubClassOf A")
    SCOPED_DOMAIN = (3, "scoped-domain", "scoped domain", "∃R.B ⊑ A", "R some B SubClassOf A")
    RANGE = (4, "range", "range", "⊤ ⊑ ∀R.B", "owl:Thing SubClassOf R only B")
    SCOPED_RANGE = (5, "scoped-range", "scoped range", "A ⊑ ∀R.B", "A SubClassOf R only B")
    EXISTENTIAL = (6, "existential", "existential", "A ⊑ ∃R.B", "A SubClassOf R some B")
    INVERSE_EXISTENTIAL = (
        7, "inv-existential", "inverse existential", "B ⊑ ∃R⁻.A",
        "B SubClassOf inverse R some A",
    )
    FUNCTIONALITY = (
        8, "functional", "functionality", "⊤ ⊑ ≤1R.⊤",
        "owl:Thing SubClassOf R max 1 owl:Thing",
    )
    QUALIFIED_FUNCTIONALITY = (
        9, "qual-functional", "qualified functionality", "⊤ ⊑ ≤1R.B",
        "owl:Thing SubClassOf R max 1 B",
    )
    SCOPED_FUNCTIONALITY = (
        10, "scoped-functional", "scoped functionality", "A ⊑ ≤1R.⊤",
        "A SubClassOf R max 1 owl:Thing",
    )
    QUALIFIED_SCOPED_FUNCTIONALITY = (
        11, "qual-scoped-functional", "qualified scoped functionality", "A ⊑ ≤1R.B",
        "A SubClassOf R max 1 B",
    )
    INVERSE_FUNCTIONALITY = (
        12, "inv-functional", "inverse functionality", "⊤ ⊑ ≤1R⁻.⊤",
        "owl:Thing SubClassOf inverse R max 1 owl:Thing",
    )
    INVERSE_QUALIFIED_FUNCTIONALITY = (
        13, "inv-qual-functional", "inverse qualified functionality", "⊤ ⊑ ≤1R⁻.A",
        "owl:Thing SubClassOf inverse R max 1 A",
    )
    INVERSE_SCOPED_FUNCTIONALITY = (
        14, "inv-scoped-functional", "inverse scoped functionality", "B ⊑ ≤1R⁻.⊤",
        "B SubClassOf inverse R max 1 owl:Thing",
    )
    INVERSE_QUALIFIED_SCOPED_FUNCTIONALITY = (
        15, "inv-qual-scoped-functional", "inverse qualified scoped functionality",
        "B ⊑ ≤1R⁻.A", "B SubClassOf inverse R max 1 A",
    )

    def __init__(self, number: int, keyword: str, label: str, dl: str, manchester: str):
        self.number = number
        self.keyword = keyword
        self.label = label
        self.dl = dl
        self.manchester = manchester

    def __lt__(self, other: "AxiomKind") -> bool:
        return self.number < other.number

    @property
    def uses_inverse(self) -> bool:
        return "inverse" in self.manchester

    @property
    def per_edge(self) -> bool:
        return self is not AxiomKind.DISJOINTNESS

    @property
    def allowed_on_data(self) -> bool:
        return self.per_edge and not self.uses_inverse

    @property
    def family(self) -> str:
        if self in (AxiomKind.DOMAIN, AxiomKind.SCOPED_DOMAIN):
            return "domain"
        if self in (AxiomKind.RANGE, AxiomKind.SCOPED_RANGE):
            return "range"
        if self in (AxiomKind.EXISTENTIAL, AxiomKind.INVERSE_EXISTENTIAL):
            return "existential"
        if self is AxiomKind.DISJOINTNESS:
            return "disjointness"
        return "functionality"


KINDS_BY_KEYWORD: dict[str, AxiomKind] = {k.keyword: k for k in AxiomKind if k.per_edge}

AxiomSelection = frozenset  # frozenset[AxiomKind]


def selection(*keywords: str) -> frozenset[AxiomKind]:
    """Build a selection from DSL keywords, e.g. ``selection("scoped-range")``."""
    try:
        return frozenset(KINDS_BY_KEYWORD[k] for k in keywords)
    except KeyError as exc:
        raise ValueError(f"unknown axiom kind keyword {exc.args[0]!r}") from None
