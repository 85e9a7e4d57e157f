"""Stallings graphs of subgroup tuples, volumes, pieces and separation counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from gmccool.errors import InputError
from gmccool.freegroup import (
    MAX_RANK,
    Automorphism,
    Word,
    format_word,
    letter,
    parse_word,
    reduce,
)
from gmccool.graphs import (
    CanonicalCode,
    LabeledGraph,
    canonical_code,
    code_to_str,
    core,
    disjoint_union,
    fold,
    substitute_edges,
    wedge,
)


@dataclass(frozen=True)
class SubgroupTuple:
    rank: int
    components: tuple[tuple[Word, ...], ...]

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise InputError(f"rank must be in 1..{MAX_RANK}")
        if not self.components:
            raise InputError("a subgroup tuple needs at least one component")
        for comp in self.components:
            if not comp:
                raise InputError("empty generator list")
            for w in comp:
                if any(d == 0 or abs(d) > self.rank for d in w):
                    raise InputError(f"generator {format_word(w)} is outside F_{self.rank}")

    @classmethod
    def of(cls, rank: int, *components: Iterable[str | Sequence[int]]) -> SubgroupTuple:
        comps = []
        for comp in components:
            comps.append(tuple(parse_word(w, rank) if isinstance(w, str) else reduce(w) for w in comp))
        return cls(rank, tuple(comps))

    def to_json(self) -> dict:
        return {"rank": self.rank,
                "components": [[format_word(w) for w in comp] for comp in self.components]}

    @classmethod
    def from_json(cls, obj: dict) -> SubgroupTuple:
        if not isinstance(obj, dict) or "rank" not in obj or "components" not in obj:
            raise InputError('subgroup tuple JSON needs "rank" and "components"')
        rank = obj["rank"]
        if not isinstance(rank, int):
            raise InputError("rank must be an integer")
        comps = obj["components"]
        if not isinstance(comps, list) or not all(isinstance(c, list) for c in comps):
            raise InputError("components must be a list of lists of words")
        return cls.of(rank, *comps)

    def map(self, f: Automorphism) -> SubgroupTuple:
        return SubgroupTuple(self.rank, tuple(tuple(f(w) for w in comp) for comp in self.components))


@dataclass(frozen=True)
class StallingsTuple:
    rank: int
    graphs: tuple[LabeledGraph, ...]

    @cached_property
    def code(self) -> CanonicalCode:
        return tuple(canonical_code(g)[0] for g in self.graphs)

    @cached_property
    def pieces(self) -> tuple[tuple[frozenset[int], ...], ...]:
        return tuple(_pieces(g) for g in self.graphs)

    @property
    def volume(self) -> tuple[int, ...]:
        return tuple(len(g.edges) for g in self.graphs)

    def code_str(self) -> str:
        return code_to_str(self.code)

    def union(self) -> LabeledGraph:
        return disjoint_union(self.graphs)

    def to_json(self) -> dict:
        return {"rank": self.rank, "graph": self.union().to_json(),
                "volume": list(self.volume), "code": self.code_str()}


def _pieces(g: LabeledGraph) -> tuple[frozenset[int], ...]:
    at: dict[int, list[int]] = {v: [] for v in g.vertices}
    for t, h, lab in g.edges:
        at[h].append(lab)
        at[t].append(-lab)
    return tuple(frozenset(at[v]) for v in g.vertices)


def component_graph(rank: int, generators: Sequence[Word]) -> LabeledGraph:
    """Cyclic core of the folded wedge of generator loops."""
    g, base = wedge(generators)
    c = core(fold(g, base))
    if not c.edges:
        raise InputError("component generates the trivial subgroup")
    return c


def stallings_tuple(K: SubgroupTuple) -> StallingsTuple:
    return StallingsTuple(K.rank, tuple(component_graph(K.rank, comp) for comp in K.components))


def transform(S: StallingsTuple, f: Automorphism) -> StallingsTuple:
    """Stallings tuple of ``f(K)`` computed from that of ``K``."""
    out = []
    for g in S.graphs:
        out.append(core(fold(substitute_edges(g, f.images))))
    return StallingsTuple(S.rank, tuple(out))


def volume(S: StallingsTuple) -> tuple[int, ...]:
    return S.volume


def pieces(S: StallingsTuple) -> tuple[tuple[frozenset[int], ...], ...]:
    """Per component, per vertex: labels of the darts terminating there."""
    return S.pieces


def separates(A: frozenset[int] | set[int], boundary: frozenset[int]) -> bool:
    inside = len(boundary & A)
    return 0 < inside < len(boundary)


def separation_count(S: StallingsTuple, A: Iterable[int]) -> list[int]:
    A = frozenset(A)
    return [sum(1 for b in comp if separates(A, b)) for comp in S.pieces]


def label_count(S: StallingsTuple, e: int) -> list[int]:
    x = abs(e)
    return [sum(1 for *_, lab in g.edges if lab == x) for g in S.graphs]


def check_submodularity(S: StallingsTuple, A: Iterable[int], B: Iterable[int]) -> bool:
    A, B = frozenset(A), frozenset(B)
    meet = separation_count(S, A & B)
    join = separation_count(S, A | B)
    a = separation_count(S, A)
    b = separation_count(S, B)
    return all(m + j <= x + y for m, j, x, y in zip(meet, join, a, b))


def star_graph_edges(S: StallingsTuple, component: int = 0) -> list[tuple[int, int]]:
    """Star graph edges: one per valence-2 piece, joining its two labels.

    Pieces of higher valence are returned as all pairs, which is only a
    diagnostic; the modified star graph proper is :func:`star_graph_dot`.
    """
    edges = []
    for b in S.pieces[component]:
        labs = sorted(b, key=lambda d: (abs(d), d < 0))
        for i in range(len(labs)):
            for j in range(i + 1, len(labs)):
                edges.append((labs[i], labs[j]))
    return sorted(edges)


def star_graph_dot(S: StallingsTuple) -> str:
    """Modified star graph: dart nodes plus one node per piece."""
    lines = ["graph star {"]
    for d in range(1, S.rank + 1):
        lines.append(f'  "{letter(d)}";')
        lines.append(f'  "{letter(-d)}";')
    for i, comp in enumerate(S.pieces):
        for v, b in enumerate(comp):
            node = f"Y{i + 1}_{v}"
            lines.append(f'  "{node}" [shape=point];')
            for d in sorted(b, key=lambda d: (abs(d), d < 0)):
                lines.append(f'  "{node}" -- "{letter(d)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_subgroup_tuple(text: str) -> SubgroupTuple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    return SubgroupTuple.from_json(obj)
