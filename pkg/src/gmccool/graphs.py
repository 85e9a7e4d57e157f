"""Labeled graphs over the rose: folding, cores, canonical codes.

An edge ``(tail, head, label)`` has a positive label ``x``.  It carries two
darts: one terminating at ``head`` labeled ``x`` and one terminating at
``tail`` labeled ``x^-1``.  "Darts at v" always means darts terminating at v.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from gmccool.errors import InputError
from gmccool.freegroup import (
    SignedPermutation,
    dart_index,
    letter,
    parse_dart,
    signed_permutations,
)

Edge = tuple[int, int, int]
CanonicalCode = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        for t, h, lab in self.edges:
            if t not in vs or h not in vs:
                raise InputError(f"edge {(t, h, lab)} has an unknown endpoint")
            if lab <= 0:
                raise InputError("edge labels are stored positively")
        listed = [v for comp in self.components for v in comp]
        if sorted(listed) != sorted(self.vertices):
            raise InputError("components must partition the vertex set")

    # darts -------------------------------------------------------------------

    def darts(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(terminal vertex, label, origin vertex)`` for every dart."""
        for t, h, lab in self.edges:
            yield h, lab, t
            yield t, -lab, h

    def outgoing(self) -> dict[int, list[tuple[int, int]]]:
        """Map vertex -> list of (label, target) for darts leaving it."""
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for t, h, lab in self.edges:
            out[t].append((lab, h))
            out[h].append((-lab, t))
        return out

    def valence(self) -> dict[int, int]:
        val = {v: 0 for v in self.vertices}
        for t, h, _ in self.edges:
            val[t] += 1
            val[h] += 1
        return val

    def is_immersed(self) -> bool:
        return all(len({lab for lab, _ in darts}) == len(darts)
                   for darts in self.outgoing().values())

    def component_edges(self) -> list[tuple[Edge, ...]]:
        where = {v: i for i, comp in enumerate(self.components) for v in comp}
        parts: list[list[Edge]] = [[] for _ in self.components]
        for e in self.edges:
            parts[where[e[0]]].append(e)
        return [tuple(p) for p in parts]

    def component(self, i: int) -> LabeledGraph:
        comp = self.components[i]
        keep = set(comp)
        return LabeledGraph(comp, tuple(e for e in self.edges if e[0] in keep), (comp,))

    # I/O ---------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"from": t, "to": h, "label": letter(lab)} for t, h, lab in self.edges],
            "components": [list(c) for c in self.components],
        }

    @classmethod
    def from_json(cls, obj: dict) -> LabeledGraph:
        edges = []
        for e in obj["edges"]:
            d = parse_dart(e["label"])
            edges.append((e["from"], e["to"], d) if d > 0 else (e["to"], e["from"], -d))
        return cls(tuple(obj["vertices"]), tuple(edges), tuple(tuple(c) for c in obj["components"]))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for i, comp in enumerate(self.components):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="component {i + 1}";')
            for v in comp:
                lines.append(f"    v{v};")
            lines.append("  }")
        for t, h, lab in self.edges:
            lines.append(f'  v{t} -> v{h} [label="{letter(lab)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def dumps(g: LabeledGraph) -> str:
    return json.dumps(g.to_json(), sort_keys=True)


def disjoint_union(graphs: Sequence[LabeledGraph]) -> LabeledGraph:
    vertices: list[int] = []
    edges: list[Edge] = []
    comps: list[tuple[int, ...]] = []
    offset = 0
    for g in graphs:
        ren = {v: offset + k for k, v in enumerate(g.vertices)}
        vertices.extend(ren[v] for v in g.vertices)
        edges.extend((ren[t], ren[h], lab) for t, h, lab in g.edges)
        comps.extend(tuple(ren[v] for v in c) for c in g.components)
        offset += len(g.vertices)
    return LabeledGraph(tuple(vertices), tuple(edges), tuple(comps))


def wedge(words: Iterable[Sequence[int]]) -> tuple[LabeledGraph, int]:
    """Wedge of loops spelling ``words`` at a base vertex 0."""
    edges: list[Edge] = []
    nv = 1
    for w in words:
        prev = 0
        for k, d in enumerate(w):
            nxt = 0 if k == len(w) - 1 else nv
            if nxt:
                nv += 1
            edges.append((prev, nxt, d) if d > 0 else (nxt, prev, -d))
            prev = nxt
    vs = tuple(range(nv))
    return LabeledGraph(vs, tuple(edges), (vs,)), 0


def path_graph(word: Sequence[int]) -> LabeledGraph:
    edges = [(k, k + 1, d) if d > 0 else (k + 1, k, -d) for k, d in enumerate(word)]
    vs = tuple(range(len(word) + 1))
    return LabeledGraph(vs, tuple(edges), (vs,))


def cycle_graph(word: Sequence[int]) -> LabeledGraph:
    """Circle spelling the cyclic word (one vertex per letter)."""
    m = len(word)
    edges = []
    for k, d in enumerate(word):
        t, h = k, (k + 1) % m
        edges.append((t, h, d) if d > 0 else (h, t, -d))
    vs = tuple(range(m))
    return LabeledGraph(vs, tuple(edges), (vs,))


# --- folding ------------------------------------------------------------------


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            if y < x:
                x, y = y, x
            self.parent[y] = x


def _relabel(vertices, edges, comps, basepoint=None):
    order = {v: k for k, v in enumerate(vertices)}
    g = LabeledGraph(
        tuple(range(len(vertices))),
        tuple((order[t], order[h], lab) for t, h, lab in edges),
        tuple(tuple(order[v] for v in c) for c in comps),
    )
    return g, (order[basepoint] if basepoint is not None else None)


def fold_with_basepoint(g: LabeledGraph, basepoint: int | None = None,
                        rng: random.Random | None = None) -> tuple[LabeledGraph, int | None]:
    uf = _UnionFind(g.vertices)
    edges = list(g.edges)
    while True:
        if rng is not None:
            rng.shuffle(edges)
        seen: dict[tuple[int, int], int] = {}
        kept: list[Edge] = []
        merged = False
        for t, h, lab in edges:
            t, h = uf.find(t), uf.find(h)
            if (t, lab) in seen:
                uf.union(seen[(t, lab)], h)
                merged = True
                continue
            if (h, -lab) in seen:
                uf.union(seen[(h, -lab)], t)
                merged = True
                continue
            seen[(t, lab)] = h
            seen[(h, -lab)] = t
            kept.append((t, h, lab))
        edges = kept
        if not merged:
            break
    edges = [(uf.find(t), uf.find(h), lab) for t, h, lab in edges]
    edges.sort()
    comps = []
    for comp in g.components:
        roots = sorted({uf.find(v) for v in comp})
        comps.append(tuple(roots))
    vertices = [v for c in comps for v in c]
    bp = uf.find(basepoint) if basepoint is not None else None
    return _relabel(vertices, edges, comps, bp)


def fold(g: LabeledGraph, basepoint: int | None = None,
         rng: random.Random | None = None) -> LabeledGraph:
    """Fold until immersed.  ``rng`` randomises the fold order (for testing)."""
    return fold_with_basepoint(g, basepoint, rng)[0]


def core(g: LabeledGraph, keep_basepoint: bool = False, basepoint: int | None = None) -> LabeledGraph:
    """Iteratively delete vertices of valence <= 1."""
    edges = list(g.edges)
    alive = set(g.vertices)
    while True:
        val = {v: 0 for v in alive}
        for t, h, _ in edges:
            val[t] += 1
            val[h] += 1
        dead = {v for v, k in val.items() if k <= 1 and not (keep_basepoint and v == basepoint)}
        if not dead:
            break
        alive -= dead
        edges = [e for e in edges if e[0] in alive and e[1] in alive]
    comps = [tuple(v for v in c if v in alive) for c in g.components]
    vertices = [v for c in comps for v in c]
    return _relabel(vertices, edges, comps)[0]


# --- canonical codes ----------------------------------------------------------


def _component_code(out: dict[int, list[tuple[int, int]]], comp: Sequence[int]) -> tuple[int, ...]:
    best: tuple[int, ...] | None = None
    for start in comp:
        num = {start: 0}
        order = [start]
        queue = deque([start])
        code = [len(comp)]
        while queue:
            v = queue.popleft()
            for lab, w in sorted(out[v], key=lambda p: dart_index(p[0])):
                if w not in num:
                    num[w] = len(order)
                    order.append(w)
                    queue.append(w)
                code.append(dart_index(lab))
                code.append(num[w])
            code.append(-1)
        c = tuple(code)
        if best is None or c < best:
            best = c
    return best if best is not None else ()


def canonical_code(g: LabeledGraph) -> CanonicalCode:
    """Ordered per-component code; equal iff label-preserving isomorphic.

    Valid for immersed graphs, where a start vertex fixes the traversal.
    """
    out = g.outgoing()
    return tuple(_component_code(out, comp) for comp in g.components)


def code_to_str(code: CanonicalCode) -> str:
    return "|".join(".".join(str(x) for x in comp) for comp in code)


# --- relabelings --------------------------------------------------------------


def apply_signed_permutation(g: LabeledGraph, p: SignedPermutation) -> LabeledGraph:
    edges = []
    for t, h, lab in g.edges:
        d = p(lab)
        edges.append((t, h, d) if d > 0 else (h, t, -d))
    return LabeledGraph(g.vertices, tuple(edges), g.components)


def rose_equivalent(g: LabeledGraph, h: LabeledGraph, rank: int) -> SignedPermutation | None:
    """First signed permutation ``p`` (lexicographic) with ``p(g)`` coded like ``h``."""
    if len(g.components) != len(h.components):
        return None
    sizes = lambda x: [len(es) for es in x.component_edges()]
    if sizes(g) != sizes(h):
        return None
    target = canonical_code(h)
    for p in signed_permutations(rank):
        if canonical_code(apply_signed_permutation(g, p)) == target:
            return p
    return None


def substitute_edges(g: LabeledGraph, images: Sequence[Sequence[int]]) -> LabeledGraph:
    """Replace every edge labeled ``x_i`` by a path spelling ``images[i-1]``."""
    vertices = list(g.vertices)
    nxt = max(vertices, default=-1) + 1
    edges: list[Edge] = []
    where = {v: i for i, c in enumerate(g.components) for v in c}
    comps = [list(c) for c in g.components]
    for t, h, lab in g.edges:
        w = images[lab - 1]
        if not w:
            raise InputError("image of a generator is trivial")
        prev = t
        for k, d in enumerate(w):
            if k == len(w) - 1:
                cur = h
            else:
                cur = nxt
                nxt += 1
                vertices.append(cur)
                comps[where[t]].append(cur)
            edges.append((prev, cur, d) if d > 0 else (cur, prev, -d))
            prev = cur
    return LabeledGraph(tuple(vertices), tuple(edges), tuple(tuple(c) for c in comps))


def edge_count(g: LabeledGraph) -> list[int]:
    return [len(es) for es in g.component_edges()]


def group_by_vertex(edges: Iterable[Edge]) -> dict[int, list[Edge]]:
    by = defaultdict(list)
    for e in edges:
        by[e[0]].append(e)
        by[e[1]].append(e)
    return by
