"""Marked graphs: finite graphs with a homotopy equivalence to the rose.

A marked graph is stored as ``(edges, tree, letters, marking)``.  Tree edges
read the empty word, the non-tree edge with ``letters[e] = j`` reads ``x_j``,
and the map to the rose is ``marking o (that reading)``.  The left action of
an automorphism ``g`` replaces the marking ``u`` by ``g o u``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from gmccool.freegroup import (
    Automorphism,
    Word,
    compose,
    factor_images,
    invert,
    inverse,
    is_inner,
    multiply,
    reduce,
    substitute,
)

GraphEdge = tuple[int, int]
# a cellular isomorphism: vertex map plus, per edge, (image edge, orientation sign)
Iso = tuple[tuple[int, ...], tuple[tuple[int, int], ...]]


@dataclass(frozen=True, eq=False)
class MarkedGraph:
    nverts: int
    edges: tuple[GraphEdge, ...]
    letters: tuple[int, ...]
    marking: Automorphism
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.marking.rank

    @classmethod
    def rose(cls, marking: Automorphism) -> MarkedGraph:
        n = marking.rank
        return cls(1, tuple((0, 0) for _ in range(n)), tuple(range(1, n + 1)), marking)

    def is_rose(self) -> bool:
        return self.nverts == 1

    def act(self, g: Automorphism) -> MarkedGraph:
        return MarkedGraph(self.nverts, self.edges, self.letters, compose(g, self.marking))

    def tree(self) -> list[int]:
        return [e for e, j in enumerate(self.letters) if j == 0]

    @cached_property
    def marking_inverse_images(self) -> tuple[Word, ...]:
        return invert(self.marking).images

    @cached_property
    def tree_paths(self) -> list[list[tuple[int, int]]]:
        """Dart path in the tree from vertex 0 to each vertex."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.nverts)]
        for e in self.tree():
            t, h = self.edges[e]
            adj[t].append((e, 1, h))
            adj[h].append((e, -1, t))
        paths: list[list[tuple[int, int]] | None] = [None] * self.nverts
        paths[0] = []
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for e, s, w in adj[v]:
                if paths[w] is None:
                    paths[w] = paths[v] + [(e, s)]
                    queue.append(w)
        return paths

    @cached_property
    def basis_loops(self) -> dict[int, list[tuple[int, int]]]:
        """Letter ``j`` -> dart path of the basis loop read as ``x_j``."""
        loops = {}
        paths = self.tree_paths
        for e, j in enumerate(self.letters):
            if j:
                t, h = self.edges[e]
                back = [(f, -s) for f, s in reversed(paths[h])]
                loops[j] = paths[t] + [(e, 1)] + back
        return loops

    def structure_key(self) -> tuple:
        return (self.nverts, self.edges, self.letters)

    def to_json(self) -> dict:
        return {"vertices": self.nverts, "edges": [list(e) for e in self.edges],
                "letters": list(self.letters), "marking": self.marking.to_json()}


def loop_words(x: MarkedGraph, edge_words: Sequence[Word]) -> tuple[Word, ...]:
    """Images of the basis loops of ``x`` when edge ``e`` reads ``edge_words[e]``."""
    out = []
    for j in range(1, x.rank + 1):
        w: list[int] = []
        for e, s in x.basis_loops[j]:
            w.extend(edge_words[e] if s > 0 else inverse(edge_words[e]))
        out.append(reduce(w))
    return tuple(out)


def edge_reading(x: MarkedGraph) -> list[Word]:
    return [(j,) if j else () for j in x.letters]


# --- separating edges, valence, trees ----------------------------------------


def _components_without(nverts: int, edges: Sequence[GraphEdge], skip: int | None = None) -> int:
    parent = list(range(nverts))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    count = nverts
    for k, (t, h) in enumerate(edges):
        if k == skip:
            continue
        a, b = find(t), find(h)
        if a != b:
            parent[a] = b
            count -= 1
    return count


def has_separating_edge(nverts: int, edges: Sequence[GraphEdge]) -> bool:
    return any(t != h and _components_without(nverts, edges, k) > 1
               for k, (t, h) in enumerate(edges))


def valences(nverts: int, edges: Sequence[GraphEdge]) -> list[int]:
    val = [0] * nverts
    for t, h in edges:
        val[t] += 1
        val[h] += 1
    return val


def is_spine_graph(nverts: int, edges: Sequence[GraphEdge]) -> bool:
    return (min(valences(nverts, edges)) >= 3 and not has_separating_edge(nverts, edges)
            and _components_without(nverts, edges) == 1)


def forests(nverts: int, edges: Sequence[GraphEdge]) -> Iterator[frozenset[int]]:
    """Nonempty edge sets without cycles (loops never qualify)."""
    m = len(edges)
    for k in range(1, nverts):
        for combo in itertools.combinations(range(m), k):
            sub = [edges[e] for e in combo]
            if any(t == h for t, h in sub):
                continue
            if _components_without(nverts, sub) == nverts - k:
                yield frozenset(combo)


def maximal_trees(nverts: int, edges: Sequence[GraphEdge]) -> list[frozenset[int]]:
    if nverts == 1:
        return [frozenset()]
    return [f for f in forests(nverts, edges) if len(f) == nverts - 1]


# --- normalisation and collapse ----------------------------------------------


def normalize(nverts: int, edges: Sequence[GraphEdge], words: Sequence[Word],
              marking: Automorphism) -> MarkedGraph:
    """Marked graph whose map to the rose is ``marking o words`` on edges.

    A breadth-first tree from vertex 0 is chosen; the remaining edges are
    lettered in index order and the change of basis is folded into the marking.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nverts)]
    for e, (t, h) in enumerate(edges):
        adj[t].append((e, h))
        adj[h].append((e, t))
    seen = [False] * nverts
    seen[0] = True
    tree = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e, w in sorted(adj[v]):
            if not seen[w]:
                seen[w] = True
                tree.add(e)
                queue.append(w)
    letters = []
    j = 0
    for e in range(len(edges)):
        if e in tree:
            letters.append(0)
        else:
            j += 1
            letters.append(j)
    skeleton = MarkedGraph(nverts, tuple(edges), tuple(letters), Automorphism.identity(marking.rank))
    images = loop_words(skeleton, words)
    if all(w == (i,) for i, w in enumerate(images, start=1)):
        u = marking
    else:
        u = compose(marking, factor_images(images))
    return MarkedGraph(nverts, tuple(edges), tuple(letters), u)


def collapse(x: MarkedGraph, forest: frozenset[int]) -> MarkedGraph:
    """Collapse the edges in ``forest``; the marking descends."""
    parent = list(range(x.nverts))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(x.nverts)]
    for e in sorted(forest):
        t, h = x.edges[e]
        a, b = find(t), find(h)
        parent[max(a, b)] = min(a, b)
        adj[t].append((e, 1, h))
        adj[h].append((e, -1, t))
    reading = edge_reading(x)
    # word from each class representative (smallest vertex) to each vertex
    offset: list[Word | None] = [None] * x.nverts
    for v in range(x.nverts):
        if find(v) == v:
            offset[v] = ()
            queue = deque([v])
            while queue:
                a = queue.popleft()
                for e, s, b in adj[a]:
                    if offset[b] is None:
                        step = reading[e] if s > 0 else inverse(reading[e])
                        offset[b] = multiply(offset[a], step)
                        queue.append(b)
    roots = sorted({find(v) for v in range(x.nverts)})
    index = {r: k for k, r in enumerate(roots)}
    new_edges = []
    words = []
    for e, (t, h) in enumerate(x.edges):
        if e in forest:
            continue
        new_edges.append((index[find(t)], index[find(h)]))
        words.append(multiply(offset[t], reading[e], inverse(offset[h])))
    return normalize(len(roots), new_edges, words, x.marking)


def collapse_to_roses(x: MarkedGraph) -> list[MarkedGraph]:
    return [collapse(x, T) if T else x for T in maximal_trees(x.nverts, x.edges)]


# --- isomorphisms -------------------------------------------------------------


def _pair_classes(nverts: int, edges: Sequence[GraphEdge]) -> dict[tuple[int, int], list[int]]:
    classes: dict[tuple[int, int], list[int]] = {}
    for e, (t, h) in enumerate(edges):
        classes.setdefault((min(t, h), max(t, h)), []).append(e)
    return classes


def underlying_key(nverts: int, edges: Sequence[GraphEdge]) -> tuple:
    """Canonical form of the unlabelled multigraph (minimum over vertex orders)."""
    best = None
    for perm in itertools.permutations(range(nverts)):
        form = tuple(sorted(tuple(sorted((perm[t], perm[h]))) for t, h in edges))
        if best is None or form < best:
            best = form
    return (nverts, best)


def isomorphisms(x: MarkedGraph, y: MarkedGraph) -> Iterator[Iso]:
    """All cellular isomorphisms from the graph of ``x`` to that of ``y``."""
    if x.nverts != y.nverts or len(x.edges) != len(y.edges):
        return
    cx = _pair_classes(x.nverts, x.edges)
    cy = _pair_classes(y.nverts, y.edges)
    for vmap in itertools.permutations(range(x.nverts)):
        options = []
        ok = True
        for (a, b), es in cx.items():
            key = (min(vmap[a], vmap[b]), max(vmap[a], vmap[b]))
            fs = cy.get(key, [])
            if len(fs) != len(es):
                ok = False
                break
            choices = []
            for image in itertools.permutations(fs):
                if a == b:
                    for signs in itertools.product((1, -1), repeat=len(es)):
                        choices.append(tuple(zip(es, image, signs)))
                else:
                    choice = []
                    for e, f in zip(es, image):
                        t, _ = x.edges[e]
                        choice.append((e, f, 1 if y.edges[f][0] == vmap[t] else -1))
                    choices.append(tuple(choice))
            options.append(choices)
        if not ok or sum(len(es) for es in cx.values()) != len(x.edges):
            continue
        for combo in itertools.product(*options):
            emap = [None] * len(x.edges)
            for part in combo:
                for e, f, s in part:
                    emap[e] = (f, s)
            yield tuple(vmap), tuple(emap)


def change_of_marking(x: MarkedGraph, y: MarkedGraph, iso: Iso) -> tuple[Word, ...]:
    """Images of the automorphism ``y``-reading o ``iso`` on the basis loops of ``x``."""
    ry = edge_reading(y)
    words = []
    for f, s in iso[1]:
        words.append(ry[f] if s > 0 else inverse(ry[f]))
    return loop_words(x, words)


def _transport_images(x: MarkedGraph, y: MarkedGraph, iso: Iso) -> tuple[Word, ...]:
    beta = change_of_marking(x, y, iso)
    inner = tuple(substitute(beta, w) for w in x.marking_inverse_images)
    return tuple(substitute(y.marking.images, w) for w in inner)


def marked_equal(x: MarkedGraph, y: MarkedGraph) -> bool:
    for iso in isomorphisms(x, y):
        images = _transport_images(x, y, iso)
        if is_inner(Automorphism(x.rank, (), images)) is not None:
            return True
    return False


def transporter_images(x: MarkedGraph, y: MarkedGraph) -> list[tuple[Word, ...]]:
    return [_transport_images(x, y, iso) for iso in isomorphisms(x, y)]


def transporter_element(x: MarkedGraph, y: MarkedGraph, iso: Iso) -> Automorphism:
    """Factored ``g`` with ``g . x = y`` realised by ``iso``."""
    beta = factor_images(change_of_marking(x, y, iso))
    return compose(y.marking, compose(beta, invert(x.marking)))


# --- invariants ---------------------------------------------------------------


def graph_length(x: MarkedGraph, w: Word) -> int:
    """Cyclic length in the graph of the loop that the marking sends to ``w``."""
    v = substitute(x.marking_inverse_images, w)
    darts: list[tuple[int, int]] = []
    for d in v:
        loop = x.basis_loops[abs(d)]
        seq = loop if d > 0 else [(e, -s) for e, s in reversed(loop)]
        for dart in seq:
            if darts and darts[-1] == (dart[0], -dart[1]):
                darts.pop()
            else:
                darts.append(dart)
    while len(darts) > 1 and darts[0] == (darts[-1][0], -darts[-1][1]):
        darts = darts[1:-1]
    return len(darts)


def length_signature(x: MarkedGraph) -> tuple[int, ...]:
    n = x.rank
    words: list[Word] = [(i,) for i in range(1, n + 1)]
    for i, j in itertools.combinations(range(1, n + 1), 2):
        words.append((i, j))
        words.append((i, -j))
    return tuple(graph_length(x, w) for w in words)


def marked_key(x: MarkedGraph) -> tuple:
    """Invariant of the marked graph; equal marked graphs have equal keys."""
    if "key" not in x._cache:
        x._cache["key"] = (underlying_key(x.nverts, x.edges), length_signature(x))
    return x._cache["key"]


def dedupe(graphs: Sequence[MarkedGraph]) -> list[MarkedGraph]:
    buckets: dict[tuple, list[MarkedGraph]] = {}
    out = []
    for g in graphs:
        bucket = buckets.setdefault(marked_key(g), [])
        if any(marked_equal(g, h) for h in bucket):
            continue
        bucket.append(g)
        out.append(g)
    return out


# --- blowups of a rose --------------------------------------------------------


def labeled_trees(k: int) -> Iterator[tuple[GraphEdge, ...]]:
    """All labelled trees on ``k`` vertices via Pruefer sequences."""
    if k == 1:
        yield ()
        return
    if k == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(k), repeat=k - 2):
        degree = [1] * k
        for a in seq:
            degree[a] += 1
        edges = []
        for a in seq:
            leaf = min(v for v in range(k) if degree[v] == 1)
            edges.append((min(leaf, a), max(leaf, a)))
            degree[leaf] -= 1
            degree[a] -= 1
        u, w = [v for v in range(k) if degree[v] == 1]
        edges.append((u, w))
        yield tuple(sorted(edges))


def blowups(rose: MarkedGraph) -> list[MarkedGraph]:
    """Marked graphs in the spine that collapse onto ``rose`` (rose included)."""
    n = rose.rank
    found = [rose]
    for k in range(2, 2 * n - 1):
        for tree in labeled_trees(k):
            for ends in itertools.product(range(k), repeat=2 * n):
                edges = list(tree) + [(ends[2 * i], ends[2 * i + 1]) for i in range(n)]
                if not is_spine_graph(k, edges):
                    continue
                letters = (0,) * len(tree) + rose.letters
                found.append(MarkedGraph(k, tuple(edges), letters, rose.marking))
    return dedupe(found)
